#pragma once

#include "emacreg/types.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include <memory>
#include <span>
#include <vector>

namespace emacreg {

// Builds a compressed sparse matrix from coordinate triplets; duplicates are
// summed. Throws std::invalid_argument on out-of-range indices.
SpMat from_triplets(std::span<const Index> rows, std::span<const Index> cols,
                    std::span<const Scalar> values, Index nrows, Index ncols);

SpMat from_triplets(const std::vector<Triplet>& triplets, Index nrows, Index ncols);

// Assembles a block grid into one matrix. Null entries are zero blocks; every
// block row/column must have at least one matrix fixing its dimension, and
// all present blocks must agree on dimensions.
SpMat block_compose(const std::vector<std::vector<const SpMat*>>& blocks);

// Appends scale * M as triplets at the given offsets, optionally skipping
// rows flagged in `skip_rows` (global row indexing).
void append_block(std::vector<Triplet>& out, const SpMat& m, Index row_offset,
                  Index col_offset, Scalar scale = 1.0,
                  const std::vector<char>* skip_rows = nullptr,
                  bool transpose = false);

// Replaces each listed row by the identity row.
void zero_rows_set_identity(SpMat& a, std::span<const Index> rows);

// Direct sparse LU with fill-reducing column ordering. Deterministic:
// identical inputs give identical factors and solutions.
class Factorization {
 public:
  explicit Factorization(const SpMat& a);

  VecX solve(const VecX& rhs) const;
  Index rows() const { return rows_; }

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>,
                  Eigen::COLAMDOrdering<Index>>
      lu_;
  Index rows_ = 0;
  Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index> matrix_;  // residual check
};

Factorization factor(const SpMat& a);
VecX solve(const Factorization& f, const VecX& rhs);

}  // namespace emacreg
