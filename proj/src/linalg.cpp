#include "emacreg/linalg.hpp"

#include <cassert>
#include <cmath>

namespace emacreg {

SpMat from_triplets(std::span<const Index> rows, std::span<const Index> cols,
                    std::span<const Scalar> values, Index nrows, Index ncols) {
  if (rows.size() != cols.size() || rows.size() != values.size())
    throw std::invalid_argument("from_triplets: mismatched array lengths");
  std::vector<Triplet> ts;
  ts.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= nrows || cols[k] < 0 || cols[k] >= ncols)
      throw std::invalid_argument("from_triplets: index (" + std::to_string(rows[k]) +
                                  ", " + std::to_string(cols[k]) + ") out of range");
    ts.emplace_back(rows[k], cols[k], values[k]);
  }
  return from_triplets(ts, nrows, ncols);
}

SpMat from_triplets(const std::vector<Triplet>& triplets, Index nrows, Index ncols) {
  for (const auto& t : triplets)
    if (t.row() < 0 || t.row() >= nrows || t.col() < 0 || t.col() >= ncols)
      throw std::invalid_argument("from_triplets: index (" + std::to_string(t.row()) +
                                  ", " + std::to_string(t.col()) + ") out of range");
  SpMat m(nrows, ncols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

SpMat block_compose(const std::vector<std::vector<const SpMat*>>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("block_compose: empty grid");
  const std::size_t nrows = blocks.size();
  const std::size_t ncols = blocks.front().size();
  for (const auto& row : blocks)
    if (row.size() != ncols)
      throw std::invalid_argument("block_compose: ragged block grid");

  std::vector<Index> row_dim(nrows, -1), col_dim(ncols, -1);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) {
      const SpMat* b = blocks[i][j];
      if (!b) continue;
      if (row_dim[i] >= 0 && row_dim[i] != b->rows())
        throw std::invalid_argument("block_compose: row dimension mismatch at block (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
      if (col_dim[j] >= 0 && col_dim[j] != b->cols())
        throw std::invalid_argument("block_compose: column dimension mismatch at block (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
      row_dim[i] = b->rows();
      col_dim[j] = b->cols();
    }
  for (std::size_t i = 0; i < nrows; ++i)
    if (row_dim[i] < 0)
      throw std::invalid_argument("block_compose: block row " + std::to_string(i) +
                                  " has no matrix");
  for (std::size_t j = 0; j < ncols; ++j)
    if (col_dim[j] < 0)
      throw std::invalid_argument("block_compose: block column " + std::to_string(j) +
                                  " has no matrix");

  std::vector<Index> row_off(nrows + 1, 0), col_off(ncols + 1, 0);
  for (std::size_t i = 0; i < nrows; ++i) row_off[i + 1] = row_off[i] + row_dim[i];
  for (std::size_t j = 0; j < ncols; ++j) col_off[j + 1] = col_off[j] + col_dim[j];

  std::vector<Triplet> ts;
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j)
      if (blocks[i][j]) append_block(ts, *blocks[i][j], row_off[i], col_off[j]);
  return from_triplets(ts, row_off[nrows], col_off[ncols]);
}

void append_block(std::vector<Triplet>& out, const SpMat& m, Index row_offset,
                  Index col_offset, Scalar scale, const std::vector<char>* skip_rows,
                  bool transpose) {
  for (Index r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it) {
      const Index gr = row_offset + (transpose ? it.col() : it.row());
      const Index gc = col_offset + (transpose ? it.row() : it.col());
      if (skip_rows && (*skip_rows)[gr]) continue;
      out.emplace_back(gr, gc, scale * it.value());
    }
}

void zero_rows_set_identity(SpMat& a, std::span<const Index> rows) {
  std::vector<char> flag(a.rows(), 0);
  for (Index r : rows) flag[r] = 1;
  for (Index r = 0; r < a.outerSize(); ++r) {
    if (!flag[r]) continue;
    for (SpMat::InnerIterator it(a, r); it; ++it) it.valueRef() = 0;
  }
  for (Index r : rows) a.coeffRef(r, r) = 1.0;
  a.makeCompressed();
}

Factorization::Factorization(const SpMat& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("factor: matrix must be square");
  rows_ = a.rows();
  Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index> cm(a);
  lu_.analyzePattern(cm);
  lu_.factorize(cm);
  if (lu_.info() != Eigen::Success)
    throw FactorizationError("factor: " + lu_.lastErrorMessage());
  matrix_ = std::move(cm);
}

VecX Factorization::solve(const VecX& rhs) const {
  if (rhs.size() != rows_)
    throw std::invalid_argument("solve: rhs length " + std::to_string(rhs.size()) +
                                " does not match system size " + std::to_string(rows_));
  VecX x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success) throw FactorizationError("solve failed");
#ifndef NDEBUG
  const Scalar resid = (matrix_ * x - rhs).cwiseAbs().maxCoeff();
  assert(resid <= 1e-10 * (rhs.cwiseAbs().maxCoeff() + 1.0) &&
         "solve: residual exceeds direct-solver tolerance");
#endif
  return x;
}

Factorization factor(const SpMat& a) { return Factorization(a); }

VecX solve(const Factorization& f, const VecX& rhs) { return f.solve(rhs); }

}  // namespace emacreg
