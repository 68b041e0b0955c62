#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace emacreg {

using Scalar = double;
using Index  = std::int32_t;

using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Compressed row storage: row offsets, strictly increasing column indices,
// values, duplicates summed on construction.
using SpMat   = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, Index>;
using Triplet = Eigen::Triplet<Scalar, Index>;

// Pointwise data: scalar-, vector-, and matrix-valued functions of (x, t).
using ScalarFn = std::function<Scalar(const Vec2&, Scalar)>;
using VectorFn = std::function<Vec2(const Vec2&, Scalar)>;
using TensorFn = std::function<Mat2(const Vec2&, Scalar)>;

struct TopologyError : std::runtime_error {
  explicit TopologyError(const std::string& what) : std::runtime_error(what) {}
};

struct FactorizationError : std::runtime_error {
  explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

struct StateError : std::runtime_error {
  explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace emacreg
