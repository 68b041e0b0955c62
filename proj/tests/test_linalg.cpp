#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "emacreg/linalg.hpp"

#include <random>

using namespace emacreg;

TEST_CASE("empty triplet list gives a zero matrix") {
  const SpMat m = from_triplets({}, 3, 4);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 4);
  CHECK(m.nonZeros() == 0);
}

TEST_CASE("duplicate triplets are summed") {
  std::vector<Triplet> ts = {{0, 0, 1.0}, {0, 0, 2.0}, {1, 1, 5.0}};
  const SpMat m = from_triplets(ts, 2, 2);
  CHECK(m.coeff(0, 0) == 3.0);
  CHECK(m.coeff(1, 1) == 5.0);
}

TEST_CASE("out-of-range triplets are rejected") {
  std::vector<Triplet> ts = {{0, 5, 1.0}};
  CHECK_THROWS_AS(from_triplets(ts, 2, 2), std::invalid_argument);
  const Index rows[] = {3};
  const Index cols[] = {0};
  const Scalar vals[] = {1.0};
  CHECK_THROWS_AS(from_triplets(rows, cols, vals, 2, 2), std::invalid_argument);
}

TEST_CASE("permutation matrix reorders a vector") {
  // (0,1), (1,2), (2,0): y = P x with y0 = x1, y1 = x2, y2 = x0.
  std::vector<Triplet> ts = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}};
  const SpMat p = from_triplets(ts, 3, 3);
  VecX x(3);
  x << 7, 8, 9;
  const VecX y = p * x;
  CHECK(y[0] == 8.0);
  CHECK(y[1] == 9.0);
  CHECK(y[2] == 7.0);
}

TEST_CASE("block compose: diagonal identities double the size") {
  std::vector<Triplet> ts = {{0, 0, 1.0}, {1, 1, 1.0}};
  const SpMat eye = from_triplets(ts, 2, 2);
  const SpMat m = block_compose({{&eye, nullptr}, {nullptr, &eye}});
  CHECK(m.rows() == 4);
  CHECK(m.cols() == 4);
  for (int i = 0; i < 4; ++i) CHECK(m.coeff(i, i) == 1.0);
  CHECK(m.nonZeros() == 4);
}

TEST_CASE("block compose: saddle structure is symmetric") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unif(-1, 1);
  std::vector<Triplet> at, bt;
  for (int i = 0; i < 4; ++i) {
    at.emplace_back(i, i, 4.0);
    for (int j = 0; j < i; ++j) {
      const double v = unif(rng);
      at.emplace_back(i, j, v);
      at.emplace_back(j, i, v);
    }
  }
  for (int q = 0; q < 2; ++q)
    for (int j = 0; j < 4; ++j) bt.emplace_back(q, j, unif(rng));
  const SpMat a = from_triplets(at, 4, 4);
  const SpMat b = from_triplets(bt, 2, 4);
  const SpMat bt_mat = SpMat(b.transpose());
  const SpMat s = block_compose({{&a, &bt_mat}, {&b, nullptr}});
  CHECK(s.rows() == 6);
  const Eigen::MatrixXd d = Eigen::MatrixXd(s);
  CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block compose rejects mismatched dimensions") {
  const SpMat a = from_triplets({}, 2, 2);
  const SpMat b = from_triplets({}, 3, 3);
  CHECK_THROWS_AS(block_compose({{&a, &b}}), std::invalid_argument);
  CHECK_THROWS_AS(block_compose({{&a, nullptr}, {nullptr, nullptr}}),
                  std::invalid_argument);
}

TEST_CASE("factor/solve: identity and a 2x2 system") {
  std::vector<Triplet> ts = {{0, 0, 1.0}, {1, 1, 1.0}};
  const SpMat eye = from_triplets(ts, 2, 2);
  VecX b(2);
  b << 3, 3;
  CHECK((solve(factor(eye), b) - b).norm() == 0.0);

  std::vector<Triplet> ts2 = {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}};
  const SpMat m = from_triplets(ts2, 2, 2);
  const VecX x = solve(factor(m), b);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("solve residual stays within the direct-solver bound") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unif(-1, 1);
  const Index n = 60;
  std::vector<Triplet> ts;
  for (Index i = 0; i < n; ++i) {
    ts.emplace_back(i, i, 10.0 + unif(rng));
    ts.emplace_back(i, (i + 7) % n, unif(rng));
    ts.emplace_back(i, (i + 23) % n, unif(rng));
  }
  const SpMat a = from_triplets(ts, n, n);
  VecX b(n);
  for (Index i = 0; i < n; ++i) b[i] = unif(rng);
  const Factorization f = factor(a);
  const VecX x = f.solve(b);
  CHECK((a * x - b).cwiseAbs().maxCoeff() <= 1e-10 * (b.cwiseAbs().maxCoeff() + 1.0));
}

TEST_CASE("repeat solves are bit-identical") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unif(-1, 1);
  const Index n = 40;
  std::vector<Triplet> ts;
  for (Index i = 0; i < n; ++i) {
    ts.emplace_back(i, i, 5.0);
    ts.emplace_back(i, (i + 3) % n, unif(rng));
  }
  const SpMat a = from_triplets(ts, n, n);
  VecX b(n);
  for (Index i = 0; i < n; ++i) b[i] = unif(rng);
  const VecX x1 = solve(factor(a), b);
  const VecX x2 = solve(factor(a), b);
  CHECK((x1 - x2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact singularity raises a factorization error") {
  std::vector<Triplet> ts = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}};
  const SpMat m = from_triplets(ts, 2, 2);  // rank 1
  CHECK_THROWS_AS(factor(m), FactorizationError);
  try {
    factor(m);
  } catch (const FactorizationError& e) {
    CHECK(std::string(e.what()).size() > std::string("factor: ").size());
  }
}

TEST_CASE("zero_rows_set_identity replaces rows") {
  std::vector<Triplet> ts = {{0, 0, 2.0}, {0, 1, 3.0}, {1, 0, 4.0}, {1, 1, 5.0},
                             {2, 2, 6.0}};
  SpMat m = from_triplets(ts, 3, 3);
  const Index rows[] = {0, 2};
  zero_rows_set_identity(m, rows);
  CHECK(m.coeff(0, 0) == 1.0);
  CHECK(m.coeff(0, 1) == 0.0);
  CHECK(m.coeff(1, 0) == 4.0);
  CHECK(m.coeff(2, 2) == 1.0);
}
