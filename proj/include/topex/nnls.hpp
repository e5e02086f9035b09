#pragma once

#include <cstddef>
#include <vector>

namespace topex {

// Dense row-major matrix, sized for pairwise training designs (thousands of
// rows, at most a few dozen columns).
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(size_t i, size_t j) { return data[i * cols + j]; }
  double at(size_t i, size_t j) const { return data[i * cols + j]; }
};

struct NnlsOptions {
  double tol = 1e-10;        // dual feasibility tolerance, relative to scale
  size_t max_iterations = 0; // outer active-set iterations; 0 -> 3 * cols
};

struct NnlsResult {
  std::vector<double> weights;  // length cols, all >= 0
  bool converged = false;
  size_t iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> residual_history;  // per outer iteration, non-increasing
};

// min ||A w - b||_2 subject to w >= 0, by the Lawson-Hanson active-set
// method (normal equations with Cholesky on the passive set; columns scaled
// to unit norm internally; smallest-index tie breaking against cycling).
// Never throws for solvable inputs; hitting the iteration cap returns the
// best iterate with converged = false. Non-finite input or shape mismatch
// throws std::invalid_argument.
NnlsResult solve_nnls(const Matrix& A, const std::vector<double>& b, const NnlsOptions& options = {});

// Largest KKT violation of (A, b, w), relative to max(||A^T b||_inf, 1):
// |gradient| on positive weights, positive gradient on zero weights. The
// direct optimality check used by the acceptance gate.
double kkt_violation(const Matrix& A, const std::vector<double>& b, const std::vector<double>& w);

}  // namespace topex
