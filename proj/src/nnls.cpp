#include "topex/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace topex {

namespace {

// In-place lower Cholesky of the symmetric p x p matrix G; false on a
// non-positive pivot (singular or indefinite within eps).
bool cholesky(std::vector<double>& g, size_t p) {
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      double sum = g[i * p + j];
      for (size_t k = 0; k < j; ++k) sum -= g[i * p + k] * g[j * p + k];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        g[i * p + i] = std::sqrt(sum);
      } else {
        g[i * p + j] = sum / g[j * p + j];
      }
    }
  }
  return true;
}

void cholesky_solve(const std::vector<double>& l, size_t p, std::vector<double>& x) {
  for (size_t i = 0; i < p; ++i) {
    double sum = x[i];
    for (size_t k = 0; k < i; ++k) sum -= l[i * p + k] * x[k];
    x[i] = sum / l[i * p + i];
  }
  for (size_t ii = p; ii > 0; --ii) {
    size_t i = ii - 1;
    double sum = x[i];
    for (size_t k = i + 1; k < p; ++k) sum -= l[k * p + i] * x[k];
    x[i] = sum / l[i * p + i];
  }
}

// Least squares on the passive set via normal equations taken from the
// precomputed Gram matrix; retries with a growing ridge when the submatrix
// is numerically singular.
bool solve_passive(const std::vector<double>& gram, const std::vector<double>& atb, size_t n,
                   const std::vector<size_t>& passive, std::vector<double>& z) {
  size_t p = passive.size();
  std::vector<double> sub(p * p);
  double trace = 0.0;
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = 0; j < p; ++j) sub[i * p + j] = gram[passive[i] * n + passive[j]];
    trace += sub[i * p + i];
  }
  double base = trace > 0.0 ? trace / static_cast<double>(p) : 1.0;
  for (double ridge : {0.0, 1e-14, 1e-12, 1e-10, 1e-8}) {
    std::vector<double> factor = sub;
    for (size_t i = 0; i < p; ++i) factor[i * p + i] += ridge * base;
    if (!cholesky(factor, p)) continue;
    z.assign(p, 0.0);
    for (size_t i = 0; i < p; ++i) z[i] = atb[passive[i]];
    cholesky_solve(factor, p, z);
    return true;
  }
  return false;
}

}  // namespace

NnlsResult solve_nnls(const Matrix& A, const std::vector<double>& b, const NnlsOptions& options) {
  size_t m = A.rows;
  size_t n = A.cols;
  if (m == 0 || n == 0) throw std::invalid_argument("nnls: empty matrix");
  if (b.size() != m) throw std::invalid_argument("nnls: b length does not match rows");
  if (A.data.size() != m * n) throw std::invalid_argument("nnls: matrix data size mismatch");
  for (double v : A.data) {
    if (!std::isfinite(v)) throw std::invalid_argument("nnls: non-finite matrix entry");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw std::invalid_argument("nnls: non-finite target entry");
  }

  // Scale columns to unit 2-norm; solves the scaled problem, unscales at exit.
  std::vector<double> scale(n, 1.0);
  for (size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (size_t i = 0; i < m; ++i) sum += A.at(i, j) * A.at(i, j);
    double norm = std::sqrt(sum);
    if (norm > 0.0) scale[j] = norm;
  }

  // Gram matrix and A^T b of the scaled problem, computed once; every later
  // quantity (gradient, residual) comes from these in O(n^2).
  std::vector<double> gram(n * n, 0.0);
  std::vector<double> atb(n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) {
      double aij = A.at(i, j) / scale[j];
      atb[j] += aij * b[i];
      for (size_t k = 0; k <= j; ++k) gram[j * n + k] += aij * (A.at(i, k) / scale[k]);
    }
  }
  for (size_t j = 0; j < n; ++j) {
    for (size_t k = j + 1; k < n; ++k) gram[j * n + k] = gram[k * n + j];
  }
  double b_sq = 0.0;
  for (double v : b) b_sq += v * v;

  // The termination scale is defined on the original, unscaled problem.
  double kkt_scale = 0.0;
  for (size_t j = 0; j < n; ++j) kkt_scale = std::max(kkt_scale, std::abs(atb[j] * scale[j]));
  if (kkt_scale == 0.0) kkt_scale = 1.0;

  size_t max_iter = options.max_iterations ? options.max_iterations : 3 * n;
  std::vector<double> w(n, 0.0);         // scaled-space weights
  std::vector<bool> passive(n, false);
  std::vector<bool> ineligible(n, false);  // rejected candidates, this pass

  auto gradient = [&](std::vector<double>& g) {
    for (size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (size_t k = 0; k < n; ++k) dot += gram[j * n + k] * w[k];
      g[j] = atb[j] - dot;
    }
  };
  auto residual_norm = [&]() {
    double v = b_sq;
    for (size_t j = 0; j < n; ++j) {
      v -= 2.0 * w[j] * atb[j];
      double dot = 0.0;
      for (size_t k = 0; k < n; ++k) dot += gram[j * n + k] * w[k];
      v += w[j] * dot;
    }
    return std::sqrt(std::max(v, 0.0));
  };

  NnlsResult result;
  std::vector<double> g(n);
  std::vector<double> best_w = w;
  double best_residual = residual_norm();

  size_t iter = 0;
  bool converged = false;
  while (iter < max_iter) {
    gradient(g);

    // Dual feasibility in original coordinates: grad_orig = scale * grad.
    bool feasible = true;
    for (size_t j = 0; j < n; ++j) {
      double g_orig = g[j] * scale[j];
      double bound = options.tol * kkt_scale;
      if (passive[j] ? std::abs(g_orig) > bound : g_orig > bound) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      converged = true;
      break;
    }

    // Entering variable: steepest scaled gradient among eligible actives;
    // ties resolved toward the smallest index.
    size_t enter = n;
    double best_g = options.tol * kkt_scale;
    for (size_t j = 0; j < n; ++j) {
      if (passive[j] || ineligible[j]) continue;
      double g_orig = g[j] * scale[j];
      if (g_orig > best_g) {
        best_g = g_orig;
        enter = j;
      }
    }
    if (enter == n) {
      // Every violating candidate was rejected this pass; accept the iterate.
      break;
    }
    passive[enter] = true;
    ++iter;

    // Inner loop: restore primal feasibility on the passive set.
    while (true) {
      std::vector<size_t> pset;
      for (size_t j = 0; j < n; ++j) {
        if (passive[j]) pset.push_back(j);
      }
      std::vector<double> z;
      if (!solve_passive(gram, atb, n, pset, z)) {
        // Unsalvageably singular: reject the entering column entirely.
        passive[enter] = false;
        ineligible[enter] = true;
        break;
      }

      bool all_positive = true;
      for (size_t i = 0; i < pset.size(); ++i) {
        if (z[i] <= 0.0) {
          all_positive = false;
          break;
        }
      }
      if (all_positive) {
        std::fill(w.begin(), w.end(), 0.0);
        for (size_t i = 0; i < pset.size(); ++i) w[pset[i]] = z[i];
        std::fill(ineligible.begin(), ineligible.end(), false);
        break;
      }

      // The just-entered column solved non-positive: reject it instead of
      // stepping (its weight is 0, so the step length would be 0 forever).
      size_t enter_pos = pset.size();
      for (size_t i = 0; i < pset.size(); ++i) {
        if (pset[i] == enter) enter_pos = i;
      }
      if (enter_pos < pset.size() && z[enter_pos] <= 0.0 && w[enter] == 0.0) {
        passive[enter] = false;
        ineligible[enter] = true;
        break;
      }

      // Step toward z until the first passive weight hits zero; strict
      // comparison makes the smallest index leave on ties.
      double alpha = std::numeric_limits<double>::infinity();
      size_t leave = n;
      for (size_t i = 0; i < pset.size(); ++i) {
        if (z[i] <= 0.0) {
          double denom = w[pset[i]] - z[i];
          double a = denom > 0.0 ? w[pset[i]] / denom : 0.0;
          if (a < alpha) {
            alpha = a;
            leave = pset[i];
          }
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      for (size_t i = 0; i < pset.size(); ++i) {
        size_t j = pset[i];
        w[j] += alpha * (z[i] - w[j]);
      }
      if (leave < n) {
        w[leave] = 0.0;
        passive[leave] = false;
      }
      for (size_t i = 0; i < pset.size(); ++i) {
        size_t j = pset[i];
        if (z[i] <= 0.0 && w[j] <= 0.0) {
          w[j] = 0.0;
          passive[j] = false;
        }
      }
    }

    double res = residual_norm();
    result.residual_history.push_back(res);
    if (res <= best_residual) {
      best_residual = res;
      best_w = w;
    }
  }

  result.converged = converged;
  result.iterations = iter;
  if (converged) {
    best_w = w;
    best_residual = residual_norm();
  }
  result.weights.assign(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    double v = best_w[j] / scale[j];
    result.weights[j] = v > 0.0 ? v : 0.0;
  }
  result.residual_norm = best_residual;
  return result;
}

double kkt_violation(const Matrix& A, const std::vector<double>& b, const std::vector<double>& w) {
  size_t m = A.rows;
  size_t n = A.cols;
  std::vector<double> r(m);
  for (size_t i = 0; i < m; ++i) {
    double dot = 0.0;
    for (size_t j = 0; j < n; ++j) dot += A.at(i, j) * w[j];
    r[i] = b[i] - dot;
  }
  double scale = 0.0;
  for (size_t j = 0; j < n; ++j) {
    double atb = 0.0;
    for (size_t i = 0; i < m; ++i) atb += A.at(i, j) * b[i];
    scale = std::max(scale, std::abs(atb));
  }
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (size_t j = 0; j < n; ++j) {
    double g = 0.0;
    for (size_t i = 0; i < m; ++i) g += A.at(i, j) * r[i];
    worst = std::max(worst, w[j] > 0.0 ? std::abs(g) : std::max(g, 0.0));
  }
  return worst / scale;
}

}  // namespace topex
