#pragma once

// Low-level linear algebra contracts: minimum-norm least squares, affine
// null vectors, simplex-based feasibility and interior-point certificates.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <optional>
#include <vector>

#include "dataselect/types.hpp"

namespace dataselect::numerics {

// Relative cutoff under which singular values are treated as zero; this is
// what pins down the min-norm tie-break.
inline constexpr double kRankThreshold = 1e-10;

inline Mat stack_rows(const std::vector<Vec>& xs) {
  if (xs.empty()) throw SelectError(ErrorCode::EmptyInput, "no vectors");
  Mat m(static_cast<int>(xs.size()), xs.front().size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != xs.front().size())
      throw SelectError(ErrorCode::DimensionMismatch, "vectors of mixed dimension");
    m.row(static_cast<int>(i)) = xs[i].transpose();
  }
  return m;
}

inline int rank_of(const Mat& m, double rel_threshold = kRankThreshold) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  qr.setThreshold(rel_threshold);
  return static_cast<int>(qr.rank());
}

// Unique minimizer of sum_i w_i (w.x_i - y_i)^2 with minimum Euclidean norm.
// The returned vector lies in span{x_i : w_i > 0}.
inline Vec min_norm_least_squares(const std::vector<Vec>& xs, const std::vector<double>& ys,
                                  const std::vector<double>& weights) {
  if (xs.empty()) throw SelectError(ErrorCode::EmptyInput, "no rows");
  if (xs.size() != ys.size() || xs.size() != weights.size())
    throw SelectError(ErrorCode::DimensionMismatch, "row/label/weight count mismatch");
  const int d = static_cast<int>(xs.front().size());
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw SelectError(ErrorCode::InvalidArgument, "negative weight");
    wsum += w;
  }
  if (wsum <= 0.0) throw SelectError(ErrorCode::InvalidArgument, "weights are all zero");

  Mat a(static_cast<int>(xs.size()), d);
  Vec b(static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != d) throw SelectError(ErrorCode::DimensionMismatch, "mixed dimensions");
    const double s = std::sqrt(weights[i]);
    a.row(static_cast<int>(i)) = s * xs[i].transpose();
    b[static_cast<int>(i)] = s * ys[i];
  }
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankThreshold);
  return svd.solve(b);
}

inline Vec min_norm_least_squares(const Dataset& data, const std::vector<double>& weights) {
  if (data.kind != DatasetKind::Regression)
    throw SelectError(ErrorCode::InvalidArgument, "expected a regression dataset");
  return min_norm_least_squares(data.xs, data.ys, weights);
}

// First affine circuit: the smallest k such that v_k is an affine combination
// of v_1..v_{k-1}.  Returns coefficients beta with sum(beta_i v_i) = 0,
// sum(beta_i) = 0, max-abs entry 1 and first nonzero entry positive, or
// nullopt when all inputs are affinely independent (possible iff n <= d+1).
inline std::optional<std::vector<double>> null_vector(const std::vector<Vec>& vectors,
                                                      const Tolerances& tol = {}) {
  if (vectors.empty()) throw SelectError(ErrorCode::EmptyInput, "no vectors");
  const int d = static_cast<int>(vectors.front().size());
  const int n = static_cast<int>(vectors.size());
  double scale = 1.0;
  for (const auto& v : vectors) {
    if (v.size() != d) throw SelectError(ErrorCode::DimensionMismatch, "mixed dimensions");
    scale = std::max(scale, v.template lpNorm<Eigen::Infinity>());
  }

  // Lifted columns [v_i; 1]; scan left to right for the first dependent one.
  Mat lifted(d + 1, n);
  for (int i = 0; i < n; ++i) {
    lifted.col(i).head(d) = vectors[i];
    lifted(d, i) = 1.0;
  }
  for (int k = 1; k < n; ++k) {
    Mat head = lifted.leftCols(k);
    Eigen::ColPivHouseholderQR<Mat> qr(head);
    qr.setThreshold(kRankThreshold);
    Vec coeff = qr.solve(lifted.col(k));
    const double resid = (head * coeff - lifted.col(k)).template lpNorm<Eigen::Infinity>();
    if (resid <= tol.exact * scale) {
      std::vector<double> beta(n, 0.0);
      for (int i = 0; i < k; ++i) beta[i] = coeff[i];
      beta[k] = -1.0;
      double maxabs = 0.0;
      for (double b : beta) maxabs = std::max(maxabs, std::abs(b));
      double first = 0.0;
      for (double b : beta)
        if (b != 0.0) {
          first = b;
          break;
        }
      const double s = (first < 0.0 ? -1.0 : 1.0) / maxabs;
      for (double& b : beta) b *= s;
      return beta;
    }
  }
  return std::nullopt;
}

// Phase-1 simplex.  Finds s >= 0 with A s = b or reports infeasibility.
// Dense tableau with Bland's rule; adequate for the (d+1) x n systems here.
inline std::optional<std::vector<double>> feasible_nonneg_solution(Mat a, Vec b,
                                                                   double feas_tol = 1e-9) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
    }
  }
  // Columns: n structural + m artificial.  Start from the artificial basis.
  Mat t(m, n + m);
  t.leftCols(n) = a;
  t.rightCols(m) = Mat::Identity(m, m);
  Vec rhs = b;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced costs for minimizing the sum of artificials.
  Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(n + m);
  cost.tail(m).setOnes();
  Eigen::RowVectorXd reduced = cost;
  double objective = 0.0;
  for (int i = 0; i < m; ++i) {
    reduced -= t.row(i);  // cost of each artificial basic row is 1
    objective += rhs[i];
  }
  reduced.tail(m).setZero();
  for (int i = 0; i < m; ++i) reduced[basis[i]] = 0.0;

  const double pivot_tol = 1e-11;
  const int max_pivots = 200 * (n + m) + 1000;
  for (int iter = 0; iter < max_pivots; ++iter) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (reduced[j] < -pivot_tol) {
        enter = j;  // Bland: smallest index
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t(i, enter) > pivot_tol) {
        const double ratio = rhs[i] / t(i, enter);
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded cannot happen in phase 1; bail out
    const double piv = t(leave, enter);
    t.row(leave) /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0.0) {
        t.row(i) -= f * t.row(leave);
        rhs[i] -= f * rhs[leave];
      }
    }
    const double fr = reduced[enter];
    reduced -= fr * t.row(leave);
    basis[leave] = enter;
    objective = 0.0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n) objective += rhs[i];
  }

  objective = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) objective += std::max(0.0, rhs[i]);
  const double scale = std::max(1.0, b.template lpNorm<Eigen::Infinity>());
  if (objective > feas_tol * scale) return std::nullopt;

  std::vector<double> s(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) s[basis[i]] = std::max(0.0, rhs[i]);
  return s;
}

// Strict-positivity representation: lambda_i >= floor, sum lambda = 1,
// sum lambda_i p_i = q.  Returns the certificate weights when feasible.
inline std::optional<std::vector<double>> convex_representation(const std::vector<Vec>& points,
                                                                const Vec& query, double floor,
                                                                const Tolerances& tol = {}) {
  if (points.empty()) throw SelectError(ErrorCode::EmptyInput, "no points");
  const int d = static_cast<int>(query.size());
  const int n = static_cast<int>(points.size());
  double scale = 1.0;
  for (const auto& p : points) {
    if (p.size() != d) throw SelectError(ErrorCode::DimensionMismatch, "point/query dimension mismatch");
    scale = std::max(scale, p.template lpNorm<Eigen::Infinity>());
  }
  if (1.0 - n * floor < 0.0) return std::nullopt;

  Mat a(d + 1, n);
  Vec b(d + 1);
  Vec psum = Vec::Zero(d);
  for (int i = 0; i < n; ++i) {
    a.col(i).head(d) = points[i];
    a(d, i) = 1.0;
    psum += points[i];
  }
  b.head(d) = query - floor * psum;
  b[d] = 1.0 - n * floor;
  // scale rows to comparable magnitude so the feasibility tolerance is meaningful
  a /= scale;
  b /= scale;
  auto s = feasible_nonneg_solution(a, b, std::max(tol.exact, 1e-11));
  if (!s) return std::nullopt;
  std::vector<double> lambda(n);
  Vec recon = Vec::Zero(d);
  double lsum = 0.0;
  for (int i = 0; i < n; ++i) {
    lambda[i] = (*s)[i] + floor;
    recon += lambda[i] * points[i];
    lsum += lambda[i];
  }
  if (std::abs(lsum - 1.0) > 1e3 * std::max(tol.exact, 1e-11)) return std::nullopt;
  if ((recon - query).template lpNorm<Eigen::Infinity>() > 1e3 * std::max(tol.exact, 1e-11) * scale)
    return std::nullopt;
  return lambda;
}

// Interior of conv(points): a representation with all weights >= tol.weight
// plus {p_i - q} spanning R^d.  This is the testable restatement of
// "relative interior + full span".
inline std::optional<std::vector<double>> interior_certificate(const std::vector<Vec>& points,
                                                               const Vec& query,
                                                               const Tolerances& tol = {}) {
  if (points.empty()) throw SelectError(ErrorCode::EmptyInput, "no points");
  const int d = static_cast<int>(query.size());
  Mat diffs(static_cast<int>(points.size()), d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d)
      throw SelectError(ErrorCode::DimensionMismatch, "point/query dimension mismatch");
    diffs.row(static_cast<int>(i)) = (points[i] - query).transpose();
  }
  if (rank_of(diffs) < d) return std::nullopt;
  return convex_representation(points, query, tol.weight, tol);
}

inline bool interior_point_check(const std::vector<Vec>& points, const Vec& query,
                                 const Tolerances& tol = {}) {
  return interior_certificate(points, query, tol).has_value();
}

// Minimize f over the probability simplex of dimension k: coarse simplex grid
// followed by pairwise mass-transfer refinement until the step underflows the
// stopping tolerance.
inline std::pair<std::vector<double>, double> minimize_over_simplex(
    int k, const std::function<double(const std::vector<double>&)>& f, int grid_steps,
    double tol_stop) {
  std::vector<double> best_w(static_cast<std::size_t>(k), 1.0 / k);
  double best_v = f(best_w);

  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      counts[static_cast<std::size_t>(pos)] = left;
      std::vector<double> w(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i)
        w[static_cast<std::size_t>(i)] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / grid_steps;
      const double v = f(w);
      if (v < best_v) {
        best_v = v;
        best_w = w;
      }
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[static_cast<std::size_t>(pos)] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, grid_steps);

  double step = 1.0 / grid_steps;
  while (step > tol_stop) {
    bool improved = false;
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        std::vector<double> w = best_w;
        const double delta = std::min(step, w[static_cast<std::size_t>(b)]);
        if (delta <= 0.0) continue;
        w[static_cast<std::size_t>(a)] += delta;
        w[static_cast<std::size_t>(b)] -= delta;
        const double v = f(w);
        if (v < best_v - 1e-15) {
          best_v = v;
          best_w = w;
          improved = true;
        }
      }
    }
    if (!improved) step /= 2.0;
  }
  return {best_w, best_v};
}

}  // namespace dataselect::numerics
