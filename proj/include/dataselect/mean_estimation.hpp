#pragma once

// Mean estimation with squared loss: the brute-force selection oracle, the
// worst-case one-dimensional generators, the two-point reduction and the
// high-dimensional bounds report.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "dataselect/caratheodory.hpp"
#include "dataselect/linalg.hpp"
#include "dataselect/types.hpp"

namespace dataselect::mean_estimation {

inline constexpr double kInfiniteRatio = std::numeric_limits<double>::infinity();

// Mass-weighted mean of the dataset.
inline Vec mean_of(const Dataset& data) {
  data.validate();
  Vec mu = Vec::Zero(data.dim());
  for (std::size_t i = 0; i < data.size(); ++i) mu += data.weight_of(i) * data.xs[i];
  return mu;
}

// L_D(h): mean squared Euclidean distance from h to the points of D.
inline double loss(const Dataset& data, const Vec& h) {
  data.validate();
  if (h.size() != data.dim()) throw SelectError(ErrorCode::DimensionMismatch, "h has wrong dimension");
  double v = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) v += data.weight_of(i) * (h - data.xs[i]).squaredNorm();
  return v;
}

// (h*, L*): the mean and the variance.
inline std::pair<Vec, double> optimal_loss(const Dataset& data) {
  Vec mu = mean_of(data);
  return {mu, loss(data, mu)};
}

// Ratio convention: 0/0 -> 1, positive/0 -> infinity.
inline double loss_ratio(double achieved, double optimal, double tol_zero = 0.0) {
  if (optimal <= tol_zero) return achieved <= tol_zero ? 1.0 : kInfiniteRatio;
  return achieved / optimal;
}

namespace detail {

struct SupportView {
  std::vector<Vec> points;           // distinct support points
  std::vector<int> first_index;      // an index of each support point in the dataset
};

inline SupportView distinct_support(const Dataset& data) {
  SupportView s;
  for (std::size_t i = 0; i < data.size(); ++i) {
    bool seen = false;
    for (const auto& p : s.points)
      if (p == data.xs[i]) {
        seen = true;
        break;
      }
    if (!seen) {
      s.points.push_back(data.xs[i]);
      s.first_index.push_back(static_cast<int>(i));
    }
  }
  return s;
}

inline double multiset_count(std::uint64_t m, std::uint64_t n) {
  // C(m+n-1, n) computed in floating point; only compared against 1e6
  double c = 1.0;
  for (std::uint64_t k = 1; k <= n; ++k) c *= static_cast<double>(m - 1 + k) / static_cast<double>(k);
  return c;
}

}  // namespace detail

inline constexpr double kExhaustiveLimit = 1e6;

struct SubsetLoss {
  WeightedSubset selection;  // n indices (repeats allowed), uniform weights 1/n
  Vec average;
  double loss_value = 0.0;
};

// Exact minimum over all multisets of n points from the support of D of the
// loss of their average.  Enumeration runs over distinct support points, which
// is what the achievable-average reduction of the analysis licenses.
inline SubsetLoss best_subset_loss(const Dataset& data, int n) {
  data.validate();
  if (n < 1) throw SelectError(ErrorCode::InvalidArgument, "budget must be at least 1");
  auto support = detail::distinct_support(data);
  const std::size_t m = support.points.size();
  if (detail::multiset_count(m, static_cast<std::uint64_t>(n)) > kExhaustiveLimit)
    throw SelectError(ErrorCode::BudgetTooLargeForExact,
                      "support too large for exact multiset enumeration");

  const Vec mu = mean_of(data);
  const int d = data.dim();

  std::vector<int> counts(m, 0);
  std::vector<int> best_counts;
  double best_dist2 = std::numeric_limits<double>::infinity();

  // enumerate multisets in lexicographic order over support indices
  std::function<void(std::size_t, int, Vec)> rec = [&](std::size_t pos, int left, Vec partial) {
    if (pos + 1 == m) {
      counts[pos] = left;
      Vec avg = (partial + static_cast<double>(left) * support.points[pos]) / static_cast<double>(n);
      const double dist2 = (avg - mu).squaredNorm();
      if (dist2 < best_dist2) {
        best_dist2 = dist2;
        best_counts = counts;
      }
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[pos] = c;
      rec(pos + 1, left - c, partial + static_cast<double>(c) * support.points[pos]);
    }
  };
  rec(0, n, Vec::Zero(d));

  SubsetLoss out;
  Vec avg = Vec::Zero(d);
  for (std::size_t j = 0; j < m; ++j) {
    for (int c = 0; c < best_counts[j]; ++c) {
      out.selection.indices.push_back(support.first_index[j]);
      out.selection.weights.push_back(1.0 / static_cast<double>(n));
      avg += support.points[j];
    }
  }
  out.average = avg / static_cast<double>(n);
  out.loss_value = loss(data, out.average);
  return out;
}

// 2n-1 copies of 0 and a single copy of 1; tight for the one-dimensional bound.
inline Dataset worst_case_dataset_1d(int n) {
  if (n < 1) throw SelectError(ErrorCode::InvalidArgument, "n must be at least 1");
  std::vector<double> zs(static_cast<std::size_t>(2 * n - 1), 0.0);
  zs.push_back(1.0);
  return make_unlabeled_1d(zs);
}

// Reduce a one-dimensional dataset to a two-point distribution with the same
// mean, no larger optimal loss, and a no-smaller selection ratio for the
// budgets in `check_budgets`.
inline Dataset two_point_reduction(const Dataset& data, const std::vector<int>& check_budgets = {},
                                   const Tolerances& tol = {}) {
  data.validate();
  if (data.dim() != 1) throw SelectError(ErrorCode::DimensionMismatch, "one-dimensional datasets only");
  auto [mu, lstar] = optimal_loss(data);
  double scale = 1.0;
  for (const auto& x : data.xs) scale = std::max(scale, x.squaredNorm());
  if (lstar <= tol.exact * scale) throw SelectError(ErrorCode::Dirac, "dataset has zero optimal loss");

  auto support = detail::distinct_support(data);
  if (support.points.size() <= 2) return data;

  caratheodory::ConvexCombination g;
  g.family = caratheodory::quadratic_point_family(support.points);
  g.lambda.assign(support.points.size(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < support.points.size(); ++j) {
      if (data.xs[i] == support.points[j]) {
        g.lambda[j] += data.weight_of(i);
        break;
      }
    }
  }
  auto sparse = caratheodory::sparsify_convex(g, caratheodory::DomainK::all(), tol);

  Dataset reduced;
  reduced.kind = DatasetKind::Unlabeled;
  for (std::size_t j = 0; j < support.points.size(); ++j) {
    if (sparse.lambda[j] > 0.0) {
      reduced.xs.push_back(support.points[j]);
      reduced.mass.push_back(sparse.lambda[j]);
    }
  }
  reduced.validate();

  auto [mu2, lstar2] = optimal_loss(reduced);
  if (std::abs(mu2[0] - mu[0]) > 1e3 * tol.exact * std::sqrt(scale) ||
      lstar2 > lstar + tol.exact * scale)
    throw SelectError(ErrorCode::SelectionFailed, "two-point reduction failed certification");
  for (int n : check_budgets) {
    const double r_orig = loss_ratio(best_subset_loss(data, n).loss_value, lstar);
    const double r_red = loss_ratio(best_subset_loss(reduced, n).loss_value, lstar2);
    if (r_red + tol.exact < r_orig)
      throw SelectError(ErrorCode::SelectionFailed, "reduction decreased the selection ratio");
  }
  return reduced;
}

// Exact best selection loss for the standard-basis dataset {e_1,...,e_d}.
// By permutation symmetry only the multiset of coordinate counts matters, so
// integer partitions of n give an exact oracle for any d.
inline double basis_dataset_best_dist2(int d, int n) {
  // minimize sum(k_i^2)/n^2 - 1/d over integer partitions of n into <= d parts
  std::vector<int> part;
  long best_sq = std::numeric_limits<long>::max();
  std::function<void(int, int, long)> rec = [&](int left, int maxpart, long sq) {
    if (static_cast<int>(part.size()) > d) return;
    if (left == 0) {
      best_sq = std::min(best_sq, sq);
      return;
    }
    if (static_cast<int>(part.size()) == d) return;
    for (int p = std::min(left, maxpart); p >= 1; --p) {
      part.push_back(p);
      rec(left - p, p, sq + static_cast<long>(p) * p);
      part.pop_back();
    }
  };
  rec(n, n, 0);
  return static_cast<double>(best_sq) / (static_cast<double>(n) * n) - 1.0 / d;
}

struct HighDimCheck {
  std::string check;
  int d = 0;
  int n = 0;
  double l_star = 0.0;
  double l_star_n = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Verifies the dimension-dependent bounds: lower bound via the embedded
// one-dimensional worst case, upper bound (n+1)/n on random datasets, and the
// exact ratio of the basis-vector dataset when n <= d.
inline std::vector<HighDimCheck> highdim_bounds_check(int d, int n, std::uint64_t seed = 0,
                                                      int random_instances = 20,
                                                      const Tolerances& tol = {}) {
  if (d < 1 || n < 1) throw SelectError(ErrorCode::InvalidArgument, "d and n must be positive");
  std::vector<HighDimCheck> checks;
  const double lower_bound = 2.0 * n / (2.0 * n - 1.0);
  const double upper_bound = (n + 1.0) / n;

  {  // embedded one-dimensional worst case achieves the lower bound
    Dataset emb;
    emb.kind = DatasetKind::Unlabeled;
    Vec zero = Vec::Zero(d);
    Vec one = Vec::Zero(d);
    one[0] = 1.0;
    emb.xs = {zero, one};
    emb.mass = {2.0 * n - 1.0, 1.0};
    auto [mu, lstar] = optimal_loss(emb);
    const double ln = best_subset_loss(emb, n).loss_value;
    const double ratio = loss_ratio(ln, lstar);
    HighDimCheck c{"embedded_worst_case_lower_bound", d, n, lstar, ln, ratio, lower_bound,
                   ratio >= lower_bound - tol.exact && std::abs(ratio - lower_bound) <= tol.exact};
    checks.push_back(c);
  }

  {  // (n+1)/n upper bound on random datasets
    Rng rng(seed);
    double worst = 0.0;
    for (int inst = 0; inst < random_instances; ++inst) {
      const int npts = 2 + static_cast<int>(rng.below(7));
      std::vector<Vec> xs;
      for (int i = 0; i < npts; ++i) xs.push_back(rng.uniform_vec(d, -1.0, 1.0));
      Dataset data = make_unlabeled(std::move(xs));
      auto [mu, lstar] = optimal_loss(data);
      const double ln = best_subset_loss(data, n).loss_value;
      worst = std::max(worst, loss_ratio(ln, lstar));
    }
    HighDimCheck c{"random_upper_bound", d, n, 0.0, 0.0, worst, upper_bound,
                   worst <= upper_bound + tol.exact};
    checks.push_back(c);
  }

  {  // basis-vector dataset; the closed form applies for n <= d
    const double lstar = (d - 1.0) / d;
    const double dist2 = basis_dataset_best_dist2(d, n);
    const double ratio = 1.0 + (lstar > 0.0 ? dist2 / lstar : 0.0);
    HighDimCheck c;
    c.d = d;
    c.n = n;
    c.l_star = lstar;
    c.l_star_n = lstar + dist2;
    c.ratio = ratio;
    if (n <= d && d >= 2) {
      c.check = "basis_dataset_formula";
      c.bound = 1.0 + (1.0 / n - 1.0 / d) * d / (d - 1.0);
      c.pass = std::abs(ratio - c.bound) <= tol.exact;
    } else {
      // outside the formula's domain (n > d or d = 1); report the measured ratio
      c.check = "basis_dataset_measured";
      c.bound = upper_bound;
      c.pass = ratio <= upper_bound + tol.exact;
    }
    checks.push_back(c);
  }

  if (d == 1) {  // reduces to the one-dimensional theorem
    Dataset wc = worst_case_dataset_1d(n);
    auto [mu, lstar] = optimal_loss(wc);
    const double ratio = loss_ratio(best_subset_loss(wc, n).loss_value, lstar);
    checks.push_back(HighDimCheck{"d1_reduces_to_mean_theorem", d, n, lstar, ratio * lstar, ratio,
                                  lower_bound, std::abs(ratio - lower_bound) <= tol.exact});
  }
  return checks;
}

}  // namespace dataselect::mean_estimation
