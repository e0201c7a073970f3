#pragma once

// Weighted data selection for the min-norm ERM: the 2d-point exact-recovery
// selector, volume sampling for n = d, the brute-force weighted ratio, and
// the lower-bound dataset generators.

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "dataselect/caratheodory.hpp"
#include "dataselect/classification.hpp"
#include "dataselect/linalg.hpp"
#include "dataselect/types.hpp"

namespace dataselect::regress {

inline constexpr double kInfiniteRatio = std::numeric_limits<double>::infinity();

inline double regression_loss(const Dataset& data, const Vec& w) {
  data.validate();
  if (data.kind != DatasetKind::Regression)
    throw SelectError(ErrorCode::InvalidArgument, "expected a regression dataset");
  if (w.size() != data.dim()) throw SelectError(ErrorCode::DimensionMismatch, "w has wrong dimension");
  double v = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = w.dot(data.xs[i]) - data.ys[i];
    v += r * r;
  }
  return v / static_cast<double>(data.size());
}

inline Vec min_norm_erm(const Dataset& data) {
  return numerics::min_norm_least_squares(data.xs, data.ys,
                                          std::vector<double>(data.size(), 1.0));
}

inline double ratio_convention(double achieved, double optimal, double tol_zero) {
  if (optimal <= tol_zero) return achieved <= tol_zero ? 1.0 : kInfiniteRatio;
  return achieved / optimal;
}

// Weighted subset of <= 2d points whose min-norm ERM equals the min-norm ERM
// of the full dataset.  Nonzero loss gradients at w* are parallel to their
// features; Steinitz selection keeps 0 interior to their hull, and zero-loss
// points restore the feature span when the gradients do not cover it.
inline WeightedSubset select_weighted_exact(const Dataset& data, const Tolerances& tol = {}) {
  data.validate();
  if (data.kind != DatasetKind::Regression)
    throw SelectError(ErrorCode::InvalidArgument, "expected a regression dataset");
  const int n = static_cast<int>(data.size());
  const Vec wstar = min_norm_erm(data);

  double scale = 1.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    scale = std::max({scale, std::abs(data.ys[i]), data.xs[i].norm()});

  std::vector<int> nonzero;
  std::vector<int> zero_loss;
  std::vector<Vec> grads;
  for (int i = 0; i < n; ++i) {
    const double r = wstar.dot(data.xs[static_cast<std::size_t>(i)]) - data.ys[static_cast<std::size_t>(i)];
    if (std::abs(r) <= tol.exact * scale) {
      zero_loss.push_back(i);
    } else {
      nonzero.push_back(i);
      grads.push_back(2.0 * r * data.xs[static_cast<std::size_t>(i)]);
    }
  }

  const int full_rank = numerics::rank_of(numerics::stack_rows(data.xs));

  std::vector<int> picked;
  std::vector<double> picked_weights;
  if (!grads.empty()) {
    // orthonormal basis of the gradient span
    Mat g = numerics::stack_rows(grads).transpose();  // d x |G|
    Eigen::BDCSVD<Mat> svd(g, Eigen::ComputeThinU);
    svd.setThreshold(numerics::kRankThreshold);
    const int dprime = static_cast<int>(svd.rank());
    Mat basis = svd.matrixU().leftCols(dprime);  // d x d'

    std::vector<Vec> projected(grads.size());
    for (std::size_t j = 0; j < grads.size(); ++j) projected[j] = basis.transpose() * grads[j];

    Vec origin = Vec::Zero(dprime);
    std::vector<int> sel = caratheodory::steinitz_select(projected, origin, tol);
    std::vector<Vec> sel_grads;
    for (int j : sel) sel_grads.push_back(projected[static_cast<std::size_t>(j)]);
    auto cert = numerics::interior_certificate(sel_grads, origin, tol);
    if (!cert)
      throw SelectError(ErrorCode::SelectionFailed, "selected gradients lost the interior certificate");
    for (std::size_t j = 0; j < sel.size(); ++j) {
      picked.push_back(nonzero[static_cast<std::size_t>(sel[j])]);
      picked_weights.push_back((*cert)[j]);
    }
  }

  // augment with zero-loss points until the subset features span the feature
  // span of the full dataset
  std::vector<Vec> span_rows;
  for (int i : picked) span_rows.push_back(data.xs[static_cast<std::size_t>(i)]);
  std::vector<int> added;
  int current_rank = span_rows.empty() ? 0 : numerics::rank_of(numerics::stack_rows(span_rows));
  for (int i : zero_loss) {
    if (current_rank >= full_rank) break;
    span_rows.push_back(data.xs[static_cast<std::size_t>(i)]);
    const int r = numerics::rank_of(numerics::stack_rows(span_rows));
    if (r > current_rank) {
      current_rank = r;
      added.push_back(i);
    } else {
      span_rows.pop_back();
    }
  }
  if (current_rank < full_rank)
    throw SelectError(ErrorCode::SelectionFailed, "could not restore the feature span");

  WeightedSubset out;
  const std::size_t total = picked.size() + added.size();
  if (total == 0) throw SelectError(ErrorCode::SelectionFailed, "empty selection");
  if (picked.empty()) {
    for (int i : added) {
      out.indices.push_back(i);
      out.weights.push_back(1.0 / static_cast<double>(added.size()));
    }
  } else {
    const double share = added.empty() ? 0.0 : 1.0 / (2.0 * static_cast<double>(total));
    const double picked_total = 1.0 - share * static_cast<double>(added.size());
    for (std::size_t j = 0; j < picked.size(); ++j) {
      out.indices.push_back(picked[j]);
      out.weights.push_back(picked_weights[j] * picked_total);
    }
    for (int i : added) {
      out.indices.push_back(i);
      out.weights.push_back(share);
    }
  }
  out.validate(tol);

  // post-verify the contract
  std::vector<Vec> xs;
  std::vector<double> ys;
  for (int i : out.indices) {
    xs.push_back(data.xs[static_cast<std::size_t>(i)]);
    ys.push_back(data.ys[static_cast<std::size_t>(i)]);
  }
  const Vec recovered = numerics::min_norm_least_squares(xs, ys, out.weights);
  if ((recovered - wstar).norm() > tol.iter * std::max(1.0, wstar.norm()))
    throw SelectError(ErrorCode::SelectionFailed, "recovered ERM does not match the full ERM");
  return out;
}

struct VolumeSamplingResult {
  double expected_loss = 0.0;
  double optimal_loss = 0.0;
  double ratio = 0.0;
  bool exact = true;
  double standard_error = 0.0;
  bool general_position = true;
};

// Expectation of the full-data loss of the interpolator of a volume-sampled
// d-subset.  Exact enumeration when the subset count is small, otherwise
// self-normalized Monte Carlo over uniform subsets.
inline VolumeSamplingResult volume_sampling_expectation(const Dataset& data, std::uint64_t seed = 0,
                                                        long mc_samples = 200000,
                                                        const Tolerances& tol = {}) {
  data.validate();
  if (data.kind != DatasetKind::Regression)
    throw SelectError(ErrorCode::InvalidArgument, "expected a regression dataset");
  const int d = data.dim();
  const int n = static_cast<int>(data.size());
  if (n < d) throw SelectError(ErrorCode::InvalidArgument, "need at least d points");

  VolumeSamplingResult res;
  const Vec wstar = min_norm_erm(data);
  res.optimal_loss = regression_loss(data, wstar);

  double combos = 1.0;
  for (int k = 1; k <= d; ++k) combos *= static_cast<double>(n - d + k) / k;

  double sum_vol = 0.0;
  double sum_vol_loss = 0.0;
  double sum_vol_loss2 = 0.0;  // for the Monte Carlo standard error
  long samples = 0;

  auto accumulate = [&](const std::vector<int>& idx) {
    Mat m(d, d);
    for (int r = 0; r < d; ++r) m.row(r) = data.xs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].transpose();
    const double det = m.determinant();
    const double vol2 = det * det;
    ++samples;
    if (vol2 <= 0.0) {
      res.general_position = false;
      return;
    }
    Vec y(d);
    for (int r = 0; r < d; ++r) y[r] = data.ys[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
    const Vec w = m.fullPivLu().solve(y);
    const double l = regression_loss(data, w);
    sum_vol += vol2;
    sum_vol_loss += vol2 * l;
    sum_vol_loss2 += vol2 * l * l;
  };

  if (combos <= 1e6) {
    res.exact = true;
    std::vector<int> idx(static_cast<std::size_t>(d));
    std::iota(idx.begin(), idx.end(), 0);
    do {
      accumulate(idx);
    } while ([&] {
      int i = d - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - d + i) --i;
      if (i < 0) return false;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }());
  } else {
    res.exact = false;
    Rng rng(seed);
    for (long s = 0; s < mc_samples; ++s) {
      std::vector<int> idx;
      while (static_cast<int>(idx.size()) < d) {
        const int cand = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (std::find(idx.begin(), idx.end(), cand) == idx.end()) idx.push_back(cand);
      }
      std::sort(idx.begin(), idx.end());
      accumulate(idx);
    }
  }

  if (sum_vol <= 0.0)
    throw SelectError(ErrorCode::InvalidArgument, "all feature subsets are degenerate");
  res.expected_loss = sum_vol_loss / sum_vol;
  if (!res.exact) {
    const double mean = res.expected_loss;
    const double var = std::max(0.0, sum_vol_loss2 / sum_vol - mean * mean);
    res.standard_error = std::sqrt(var / static_cast<double>(samples));
  }
  res.ratio = ratio_convention(res.expected_loss, res.optimal_loss, tol.weight);
  return res;
}



struct WeightedRatioResult {
  double ratio = 0.0;
  double achieved = 0.0;
  double optimal = 0.0;
  std::vector<int> best_indices;
  std::vector<double> best_weights;
};

// Brute force over index subsets of size <= n; the inner weight optimization
// is exact for independent features (weights cannot move the interpolator)
// and grid + refinement otherwise.
inline WeightedRatioResult best_weighted_subset_ratio(const Dataset& data, int n,
                                                      const Tolerances& tol = {}) {
  data.validate();
  if (data.kind != DatasetKind::Regression)
    throw SelectError(ErrorCode::InvalidArgument, "expected a regression dataset");
  if (n < 1) throw SelectError(ErrorCode::InvalidArgument, "budget must be at least 1");
  const int npts = static_cast<int>(data.size());

  WeightedRatioResult res;
  const Vec wstar = min_norm_erm(data);
  res.optimal = regression_loss(data, wstar);
  res.achieved = std::numeric_limits<double>::infinity();

  for (int size = 1; size <= std::min(n, npts); ++size) {
    double combos = 1.0;
    for (int k = 1; k <= size; ++k) combos *= static_cast<double>(npts - size + k) / k;
    if (combos > 1e6)
      throw SelectError(ErrorCode::BudgetTooLargeForExact, "too many subsets for exhaustive search");
    classify::for_each_subset(npts, size, [&](const std::vector<int>& idx) {
      std::vector<Vec> xs;
      std::vector<double> ys;
      for (int i : idx) {
        xs.push_back(data.xs[static_cast<std::size_t>(i)]);
        ys.push_back(data.ys[static_cast<std::size_t>(i)]);
      }
      const int r = numerics::rank_of(numerics::stack_rows(xs));
      double value;
      std::vector<double> weights(idx.size(), 1.0 / static_cast<double>(idx.size()));
      if (r == size) {
        // independent features: every positive weighting interpolates
        const Vec w = numerics::min_norm_least_squares(xs, ys, weights);
        value = regression_loss(data, w);
      } else {
        auto objective = [&](const std::vector<double>& alpha) {
          double total = 0.0;
          for (double a : alpha) total += a;
          if (total <= 0.0) return std::numeric_limits<double>::infinity();
          std::vector<Vec> axs;
          std::vector<double> ays, aw;
          for (std::size_t j = 0; j < idx.size(); ++j) {
            if (alpha[j] <= 0.0) continue;
            axs.push_back(xs[j]);
            ays.push_back(ys[j]);
            aw.push_back(alpha[j]);
          }
          if (axs.empty()) return std::numeric_limits<double>::infinity();
          const Vec w = numerics::min_norm_least_squares(axs, ays, aw);
          return regression_loss(data, w);
        };
        auto [alpha, v] = numerics::minimize_over_simplex(size, objective, 50, tol.iter);
        weights = alpha;
        value = v;
      }
      if (value < res.achieved) {
        res.achieved = value;
        res.best_indices = idx;
        res.best_weights = weights;
      }
      return false;
    });
  }
  res.ratio = ratio_convention(res.achieved, res.optimal, tol.weight);
  return res;
}

struct LowerBoundCertificate {
  Dataset dataset;
  Vec wstar;
  double optimal_loss = 0.0;
  double worst_subset_loss = 0.0;  // minimum over proper selections
  bool pass = false;
};

// The n = d lower-bound dataset: {(e_i, i c)} plus one balancing point.  Its
// optimal loss is 1 and every selection of at most d points costs d+1.
inline LowerBoundCertificate lower_bound_dataset_nd(int d, double c, const Tolerances& tol = {}) {
  if (d < 1) throw SelectError(ErrorCode::InvalidArgument, "d must be positive");
  if (!(c > std::sqrt(2.0) * (d + 1)))
    throw SelectError(ErrorCode::InvalidArgument, "c must exceed sqrt(2) (d+1)");

  Dataset data;
  data.kind = DatasetKind::Regression;
  for (int i = 1; i <= d; ++i) {
    Vec e = Vec::Zero(d);
    e[i - 1] = 1.0;
    data.xs.push_back(e);
    data.ys.push_back(static_cast<double>(i) * c);
  }
  Vec neg = Vec::Constant(d, -1.0);
  data.xs.push_back(neg);
  data.ys.push_back(-c * d * (d + 1) / 2.0 - d - 1);

  LowerBoundCertificate cert;
  cert.dataset = data;
  cert.wstar = min_norm_erm(data);
  cert.optimal_loss = regression_loss(data, cert.wstar);

  Vec expected(d);
  for (int i = 1; i <= d; ++i) expected[i - 1] = static_cast<double>(i) * c + 1.0;

  double worst = std::numeric_limits<double>::infinity();
  const int npts = d + 1;
  for (int size = 1; size <= d; ++size) {
    classify::for_each_subset(npts, size, [&](const std::vector<int>& idx) {
      std::vector<Vec> xs;
      std::vector<double> ys;
      for (int i : idx) {
        xs.push_back(data.xs[static_cast<std::size_t>(i)]);
        ys.push_back(data.ys[static_cast<std::size_t>(i)]);
      }
      const Vec w = numerics::min_norm_least_squares(xs, ys, std::vector<double>(xs.size(), 1.0));
      worst = std::min(worst, regression_loss(data, w));
      return false;
    });
  }
  cert.worst_subset_loss = worst;
  cert.pass = std::abs(cert.optimal_loss - 1.0) <= tol.exact * (1.0 + c * c) &&
              (cert.wstar - expected).norm() <= tol.iter * expected.norm() &&
              worst >= static_cast<double>(d + 1) - tol.iter;
  return cert;
}

struct LiftedLowerBound {
  Dataset dataset;           // lifted regression dataset
  double realizable_loss = 0.0;
  double worst_small_fit = 0.0;  // min over selections of < d points
  double ratio = 0.0;
  bool certificate_exact = false;
};

// The n < d construction: the adversarial classification dataset, lifted and
// read as a regression problem.  Realizable by (1/eps) x(d), yet every
// selection of fewer than d points fits a hyperplane that mislabels nearly
// half the data, each miss costing at least 1.
inline LiftedLowerBound lower_bound_dataset_lt_d(int d, double eta, double eps, Seed seed,
                                                 int n_points = 200, const Tolerances& tol = {}) {
  if (!(eps > 0.0)) throw SelectError(ErrorCode::InvalidArgument, "eps must be positive");
  auto [cls, cert] = classify::adversarial_dataset(d, eta, n_points, seed, tol);
  Dataset lifted = classify::epsilon_lift(cls, eps, tol);
  lifted.kind = DatasetKind::Regression;

  LiftedLowerBound out;
  out.dataset = lifted;
  out.certificate_exact = cert.exact;
  Vec realizer = Vec::Zero(d);
  realizer[d - 1] = 1.0 / eps;
  out.realizable_loss = regression_loss(lifted, realizer);

  double worst = std::numeric_limits<double>::infinity();
  for (int size = 1; size < d; ++size) {
    double combos = 1.0;
    for (int k = 1; k <= size; ++k) combos *= static_cast<double>(n_points - size + k) / k;
    if (combos > 1e6) break;  // desk-scale guard; d = 2 needs singles only
    classify::for_each_subset(n_points, size, [&](const std::vector<int>& idx) {
      std::vector<Vec> xs;
      std::vector<double> ys;
      for (int i : idx) {
        xs.push_back(lifted.xs[static_cast<std::size_t>(i)]);
        ys.push_back(lifted.ys[static_cast<std::size_t>(i)]);
      }
      const Vec w = numerics::min_norm_least_squares(xs, ys, std::vector<double>(xs.size(), 1.0));
      worst = std::min(worst, regression_loss(lifted, w));
      return false;
    });
  }
  out.worst_small_fit = worst;
  out.ratio = ratio_convention(worst, out.realizable_loss, tol.weight);
  return out;
}

}  // namespace dataselect::regress
