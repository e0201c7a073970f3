#pragma once

// Sparsification engines: the inductive sparsifier for convex combinations of
// strictly convex functions, the classical point version, and Steinitz
// selection of <= 2d points around an interior point.

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "dataselect/linalg.hpp"
#include "dataselect/types.hpp"

namespace dataselect::caratheodory {

struct DomainK {
  enum class Kind { All, Box, Ball };
  Kind kind = Kind::All;
  Vec lo, hi;      // Box
  Vec center;      // Ball
  double radius = 0.0;

  static DomainK all() { return DomainK{}; }
  static DomainK box(Vec lo, Vec hi) {
    DomainK k;
    k.kind = Kind::Box;
    k.lo = std::move(lo);
    k.hi = std::move(hi);
    return k;
  }
  static DomainK ball(Vec center, double radius) {
    DomainK k;
    k.kind = Kind::Ball;
    k.center = std::move(center);
    k.radius = radius;
    return k;
  }

  Vec project(const Vec& x) const {
    switch (kind) {
      case Kind::All: return x;
      case Kind::Box: return x.cwiseMax(lo).cwiseMin(hi);
      case Kind::Ball: {
        Vec diff = x - center;
        const double n = diff.norm();
        if (n <= radius) return x;
        return center + (radius / n) * diff;
      }
    }
    return x;
  }
};

// Oracle bundle for a finite list of convex functions on a common domain.
struct ConvexFunctionFamily {
  int dim = 0;
  int count = 0;
  bool strict = false;
  std::function<double(int, const Vec&)> eval;
  std::function<Vec(int, const Vec&)> subgradient;
  // Minimizer of sum_i weights[i] * f_i over K.  weights has length `count`
  // and need not be normalized; zero entries drop the member.
  std::function<Vec(const std::vector<double>&, const DomainK&)> weighted_minimizer;
};

// Projected subgradient descent with step 1/sqrt(t); the default minimizer
// when no closed form is supplied.
inline Vec projected_subgradient_minimizer(const ConvexFunctionFamily& fam,
                                           const std::vector<double>& weights, const DomainK& k,
                                           const Tolerances& tol = {}, long max_iters = 1000000) {
  Vec x = Vec::Zero(fam.dim);
  x = k.project(x);
  Vec best = x;
  auto value = [&](const Vec& p) {
    double v = 0.0;
    for (int i = 0; i < fam.count; ++i)
      if (weights[i] != 0.0) v += weights[i] * fam.eval(i, p);
    return v;
  };
  double best_val = value(x);
  for (long t = 1; t <= max_iters; ++t) {
    Vec g = Vec::Zero(fam.dim);
    for (int i = 0; i < fam.count; ++i)
      if (weights[i] != 0.0) g += weights[i] * fam.subgradient(i, x);
    if (g.norm() <= tol.iter) return x;
    x = k.project(x - (1.0 / std::sqrt(static_cast<double>(t))) * g);
    const double v = value(x);
    if (v < best_val) {
      best_val = v;
      best = x;
    }
  }
  throw SelectError(ErrorCode::MinimizerFailed, "projected subgradient did not converge");
}

// f_i(x) = ||x - z_i||^2.  Weighted minimizer is the projected weighted mean.
inline ConvexFunctionFamily quadratic_point_family(std::vector<Vec> points) {
  if (points.empty()) throw SelectError(ErrorCode::EmptyInput, "no points");
  ConvexFunctionFamily fam;
  fam.dim = static_cast<int>(points.front().size());
  fam.count = static_cast<int>(points.size());
  fam.strict = true;
  auto pts = std::make_shared<std::vector<Vec>>(std::move(points));
  fam.eval = [pts](int i, const Vec& x) { return (x - (*pts)[i]).squaredNorm(); };
  fam.subgradient = [pts](int i, const Vec& x) { return Vec(2.0 * (x - (*pts)[i])); };
  fam.weighted_minimizer = [pts](const std::vector<double>& w, const DomainK& k) {
    Vec mean = Vec::Zero((*pts)[0].size());
    double total = 0.0;
    for (std::size_t i = 0; i < pts->size(); ++i) {
      mean += w[i] * (*pts)[i];
      total += w[i];
    }
    if (total <= 0.0) throw SelectError(ErrorCode::InvalidArgument, "all weights zero");
    return k.project(mean / total);
  };
  return fam;
}

// f_i(w) = (w.x_i - y_i)^2 + mu ||w||^2 with mu > 0; closed-form weighted
// minimizer (unconstrained K only).
inline ConvexFunctionFamily ridge_family(std::vector<Vec> xs, std::vector<double> ys, double mu) {
  if (xs.empty()) throw SelectError(ErrorCode::EmptyInput, "no examples");
  if (xs.size() != ys.size()) throw SelectError(ErrorCode::DimensionMismatch, "xs/ys mismatch");
  if (!(mu > 0.0)) throw SelectError(ErrorCode::InvalidArgument, "mu must be positive");
  ConvexFunctionFamily fam;
  fam.dim = static_cast<int>(xs.front().size());
  fam.count = static_cast<int>(xs.size());
  fam.strict = true;
  auto px = std::make_shared<std::vector<Vec>>(std::move(xs));
  auto py = std::make_shared<std::vector<double>>(std::move(ys));
  fam.eval = [px, py, mu](int i, const Vec& w) {
    const double r = w.dot((*px)[i]) - (*py)[i];
    return r * r + mu * w.squaredNorm();
  };
  fam.subgradient = [px, py, mu](int i, const Vec& w) {
    const double r = w.dot((*px)[i]) - (*py)[i];
    return Vec(2.0 * r * (*px)[i] + 2.0 * mu * w);
  };
  fam.weighted_minimizer = [px, py, mu](const std::vector<double>& w, const DomainK& k) {
    if (k.kind != DomainK::Kind::All)
      throw SelectError(ErrorCode::InvalidArgument, "ridge family supports unconstrained K only");
    const int d = static_cast<int>((*px)[0].size());
    double total = 0.0;
    Mat h = Mat::Zero(d, d);
    Vec rhs = Vec::Zero(d);
    for (std::size_t i = 0; i < px->size(); ++i) {
      if (w[i] == 0.0) continue;
      h += w[i] * (*px)[i] * (*px)[i].transpose();
      rhs += w[i] * (*py)[i] * (*px)[i];
      total += w[i];
    }
    if (total <= 0.0) throw SelectError(ErrorCode::InvalidArgument, "all weights zero");
    h += (mu * total) * Mat::Identity(d, d);
    return Vec(h.ldlt().solve(rhs));
  };
  return fam;
}

struct ConvexCombination {
  ConvexFunctionFamily family;
  std::vector<double> lambda;

  std::vector<int> support(double floor = 0.0) const {
    std::vector<int> s;
    for (int i = 0; i < static_cast<int>(lambda.size()); ++i)
      if (lambda[i] > floor) s.push_back(i);
    return s;
  }

  double eval(const Vec& x) const {
    double v = 0.0;
    for (int i = 0; i < family.count; ++i)
      if (lambda[i] != 0.0) v += lambda[i] * family.eval(i, x);
    return v;
  }

  Vec minimizer(const DomainK& k) const { return family.weighted_minimizer(lambda, k); }
};

// Midpoint spot-check of strict convexity on sampled pairs.
inline bool strictness_spot_check(const ConvexFunctionFamily& fam, const DomainK& k,
                                  std::uint64_t seed = 17, int samples = 16) {
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(fam.count)));
    Vec x = k.project(rng.uniform_vec(fam.dim, -1.0, 1.0));
    Vec y = k.project(rng.uniform_vec(fam.dim, -1.0, 1.0));
    if ((x - y).norm() < 1e-9) continue;
    const double mid = fam.eval(i, 0.5 * (x + y));
    const double chord = 0.5 * (fam.eval(i, x) + fam.eval(i, y));
    if (!(mid < chord)) return false;
  }
  return true;
}

struct SparsifyStep {
  int support_before = 0;
  int support_after = 0;
  double lambda_sum = 0.0;
  double value_before = 0.0;  // g(xi, 0)
  double value_after = 0.0;   // g(xi, t*)
};

using StepObserver = std::function<void(const SparsifyStep&)>;

namespace detail {

inline void clamp_weights(std::vector<double>& lambda, double floor) {
  for (double& l : lambda) {
    if (l < 0.0 && l > -floor) l = 0.0;
    if (l < 0.0) l = 0.0;  // drift beyond the floor is zeroed too; renormalized below
  }
}

}  // namespace detail

inline double g_eval_at(const ConvexFunctionFamily& fam, const std::vector<double>& lambda,
                        const std::vector<int>& support, const Vec& xi) {
  double v = 0.0;
  for (int i : support) v += lambda[i] * fam.eval(i, xi);
  return v;
}

// Inductive sparsifier: returns a combination over at most d+1 of the same
// functions with identical argmin over K and no larger minimum value.
inline ConvexCombination sparsify_convex(const ConvexCombination& g, const DomainK& k,
                                         const Tolerances& tol = {},
                                         const StepObserver& observer = nullptr) {
  const auto& fam = g.family;
  if (static_cast<int>(g.lambda.size()) != fam.count)
    throw SelectError(ErrorCode::DimensionMismatch, "lambda length does not match family size");
  if (!fam.strict || !strictness_spot_check(fam, k))
    throw SelectError(ErrorCode::NotStrict, "family failed the strict-convexity spot check");

  std::vector<double> lambda = g.lambda;
  detail::clamp_weights(lambda, tol.weight);
  {
    double s = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    if (s <= 0.0) throw SelectError(ErrorCode::InvalidArgument, "all weights zero");
    for (double& l : lambda) l /= s;
  }

  const int d = fam.dim;
  while (true) {
    std::vector<int> support;
    for (int i = 0; i < fam.count; ++i)
      if (lambda[i] > 0.0) support.push_back(i);
    if (static_cast<int>(support.size()) <= d + 1) break;

    const Vec xi = fam.weighted_minimizer(lambda, k);
    std::vector<Vec> subgrads(support.size());
    double grad_scale = 1.0;
    for (std::size_t j = 0; j < support.size(); ++j) {
      subgrads[j] = fam.subgradient(support[j], xi);
      grad_scale = std::max(grad_scale, subgrads[j].template lpNorm<Eigen::Infinity>());
    }
    // The walk only needs sum(lambda_i y_i) = 0; repair oracle drift by
    // projecting onto that constraint, bail out if the drift is too large.
    Vec resid = Vec::Zero(d);
    for (std::size_t j = 0; j < support.size(); ++j) resid += lambda[support[j]] * subgrads[j];
    if (resid.norm() > tol.iter * grad_scale)
      throw SelectError(ErrorCode::MinimizerFailed,
                        "stationarity residual too large at the reported minimizer");
    for (auto& y : subgrads) y -= resid;

    auto beta_opt = numerics::null_vector(subgrads, tol);
    if (!beta_opt)
      throw SelectError(ErrorCode::MinimizerFailed, "no affine dependence among subgradients");
    const auto& beta = *beta_opt;

    // Feasibility interval of lambda + t*beta.
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    int lim0 = -1, lim1 = -1;
    for (std::size_t j = 0; j < support.size(); ++j) {
      const double l = lambda[support[j]];
      const double b = beta[j];
      if (b > 0.0 && -l / b > t0) {
        t0 = -l / b;
        lim0 = static_cast<int>(j);
      }
      if (b < 0.0 && l / (-b) < t1) {
        t1 = l / (-b);
        lim1 = static_cast<int>(j);
      }
    }
    if (lim0 < 0 || lim1 < 0)
      throw SelectError(ErrorCode::MinimizerFailed, "degenerate direction in sparsification walk");

    double slope = 0.0;
    const double g0 = g_eval_at(fam, lambda, support, xi);
    for (std::size_t j = 0; j < support.size(); ++j) slope += beta[j] * fam.eval(support[j], xi);
    const double v0 = g0 + t0 * slope;
    const double v1 = g0 + t1 * slope;
    // tie-break: pick t1
    const bool take1 = !(v0 < v1);
    const double tstar = take1 ? t1 : t0;
    const int limiting = take1 ? lim1 : lim0;

    SparsifyStep step;
    step.support_before = static_cast<int>(support.size());
    step.lambda_sum = 0.0;
    step.value_before = g0;
    step.value_after = take1 ? v1 : v0;

    for (std::size_t j = 0; j < support.size(); ++j) lambda[support[j]] += tstar * beta[j];
    lambda[support[limiting]] = 0.0;
    detail::clamp_weights(lambda, tol.weight);
    double s = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    for (double& l : lambda) l /= s;

    step.lambda_sum = s;
    step.support_after = 0;
    for (double l : lambda)
      if (l > 0.0) ++step.support_after;
    if (observer) observer(step);
  }

  ConvexCombination out;
  out.family = fam;
  out.lambda = std::move(lambda);
  return out;
}

// Classical Caratheodory: express x as a convex combination of <= d+1 of the
// given points.  Realized through the sparsifier on the quadratic family,
// which preserves the weighted mean exactly at every walk step.
inline WeightedSubset classic_caratheodory(const std::vector<Vec>& points, const Vec& x,
                                           const Tolerances& tol = {}) {
  double scale0 = 1.0;
  for (const auto& p : points) scale0 = std::max(scale0, p.template lpNorm<Eigen::Infinity>());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if ((points[i] - x).template lpNorm<Eigen::Infinity>() <= tol.exact * scale0)
      return WeightedSubset{{static_cast<int>(i)}, {1.0}};
  }
  auto lambda0 = numerics::convex_representation(points, x, 0.0, tol);
  if (!lambda0) throw SelectError(ErrorCode::NotInHull, "x is not in the convex hull");
  ConvexCombination g;
  g.family = quadratic_point_family(points);
  g.lambda = *lambda0;
  ConvexCombination sparse = sparsify_convex(g, DomainK::all(), tol);

  WeightedSubset out;
  for (int i = 0; i < sparse.family.count; ++i) {
    if (sparse.lambda[i] > 0.0) {
      out.indices.push_back(i);
      out.weights.push_back(sparse.lambda[i]);
    }
  }
  // re-verify the reproduction
  Vec recon = Vec::Zero(x.size());
  for (std::size_t j = 0; j < out.indices.size(); ++j) recon += out.weights[j] * points[out.indices[j]];
  double scale = 1.0;
  for (const auto& p : points) scale = std::max(scale, p.template lpNorm<Eigen::Infinity>());
  if ((recon - x).template lpNorm<Eigen::Infinity>() > 1e3 * tol.exact * scale)
    throw SelectError(ErrorCode::SelectionFailed, "sparsified combination does not reproduce x");
  return out;
}

// Steinitz selection: <= 2d indices keeping x in the interior of the hull.
// Greedy removal; exhaustive fallback over 2d-subsets for small inputs.
inline std::vector<int> steinitz_select(const std::vector<Vec>& points, const Vec& x,
                                        const Tolerances& tol = {}) {
  const int d = static_cast<int>(x.size());
  if (!numerics::interior_point_check(points, x, tol))
    throw SelectError(ErrorCode::NotInterior, "x is not an interior point of the hull");

  std::vector<int> current(points.size());
  std::iota(current.begin(), current.end(), 0);

  auto gather = [&](const std::vector<int>& idx) {
    std::vector<Vec> sub;
    sub.reserve(idx.size());
    for (int i : idx) sub.push_back(points[i]);
    return sub;
  };

  while (static_cast<int>(current.size()) > 2 * d) {
    bool removed = false;
    for (std::size_t j = 0; j < current.size(); ++j) {
      std::vector<int> trial = current;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(j));
      if (numerics::interior_point_check(gather(trial), x, tol)) {
        current = std::move(trial);
        removed = true;
        break;
      }
    }
    if (removed) continue;

    // greedy stalled (numerically); exhaustive search over 2d-subsets
    if (static_cast<int>(points.size()) > 20)
      throw SelectError(ErrorCode::SelectionFailed, "greedy stalled and input too large for exhaustive search");
    std::vector<int> pick(static_cast<std::size_t>(2 * d));
    std::vector<int> found;
    std::function<bool(std::size_t, int)> rec = [&](std::size_t pos, int start) {
      if (pos == pick.size()) {
        std::vector<int> idx(pick.begin(), pick.end());
        std::vector<int> mapped;
        mapped.reserve(idx.size());
        for (int q : idx) mapped.push_back(current[static_cast<std::size_t>(q)]);
        if (numerics::interior_point_check(gather(mapped), x, tol)) {
          found = mapped;
          return true;
        }
        return false;
      }
      for (int v = start; v < static_cast<int>(current.size()); ++v) {
        pick[pos] = v;
        if (rec(pos + 1, v + 1)) return true;
      }
      return false;
    };
    if (!rec(0, 0)) throw SelectError(ErrorCode::SelectionFailed, "no certified 2d-subset found");
    current = found;
    break;
  }

  if (!numerics::interior_point_check(gather(current), x, tol))
    throw SelectError(ErrorCode::SelectionFailed, "final subset failed re-certification");
  return current;
}

}  // namespace dataselect::caratheodory
