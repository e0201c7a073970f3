#pragma once

// Linear classification: max-margin training via the nearest point between
// convex hulls, support selection of <= d+1 points, brute-force selection
// error, and the on-hyperplane adversarial construction with its epsilon-lift.

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "dataselect/linalg.hpp"
#include "dataselect/types.hpp"

namespace dataselect::classify {

// Normalized halfspace: ||w|| = 1, or w = 0 with |b| = 1 for the constants.
struct Halfspace {
  Vec w;
  double b = 0.0;

  // sign(0) counts as +1
  int predict(const Vec& x) const { return (w.dot(x) + b >= 0.0) ? 1 : -1; }

  static Halfspace constant(int label, int dim) {
    Halfspace h;
    h.w = Vec::Zero(dim);
    h.b = label >= 0 ? 1.0 : -1.0;
    return h;
  }
};

inline double classification_loss(const Dataset& data, const Halfspace& h) {
  data.validate();
  if (data.kind != DatasetKind::Classification)
    throw SelectError(ErrorCode::InvalidArgument, "expected a classification dataset");
  double err = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (h.predict(data.xs[i]) != static_cast<int>(data.ys[i])) err += 1.0;
  return err / static_cast<double>(data.size());
}

// Wolfe's minimum-norm-point algorithm over conv(points).  Finitely
// terminating up to floating point; the iteration cap is a safety net.
struct MinNormPoint {
  Vec point;
  std::vector<int> support;
  std::vector<double> coeff;
};

inline MinNormPoint min_norm_point(const std::vector<Vec>& points, long max_iters = 100000) {
  if (points.empty()) throw SelectError(ErrorCode::EmptyInput, "no points");
  const int d = static_cast<int>(points.front().size());
  double scale2 = 0.0;
  for (const auto& p : points) scale2 = std::max(scale2, p.squaredNorm());
  const double eps = 1e-12 * (1.0 + scale2);

  int start = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].squaredNorm() < points[start].squaredNorm()) start = static_cast<int>(i);

  std::vector<int> corral{start};
  std::vector<double> mu{1.0};
  Vec x = points[start];

  auto affine_min_norm = [&](const std::vector<int>& s) {
    const int k = static_cast<int>(s.size());
    Mat kkt = Mat::Zero(k + 1, k + 1);
    Vec rhs = Vec::Zero(k + 1);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) kkt(i, j) = points[s[i]].dot(points[s[j]]);
    for (int i = 0; i < k; ++i) {
      kkt(i, k) = 1.0;
      kkt(k, i) = 1.0;
    }
    rhs[k] = 1.0;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(kkt);
    Vec sol = cod.solve(rhs);
    return std::vector<double>(sol.data(), sol.data() + k);
  };

  for (long it = 0; it < max_iters; ++it) {
    // major cycle: most violating vertex
    int j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double v = x.dot(points[i]);
      if (v < best - 1e-15) {
        best = v;
        j = static_cast<int>(i);
      }
    }
    if (best >= x.squaredNorm() - eps) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;  // numerical stall
    corral.push_back(j);
    mu.push_back(0.0);

    // minor cycles: pull x to the affine minimizer, dropping vertices that
    // leave the simplex
    for (;;) {
      std::vector<double> nu = affine_min_norm(corral);
      bool inside = true;
      for (double v : nu)
        if (v < -1e-12) inside = false;
      if (inside) {
        mu = nu;
        for (double& v : mu) v = std::max(v, 0.0);
        break;
      }
      double theta = 1.0;
      int drop = -1;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (nu[i] < mu[i] && nu[i] < 0.0) {
          const double t = mu[i] / (mu[i] - nu[i]);
          if (t < theta) {
            theta = t;
            drop = static_cast<int>(i);
          }
        }
      }
      if (drop < 0) {
        mu = nu;
        break;
      }
      for (std::size_t i = 0; i < corral.size(); ++i) mu[i] = (1.0 - theta) * mu[i] + theta * nu[i];
      mu[drop] = 0.0;
      for (int i = static_cast<int>(corral.size()) - 1; i >= 0; --i) {
        if (mu[i] <= 0.0) {
          corral.erase(corral.begin() + i);
          mu.erase(mu.begin() + i);
        }
      }
    }
    x = Vec::Zero(d);
    for (std::size_t i = 0; i < corral.size(); ++i) x += mu[i] * points[corral[i]];
  }

  MinNormPoint out;
  out.point = x;
  out.support = corral;
  out.coeff = mu;
  return out;
}

inline bool single_label(const Dataset& data, int& the_label) {
  bool has_pos = false, has_neg = false;
  for (double y : data.ys) (y > 0 ? has_pos : has_neg) = true;
  if (has_pos && has_neg) return false;
  the_label = has_pos ? 1 : -1;
  return true;
}

// Hard-margin separator as the perpendicular bisector of the shortest segment
// between the two class hulls.  Single-label input trains the constant
// classifier of that label.
inline Halfspace max_margin(const Dataset& data, const Tolerances& tol = {}) {
  data.validate();
  if (data.kind != DatasetKind::Classification)
    throw SelectError(ErrorCode::InvalidArgument, "expected a classification dataset");
  int label = 0;
  if (single_label(data, label)) return Halfspace::constant(label, data.dim());

  std::vector<Vec> diffs;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.ys[i] < 0) continue;
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (data.ys[j] > 0) continue;
      diffs.push_back(data.xs[i] - data.xs[j]);
    }
  }
  MinNormPoint mnp = min_norm_point(diffs);
  const double gap = mnp.point.norm();
  if (gap <= tol.iter) throw SelectError(ErrorCode::NotRealizable, "class hulls are not separated");

  Halfspace h;
  h.w = mnp.point / gap;
  double sp = std::numeric_limits<double>::infinity();
  double sn = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = h.w.dot(data.xs[i]);
    if (data.ys[i] > 0)
      sp = std::min(sp, v);
    else
      sn = std::max(sn, v);
  }
  h.b = -(sp + sn) / 2.0;
  return h;
}

inline double margin_of(const Dataset& data, const Tolerances& tol = {}) {
  int label = 0;
  if (single_label(data, label)) return std::numeric_limits<double>::infinity();
  std::vector<Vec> diffs;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.ys[i] < 0) continue;
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (data.ys[j] > 0) continue;
      diffs.push_back(data.xs[i] - data.xs[j]);
    }
  }
  (void)tol;
  return min_norm_point(diffs).point.norm() / 2.0;
}

inline bool is_realizable(const Dataset& data, const Tolerances& tol = {}) {
  int label = 0;
  if (single_label(data, label)) return true;
  return margin_of(data, tol) > tol.iter / 2.0;
}

inline Dataset subset_of(const Dataset& data, const std::vector<int>& idx) {
  Dataset s;
  s.kind = data.kind;
  for (int i : idx) {
    s.xs.push_back(data.xs[static_cast<std::size_t>(i)]);
    if (!data.ys.empty()) s.ys.push_back(data.ys[static_cast<std::size_t>(i)]);
  }
  return s;
}

// Enumerate index subsets of {0..n-1} of the given size in lexicographic
// order; visitor returns true to stop.
inline bool for_each_subset(int n, int size, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> idx(static_cast<std::size_t>(size));
  std::function<bool(int, int)> rec = [&](int pos, int start) {
    if (pos == size) return visit(idx);
    for (int v = start; v <= n - (size - pos); ++v) {
      idx[static_cast<std::size_t>(pos)] = v;
      if (rec(pos + 1, v + 1)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

// Selects <= d+1 points whose max-margin separator clears the whole dataset.
// Margin-active subsets are tried first so the returned separator matches the
// full-data separator whenever some small subset reproduces it.
inline std::vector<int> select_support(const Dataset& data, const Tolerances& tol = {}) {
  data.validate();
  if (!is_realizable(data, tol)) throw SelectError(ErrorCode::NotRealizable, "dataset is not realizable");
  const int d = data.dim();
  const int n = static_cast<int>(data.size());
  const Halfspace full = max_margin(data, tol);

  auto zero_error = [&](const std::vector<int>& idx) -> std::optional<Halfspace> {
    Dataset sub = subset_of(data, idx);
    int lbl = 0;
    Halfspace h = single_label(sub, lbl) ? Halfspace::constant(lbl, d) : max_margin(sub, tol);
    if (classification_loss(data, h) == 0.0) return h;
    return std::nullopt;
  };
  auto matches_full = [&](const Halfspace& h) {
    return (h.w - full.w).norm() + std::abs(h.b - full.b) <= 10.0 * tol.iter;
  };

  // margin-active points of the full separator
  std::vector<int> active;
  {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < data.size(); ++i)
      margin = std::min(margin, std::abs(full.w.dot(data.xs[i]) + full.b));
    for (std::size_t i = 0; i < data.size(); ++i)
      if (std::abs(full.w.dot(data.xs[i]) + full.b) <= margin * (1.0 + 1e-6) + tol.iter)
        active.push_back(static_cast<int>(i));
  }
  std::vector<int> found;
  for (int size = 1; size <= std::min<int>(d + 1, static_cast<int>(active.size())); ++size) {
    if (for_each_subset(static_cast<int>(active.size()), size, [&](const std::vector<int>& pick) {
          std::vector<int> idx;
          idx.reserve(pick.size());
          for (int p : pick) idx.push_back(active[static_cast<std::size_t>(p)]);
          auto h = zero_error(idx);
          if (h && matches_full(*h)) {
            found = idx;
            return true;
          }
          return false;
        }))
      return found;
  }

  // fall back to all subsets; the first zero-error subset wins
  for (int size = 1; size <= std::min(d + 1, n); ++size) {
    if (for_each_subset(n, size, [&](const std::vector<int>& idx) {
          if (zero_error(idx)) {
            found = idx;
            return true;
          }
          return false;
        }))
      return found;
  }
  throw SelectError(ErrorCode::SelectionFailed, "no zero-error subset of size <= d+1 found");
}

using Trainer = std::function<Halfspace(const Dataset&)>;

inline Trainer max_margin_trainer(const Tolerances& tol = {}) {
  return [tol](const Dataset& sub) { return max_margin(sub, tol); };
}

// Minimum loss over all selections of at most n points (sequences collapse to
// their support sets, so sizes 1..n are enumerated).
inline double best_subset_error(const Dataset& data, int n, const Trainer& trainer) {
  data.validate();
  if (n < 1) throw SelectError(ErrorCode::InvalidArgument, "budget must be at least 1");
  const int npts = static_cast<int>(data.size());
  double best = std::numeric_limits<double>::infinity();
  for (int size = 1; size <= std::min(n, npts); ++size) {
    double combos = 1.0;
    for (int k = 1; k <= size; ++k) combos *= static_cast<double>(npts - size + k) / k;
    if (combos > 1e6)
      throw SelectError(ErrorCode::BudgetTooLargeForExact, "too many subsets for exhaustive search");
    for_each_subset(npts, size, [&](const std::vector<int>& idx) {
      Dataset sub = subset_of(data, idx);
      best = std::min(best, classification_loss(data, trainer(sub)));
      return false;
    });
  }
  return best;
}

struct AdversarialCertificate {
  bool exact = false;           // exact for d = 2 (restriction to the data line)
  double worst_halfspace_error = 0.0;
  int attempts = 0;
};

namespace detail {

// Max accuracy over all halfspace restrictions to a set of collinear points:
// threshold patterns in both orientations plus the two constants.
inline int max_correct_collinear(const std::vector<double>& pos, const std::vector<double>& labels) {
  const int n = static_cast<int>(pos.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pos[a] < pos[b]; });
  int plus_total = 0;
  for (double y : labels)
    if (y > 0) ++plus_total;
  int best = std::max(plus_total, n - plus_total);  // constants
  // prefix k predicted -1, suffix predicted +1 (and the flip)
  int minus_in_prefix = 0;
  for (int k = 1; k <= n; ++k) {
    if (labels[order[static_cast<std::size_t>(k - 1)]] < 0) ++minus_in_prefix;
    const int plus_in_suffix = plus_total - (k - minus_in_prefix);
    const int correct = minus_in_prefix + plus_in_suffix;
    best = std::max(best, correct);
    best = std::max(best, n - correct);  // flipped orientation
  }
  return best;
}

}  // namespace detail

// Random dataset on the hyperplane x(d) = 0 such that (P1) every <= d-point
// subset is realizable with affinely independent features and (P2) every
// halfspace errs at least 1/2 - eta on it.  Resamples on certification
// failure, up to 100 attempts.
inline std::pair<Dataset, AdversarialCertificate> adversarial_dataset(int d, double eta, int n_points,
                                                                      Seed seed,
                                                                      const Tolerances& tol = {}) {
  if (d < 2) throw SelectError(ErrorCode::InvalidArgument, "d must be at least 2");
  if (!(eta > 0.0 && eta < 0.5))
    throw SelectError(ErrorCode::InvalidArgument, "eta must lie in (0, 1/2)");
  if (n_points < 2) throw SelectError(ErrorCode::InvalidArgument, "need at least 2 points");

  Rng rng(seed);
  for (int attempt = 1; attempt <= 100; ++attempt) {
    Dataset data;
    data.kind = DatasetKind::Classification;
    for (int i = 0; i < n_points; ++i) {
      Vec x = Vec::Zero(d);
      for (int j = 0; j + 1 < d; ++j) x[j] = rng.uniform();
      data.xs.push_back(x);
      data.ys.push_back(rng.below(2) == 0 ? -1.0 : 1.0);
    }

    // (P1) affine independence of every <= d-subset of the flattened features
    bool p1 = true;
    if (d == 2) {
      std::vector<double> u(data.xs.size());
      for (std::size_t i = 0; i < data.xs.size(); ++i) u[i] = data.xs[i][0];
      std::vector<double> sorted = u;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i + 1] - sorted[i] <= tol.weight) p1 = false;
    } else {
      // exhaustive for small N, sampled otherwise (flagged heuristic below)
      auto check_subset = [&](const std::vector<int>& idx) {
        Mat diffs(static_cast<int>(idx.size()) - 1, d - 1);
        for (std::size_t r = 1; r < idx.size(); ++r)
          diffs.row(static_cast<int>(r - 1)) =
              (data.xs[static_cast<std::size_t>(idx[r])] - data.xs[static_cast<std::size_t>(idx[0])])
                  .head(d - 1)
                  .transpose();
        return numerics::rank_of(diffs) == static_cast<int>(idx.size()) - 1;
      };
      if (n_points <= 14) {
        p1 = !for_each_subset(n_points, std::min(d, n_points), [&](const std::vector<int>& idx) {
          return !check_subset(idx);
        });
      } else {
        for (int s = 0; s < 1000 && p1; ++s) {
          std::vector<int> idx;
          while (static_cast<int>(idx.size()) < std::min(d, n_points)) {
            int cand = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_points)));
            if (std::find(idx.begin(), idx.end(), cand) == idx.end()) idx.push_back(cand);
          }
          std::sort(idx.begin(), idx.end());
          if (!check_subset(idx)) p1 = false;
        }
      }
    }
    if (!p1) continue;

    // (P2) every halfspace errs >= 1/2 - eta
    AdversarialCertificate cert;
    cert.attempts = attempt;
    if (d == 2) {
      std::vector<double> u(data.xs.size());
      for (std::size_t i = 0; i < data.xs.size(); ++i) u[i] = data.xs[i][0];
      const int best_correct = detail::max_correct_collinear(u, data.ys);
      const double min_err = 1.0 - static_cast<double>(best_correct) / n_points;
      cert.exact = true;
      cert.worst_halfspace_error = min_err;
      if (min_err >= 0.5 - eta) return {data, cert};
    } else {
      // heuristic: random-restart linear probes for an accurate halfspace
      double min_err = 1.0;
      for (int restart = 0; restart < 200; ++restart) {
        Vec w = rng.gaussian_vec(d);
        w[d - 1] = 0.0;
        if (w.norm() == 0.0) continue;
        w.normalize();
        std::vector<double> proj(data.xs.size());
        for (std::size_t i = 0; i < data.xs.size(); ++i) proj[i] = w.dot(data.xs[i]);
        const int best_correct = detail::max_correct_collinear(proj, data.ys);
        min_err = std::min(min_err, 1.0 - static_cast<double>(best_correct) / n_points);
      }
      cert.exact = false;
      cert.worst_halfspace_error = min_err;
      if (min_err >= 0.5 - eta) return {data, cert};
    }
  }
  throw SelectError(ErrorCode::CertificationFailed,
                    "no certified adversarial dataset within 100 attempts");
}

// D_eps: shift the last coordinate of each point by y_i * eps.  Realizable by
// sign(x(d)) for every eps > 0; that classifier is checked directly.
inline Dataset epsilon_lift(const Dataset& data, double eps, const Tolerances& tol = {}) {
  data.validate();
  if (data.kind != DatasetKind::Classification)
    throw SelectError(ErrorCode::InvalidArgument, "expected a classification dataset");
  if (eps == 0.0) return data;
  if (eps < 0.0) throw SelectError(ErrorCode::InvalidArgument, "eps must be nonnegative");
  const int d = data.dim();
  Dataset lifted = data;
  for (std::size_t i = 0; i < lifted.size(); ++i) lifted.xs[i][d - 1] += lifted.ys[i] * eps;
  Halfspace last_coord;
  last_coord.w = Vec::Zero(d);
  last_coord.w[d - 1] = 1.0;
  last_coord.b = 0.0;
  if (classification_loss(lifted, last_coord) != 0.0)
    throw SelectError(ErrorCode::CertificationFailed, "lifted dataset not realized by sign(x(d))");
  (void)tol;
  return lifted;
}

// The one-dimensional non-continuous ERM demo: trained on a single point, the
// separator sits exactly on that point, which keeps its own label; everything
// to the right shares the label, the open left side takes the opposite one.
// On threshold data this already classifies perfectly with one training
// point, which no continuous rule can do.
inline std::function<int(double)> noncontinuous_erm_1d(double pivot, int pivot_label) {
  if (pivot_label != 1 && pivot_label != -1)
    throw SelectError(ErrorCode::InvalidArgument, "label must be -1 or +1");
  return [pivot, pivot_label](double x) {
    if (x == pivot) return pivot_label;
    return x > pivot ? pivot_label : -pivot_label;
  };
}

}  // namespace dataselect::classify
