#pragma once

// Stochastic convex optimization with strictly convex losses: selection of
// d+1 weighted points via the sparsifier, plus the two counterexamples that
// make strict convexity and n > d necessary.

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <vector>

#include "dataselect/caratheodory.hpp"
#include "dataselect/regression.hpp"
#include "dataselect/types.hpp"

namespace dataselect::sco {

// Selects <= d+1 weighted members whose combination has the same minimizer
// over K as the uniform average and a no-larger minimum.
inline WeightedSubset select_strictly_convex(const caratheodory::ConvexFunctionFamily& family,
                                             const caratheodory::DomainK& k,
                                             const Tolerances& tol = {}) {
  if (!family.strict) throw SelectError(ErrorCode::NotStrict, "family is not flagged strictly convex");
  caratheodory::ConvexCombination g;
  g.family = family;
  g.lambda.assign(static_cast<std::size_t>(family.count), 1.0 / family.count);
  auto sparse = caratheodory::sparsify_convex(g, k, tol);
  WeightedSubset out;
  for (int i = 0; i < family.count; ++i) {
    if (sparse.lambda[static_cast<std::size_t>(i)] > 0.0) {
      out.indices.push_back(i);
      out.weights.push_back(sparse.lambda[static_cast<std::size_t>(i)]);
    }
  }
  out.validate(tol);
  return out;
}

// f_v(x) = max(0, |<v,x>| - 1): convex but not strictly convex.
inline double slab_loss(const Vec& v, const Vec& x) {
  const double a = std::abs(v.dot(x));
  return a <= 1.0 ? 0.0 : a - 1.0;
}

struct HexagonWitness {
  std::vector<Vec> directions;  // the three slab normals
  Vec point;                    // pair-minimizer that the full average rejects
  int pair_i = 0;
  int pair_j = 0;
  double pair_loss = 0.0;
  double full_loss = 0.0;
  bool hexagon_interior_zero = false;  // all three losses vanish inside
  bool pass = false;
};

// Three slab losses with normals at a regular triangle of angles: the common
// zero set is a hexagon, any pair's zero set is a rhombus strictly containing
// it.  A point of the difference witnesses the unbounded selection ratio.
inline HexagonWitness hexagon_witness(int grid = 100) {
  HexagonWitness w;
  const double angles[3] = {M_PI / 2.0, M_PI * 7.0 / 6.0, M_PI * 11.0 / 6.0};  // 90, 210, 330 deg
  for (double a : angles) {
    Vec v(2);
    v[0] = std::cos(a);
    v[1] = std::sin(a);
    w.directions.push_back(v);
  }
  auto full = [&](const Vec& x) {
    return (slab_loss(w.directions[0], x) + slab_loss(w.directions[1], x) +
            slab_loss(w.directions[2], x)) /
           3.0;
  };

  // hexagon interior: the origin and small perturbations have zero loss
  w.hexagon_interior_zero = true;
  for (int i = 0; i < 3 && w.hexagon_interior_zero; ++i) {
    Vec probe = 0.3 * w.directions[static_cast<std::size_t>(i)];
    if (full(probe) != 0.0 || full(Vec::Zero(2)) != 0.0) w.hexagon_interior_zero = false;
  }

  // scan the rhombus of each pair for the point maximizing the full loss
  double best = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Vec& vi = w.directions[static_cast<std::size_t>(i)];
      const Vec& vj = w.directions[static_cast<std::size_t>(j)];
      // rhombus corners solve <vi,x> = +-1, <vj,x> = +-1
      Mat m(2, 2);
      m.row(0) = vi.transpose();
      m.row(1) = vj.transpose();
      auto lu = m.fullPivLu();
      double lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
      bool first = true;
      for (int s0 = -1; s0 <= 1; s0 += 2) {
        for (int s1 = -1; s1 <= 1; s1 += 2) {
          Vec rhs(2);
          rhs[0] = s0;
          rhs[1] = s1;
          Vec corner = lu.solve(rhs);
          if (first) {
            lo0 = hi0 = corner[0];
            lo1 = hi1 = corner[1];
            first = false;
          } else {
            lo0 = std::min(lo0, corner[0]);
            hi0 = std::max(hi0, corner[0]);
            lo1 = std::min(lo1, corner[1]);
            hi1 = std::max(hi1, corner[1]);
          }
        }
      }
      for (int a = 0; a <= grid; ++a) {
        for (int b = 0; b <= grid; ++b) {
          Vec x(2);
          x[0] = lo0 + (hi0 - lo0) * a / grid;
          x[1] = lo1 + (hi1 - lo1) * b / grid;
          const double pair = 0.5 * (slab_loss(vi, x) + slab_loss(vj, x));
          if (pair != 0.0) continue;
          const double f = full(x);
          if (f > best) {
            best = f;
            w.point = x;
            w.pair_i = i;
            w.pair_j = j;
            w.pair_loss = pair;
            w.full_loss = f;
          }
        }
      }
    }
  }
  w.pass = w.hexagon_interior_zero && w.full_loss > 0.0;
  return w;
}

// Regular simplex in R^d with unit vertex-to-opposite-facet distance.
inline std::vector<Vec> regular_simplex_vertices(int d) {
  if (d < 1) throw SelectError(ErrorCode::InvalidArgument, "d must be positive");
  // start from e_1..e_{d+1} minus their centroid, which lives in the sum-zero
  // hyperplane; map to R^d by an orthonormal basis of that hyperplane
  const int k = d + 1;
  Mat raw(k, k);
  raw.setIdentity();
  raw.array() -= 1.0 / k;
  // orthonormal basis of the sum-zero subspace via QR of the centering matrix
  Eigen::JacobiSVD<Mat> svd(raw, Eigen::ComputeFullU);
  Mat basis = svd.matrixU().leftCols(d);  // k x d
  // circumradius target: d/(d+1) for unit height
  const double current = raw.row(0).norm();  // sqrt(d/(d+1))
  const double scale = (static_cast<double>(d) / k) / current;
  std::vector<Vec> verts;
  for (int i = 0; i < k; ++i) verts.push_back(scale * (basis.transpose() * raw.row(i).transpose()));
  return verts;
}

// ||w - v||^P losses with smooth gradients for P > 2; gradient descent with
// backtracking serves as the weighted minimizer.
inline caratheodory::ConvexFunctionFamily pnorm_vertex_family(std::vector<Vec> vertices, double p,
                                                              const Tolerances& tol = {}) {
  if (vertices.empty()) throw SelectError(ErrorCode::EmptyInput, "no vertices");
  if (!(p > 2.0)) throw SelectError(ErrorCode::InvalidArgument, "P must exceed 2");
  caratheodory::ConvexFunctionFamily fam;
  fam.dim = static_cast<int>(vertices.front().size());
  fam.count = static_cast<int>(vertices.size());
  fam.strict = true;
  auto vs = std::make_shared<std::vector<Vec>>(std::move(vertices));
  fam.eval = [vs, p](int i, const Vec& x) { return std::pow((x - (*vs)[i]).norm(), p); };
  fam.subgradient = [vs, p](int i, const Vec& x) {
    Vec diff = x - (*vs)[i];
    const double n = diff.norm();
    if (n == 0.0) return Vec(Vec::Zero(diff.size()));
    return Vec(p * std::pow(n, p - 2.0) * diff);
  };
  fam.weighted_minimizer = [vs, p, tol, fam_eval = fam.eval,
                            fam_grad = fam.subgradient](const std::vector<double>& wts,
                                                        const caratheodory::DomainK& k) {
    const int dim = static_cast<int>((*vs)[0].size());
    auto value = [&](const Vec& x) {
      double v = 0.0;
      for (std::size_t i = 0; i < vs->size(); ++i)
        if (wts[i] != 0.0) v += wts[i] * fam_eval(static_cast<int>(i), x);
      return v;
    };
    auto grad = [&](const Vec& x) {
      Vec g = Vec::Zero(dim);
      for (std::size_t i = 0; i < vs->size(); ++i)
        if (wts[i] != 0.0) g += wts[i] * fam_grad(static_cast<int>(i), x);
      return g;
    };
    // start at the weighted vertex mean
    Vec x = Vec::Zero(dim);
    double total = 0.0;
    for (std::size_t i = 0; i < vs->size(); ++i) {
      x += wts[i] * (*vs)[i];
      total += wts[i];
    }
    if (total <= 0.0) throw SelectError(ErrorCode::InvalidArgument, "all weights zero");
    x = k.project(x / total);
    double fx = value(x);
    for (long it = 0; it < 200000; ++it) {
      Vec g = grad(x);
      if (g.norm() <= tol.iter * 1e-2) return x;
      double step = 1.0;
      for (int bt = 0; bt < 60; ++bt) {
        Vec cand = k.project(x - step * g);
        const double fc = value(cand);
        if (fc <= fx - 0.25 * step * g.squaredNorm()) {
          x = cand;
          fx = fc;
          break;
        }
        step /= 2.0;
        if (bt == 59) return x;  // stalled at numerical resolution
      }
    }
    throw SelectError(ErrorCode::MinimizerFailed, "gradient descent did not converge");
  };
  return fam;
}

struct SimplexRatioResult {
  int d = 0;
  double p = 0.0;
  double full_loss = 0.0;       // centroid loss (d/(d+1))^P
  double selected_loss = 0.0;   // best over d-subsets with weights
  double ratio = 0.0;
  double analytic_bound = 0.0;  // (1/(d+1)) / (d/(d+1))^P
  bool pass = false;
};

// Measures the selection ratio for the regular-simplex family with budget d.
inline SimplexRatioResult simplex_ratio(int d, double p, const Tolerances& tol = {}) {
  if (!(p > 2.0)) throw SelectError(ErrorCode::InvalidArgument, "P must exceed 2");
  SimplexRatioResult res;
  res.d = d;
  res.p = p;
  auto verts = regular_simplex_vertices(d);
  auto fam = pnorm_vertex_family(verts, p, tol);
  const int count = fam.count;

  // full-budget optimum: the centroid by symmetry
  {
    std::vector<double> uniform(static_cast<std::size_t>(count), 1.0 / count);
    const Vec c = fam.weighted_minimizer(uniform, caratheodory::DomainK::all());
    double v = 0.0;
    for (int i = 0; i < count; ++i) v += fam.eval(i, c);
    res.full_loss = v / count;
  }

  // best selection of d of the d+1 losses, optimizing the weights
  res.selected_loss = std::numeric_limits<double>::infinity();
  for (int excluded = 0; excluded < count; ++excluded) {
    std::vector<int> idx;
    for (int i = 0; i < count; ++i)
      if (i != excluded) idx.push_back(i);
    auto objective = [&](const std::vector<double>& alpha) {
      std::vector<double> wts(static_cast<std::size_t>(count), 0.0);
      double total = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        wts[static_cast<std::size_t>(idx[j])] = alpha[j];
        total += alpha[j];
      }
      if (total <= 0.0) return std::numeric_limits<double>::infinity();
      const Vec w = fam.weighted_minimizer(wts, caratheodory::DomainK::all());
      double v = 0.0;
      for (int i = 0; i < count; ++i) v += fam.eval(i, w);
      return v / count;
    };
    auto [alpha, v] = numerics::minimize_over_simplex(d, objective, 20, tol.iter);
    res.selected_loss = std::min(res.selected_loss, v);
  }

  res.analytic_bound = (1.0 / (d + 1)) / std::pow(static_cast<double>(d) / (d + 1), p);
  res.ratio = res.selected_loss / res.full_loss;
  res.pass = res.ratio >= res.analytic_bound - tol.iter * res.analytic_bound;
  return res;
}

}  // namespace dataselect::sco
