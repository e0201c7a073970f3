#pragma once

// Core semantic types shared by all modules: vectors, datasets, weighted
// subsets, tolerances and the seeded RNG.  Everything downstream works in
// 64-bit floating point with explicit tolerances.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dataselect {

using Scalar = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  DimensionMismatch,
  EmptyInput,
  InvalidArgument,
  MinimizerFailed,
  NotStrict,
  NotInHull,
  NotInterior,
  SelectionFailed,
  NotRealizable,
  CertificationFailed,
  Dirac,
  BudgetTooLargeForExact,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::EmptyInput: return "EMPTY_INPUT";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::MinimizerFailed: return "MINIMIZER_FAILED";
    case ErrorCode::NotStrict: return "NOT_STRICT";
    case ErrorCode::NotInHull: return "NOT_IN_HULL";
    case ErrorCode::NotInterior: return "NOT_INTERIOR";
    case ErrorCode::SelectionFailed: return "SELECTION_FAILED";
    case ErrorCode::NotRealizable: return "NOT_REALIZABLE";
    case ErrorCode::CertificationFailed: return "CERTIFICATION_FAILED";
    case ErrorCode::Dirac: return "DIRAC";
    case ErrorCode::BudgetTooLargeForExact: return "BUDGET_TOO_LARGE_FOR_EXACT";
  }
  return "UNKNOWN";
}

class SelectError : public std::runtime_error {
 public:
  SelectError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Tolerance bundle.  `exact` guards closed-form identities, `iter` guards
// iterative-solver results, `weight` is the floor for convex weights.
struct Tolerances {
  double exact = 1e-9;
  double iter = 1e-6;
  double weight = 1e-12;

  void validate() const {
    if (!(exact > 0.0) || !(iter > 0.0) || !(weight > 0.0))
      throw SelectError(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
  }
};

struct Seed {
  std::uint64_t value = 0;
};

// Deterministic RNG.  splitmix-seeded xorshift-free: we wrap std::mt19937_64
// but generate doubles ourselves so the stream does not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in {0, ..., n-1}.
  std::uint64_t below(std::uint64_t n) {
    // modulo bias is irrelevant at desk scale but cheap to avoid
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  double gaussian() {
    // Box-Muller; cache the second value
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vec uniform_vec(int dim, double lo, double hi) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vec gaussian_vec(int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline bool is_finite(const Vec& v) { return v.allFinite(); }

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw SelectError(ErrorCode::InvalidArgument, std::string(what) + " is not finite");
}

enum class DatasetKind { Unlabeled, Regression, Classification };

inline const char* to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::Unlabeled: return "unlabeled";
    case DatasetKind::Regression: return "regression";
    case DatasetKind::Classification: return "classification";
  }
  return "unlabeled";
}

// A finite multiset of (optionally labeled) points.  `mass` generalizes the
// multiset to a finitely supported distribution: empty means uniform.  The
// two-point reduction of the mean-estimation analysis produces genuinely
// non-uniform masses, everything else leaves `mass` empty.
struct Dataset {
  DatasetKind kind = DatasetKind::Unlabeled;
  std::vector<Vec> xs;
  std::vector<double> ys;    // empty iff kind == Unlabeled
  std::vector<double> mass;  // empty => uniform

  std::size_t size() const { return xs.size(); }

  int dim() const {
    if (xs.empty()) throw SelectError(ErrorCode::EmptyInput, "dataset has no points");
    return static_cast<int>(xs.front().size());
  }

  double weight_of(std::size_t i) const {
    if (mass.empty()) return 1.0 / static_cast<double>(xs.size());
    return mass[i] / total_mass();
  }

  double total_mass() const {
    if (mass.empty()) return 1.0;
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
  }

  void validate() const {
    if (xs.empty()) throw SelectError(ErrorCode::EmptyInput, "dataset has no points");
    const auto d = xs.front().size();
    for (const auto& x : xs) {
      if (x.size() != d) throw SelectError(ErrorCode::DimensionMismatch, "points of mixed dimension");
      if (!x.allFinite()) throw SelectError(ErrorCode::InvalidArgument, "non-finite point");
    }
    if (kind == DatasetKind::Unlabeled) {
      if (!ys.empty()) throw SelectError(ErrorCode::InvalidArgument, "unlabeled dataset carries labels");
    } else {
      if (ys.size() != xs.size())
        throw SelectError(ErrorCode::InvalidArgument, "label count does not match point count");
      for (double y : ys) {
        require_finite(y, "label");
        if (kind == DatasetKind::Classification && y != 1.0 && y != -1.0)
          throw SelectError(ErrorCode::InvalidArgument, "classification labels must be -1 or +1");
      }
    }
    if (!mass.empty()) {
      if (mass.size() != xs.size())
        throw SelectError(ErrorCode::InvalidArgument, "mass count does not match point count");
      for (double m : mass) {
        require_finite(m, "mass");
        if (m < 0.0) throw SelectError(ErrorCode::InvalidArgument, "negative mass");
      }
      if (total_mass() <= 0.0) throw SelectError(ErrorCode::InvalidArgument, "zero total mass");
    }
  }
};

inline Dataset make_unlabeled(std::vector<Vec> xs, std::vector<double> mass = {}) {
  Dataset d;
  d.kind = DatasetKind::Unlabeled;
  d.xs = std::move(xs);
  d.mass = std::move(mass);
  d.validate();
  return d;
}

inline Dataset make_unlabeled_1d(const std::vector<double>& zs, std::vector<double> mass = {}) {
  std::vector<Vec> xs;
  xs.reserve(zs.size());
  for (double z : zs) {
    Vec v(1);
    v[0] = z;
    xs.push_back(v);
  }
  return make_unlabeled(std::move(xs), std::move(mass));
}

inline Dataset make_labeled(DatasetKind kind, std::vector<Vec> xs, std::vector<double> ys) {
  Dataset d;
  d.kind = kind;
  d.xs = std::move(xs);
  d.ys = std::move(ys);
  d.validate();
  return d;
}

// Indices into a dataset plus convex weights.  Indices may repeat.
struct WeightedSubset {
  std::vector<int> indices;
  std::vector<double> weights;

  std::size_t size() const { return indices.size(); }

  void validate(const Tolerances& tol = {}) const {
    if (indices.size() != weights.size())
      throw SelectError(ErrorCode::InvalidArgument, "index/weight count mismatch");
    if (indices.empty()) throw SelectError(ErrorCode::EmptyInput, "empty selection");
    double s = 0.0;
    for (double w : weights) {
      require_finite(w, "weight");
      if (w < -tol.weight) throw SelectError(ErrorCode::InvalidArgument, "negative weight");
      s += w;
    }
    if (std::abs(s - 1.0) > 1e4 * tol.weight)
      throw SelectError(ErrorCode::InvalidArgument, "weights do not sum to 1");
  }
};

}  // namespace dataselect
