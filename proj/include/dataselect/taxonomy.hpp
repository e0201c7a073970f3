#pragma once

// Finite hypothesis classes: VC dimension, star number, epsilon-nets, the
// adversarial-ERM selection regret, and the rate-regime classifier for
// parameterized families.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "dataselect/types.hpp"

namespace dataselect::taxonomy {

// |H| x |X| sign matrix; rows are hypotheses, columns are domain points.
struct FiniteClass {
  std::vector<std::string> domain_names;  // optional, size |X| when present
  std::vector<std::vector<int>> labels;   // entries in {-1, +1}

  int num_hypotheses() const { return static_cast<int>(labels.size()); }
  int domain_size() const { return labels.empty() ? 0 : static_cast<int>(labels.front().size()); }

  void validate() const {
    if (labels.empty()) throw SelectError(ErrorCode::EmptyInput, "class has no hypotheses");
    const std::size_t m = labels.front().size();
    if (m == 0) throw SelectError(ErrorCode::EmptyInput, "class has empty domain");
    for (const auto& row : labels) {
      if (row.size() != m) throw SelectError(ErrorCode::DimensionMismatch, "ragged label matrix");
      for (int v : row)
        if (v != 1 && v != -1) throw SelectError(ErrorCode::InvalidArgument, "labels must be +-1");
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = i + 1; j < labels.size(); ++j)
        if (labels[i] == labels[j]) throw SelectError(ErrorCode::InvalidArgument, "duplicate hypothesis rows");
    if (!domain_names.empty() && domain_names.size() != m)
      throw SelectError(ErrorCode::InvalidArgument, "domain name count mismatch");
  }
};

// Subsets of a ground set {0..m-1}, stored as bitmasks.
struct SetFamily {
  int ground_size = 0;
  std::vector<std::uint64_t> sets;

  void validate() const {
    if (ground_size < 0 || ground_size > 63)
      throw SelectError(ErrorCode::InvalidArgument, "ground set must have at most 63 elements");
    const std::uint64_t mask = ground_size == 0 ? 0 : ((std::uint64_t{1} << ground_size) - 1);
    for (auto s : sets)
      if ((s & ~mask) != 0) throw SelectError(ErrorCode::InvalidArgument, "set exceeds ground set");
  }
};

namespace detail {

inline bool next_subset(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace detail

// Size of the largest shattered subset of the domain; exhaustive.
inline int vc_dimension(const FiniteClass& h) {
  h.validate();
  const int m = h.domain_size();
  if (m > 20) throw SelectError(ErrorCode::BudgetTooLargeForExact, "domain too large for exhaustive VC");
  int best = 0;
  for (int k = 1; k <= m; ++k) {
    if (static_cast<std::uint64_t>(h.num_hypotheses()) < (std::uint64_t{1} << k)) break;
    bool any = false;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    do {
      std::vector<bool> seen(std::size_t{1} << k, false);
      std::size_t distinct = 0;
      for (const auto& row : h.labels) {
        std::size_t pat = 0;
        for (int j = 0; j < k; ++j)
          if (row[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] > 0)
            pat |= (std::size_t{1} << j);
        if (!seen[pat]) {
          seen[pat] = true;
          if (++distinct == (std::size_t{1} << k)) break;
        }
      }
      if (distinct == (std::size_t{1} << k)) {
        any = true;
        break;
      }
    } while (detail::next_subset(idx, m));
    if (!any) break;
    best = k;
  }
  return best;
}

namespace detail {

// Largest T such that every x in T has a witness set S with S & T == {x}.
// Feasibility is downward closed; branch and bound over inclusion.
inline int max_star_set(const std::vector<std::uint64_t>& witness_sets, int m) {
  auto feasible = [&](std::uint64_t t) {
    for (int x = 0; x < m; ++x) {
      if (!(t & (std::uint64_t{1} << x))) continue;
      bool ok = false;
      for (auto s : witness_sets) {
        if ((s & t) == (std::uint64_t{1} << x)) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  };
  // feasibility is downward closed, so infeasible prefixes can be pruned
  int best = 0;
  std::function<void(int, std::uint64_t, int)> rec = [&](int pos, std::uint64_t t, int size) {
    if (size + (m - pos) <= best) return;
    if (!feasible(t)) return;
    if (size > best) best = size;
    for (int nxt = pos; nxt < m; ++nxt) rec(nxt + 1, t | (std::uint64_t{1} << nxt), size + 1);
  };
  rec(0, 0, 0);
  return best;
}

}  // namespace detail

// Star number centered at a hypothesis: the largest set of points each of
// which some other hypothesis flips alone.
inline int star_number_centered(const FiniteClass& h, int center) {
  const int m = h.domain_size();
  std::vector<std::uint64_t> disag;
  for (int r = 0; r < h.num_hypotheses(); ++r) {
    if (r == center) continue;
    std::uint64_t s = 0;
    for (int j = 0; j < m; ++j)
      if (h.labels[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] !=
          h.labels[static_cast<std::size_t>(center)][static_cast<std::size_t>(j)])
        s |= (std::uint64_t{1} << j);
    disag.push_back(s);
  }
  return detail::max_star_set(disag, m);
}

inline int star_number(const FiniteClass& h) {
  h.validate();
  if (h.domain_size() > 24)
    throw SelectError(ErrorCode::BudgetTooLargeForExact, "domain too large for exhaustive star number");
  int best = 0;
  for (int c = 0; c < h.num_hypotheses(); ++c) best = std::max(best, star_number_centered(h, c));
  return best;
}

inline int star_number(const SetFamily& f) {
  f.validate();
  return detail::max_star_set(f.sets, f.ground_size);
}

// Greedy epsilon-net: repeatedly hit the most uncovered heavy sets.  The
// output is re-certified against every set before returning.
inline std::vector<int> epsilon_net_greedy(const SetFamily& f, const std::vector<double>& p,
                                           double eps) {
  f.validate();
  if (static_cast<int>(p.size()) != f.ground_size)
    throw SelectError(ErrorCode::DimensionMismatch, "distribution size mismatch");
  auto measure = [&](std::uint64_t s) {
    double v = 0.0;
    for (int i = 0; i < f.ground_size; ++i)
      if (s & (std::uint64_t{1} << i)) v += p[static_cast<std::size_t>(i)];
    return v;
  };
  std::vector<std::uint64_t> heavy;
  for (auto s : f.sets)
    if (measure(s) > eps) heavy.push_back(s);

  std::vector<int> net;
  std::uint64_t chosen = 0;
  std::vector<bool> covered(heavy.size(), false);
  std::size_t uncovered = heavy.size();
  while (uncovered > 0) {
    int best_elem = -1;
    int best_gain = -1;
    for (int e = 0; e < f.ground_size; ++e) {
      if (chosen & (std::uint64_t{1} << e)) continue;
      int gain = 0;
      for (std::size_t s = 0; s < heavy.size(); ++s)
        if (!covered[s] && (heavy[s] & (std::uint64_t{1} << e))) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best_elem = e;
      }
    }
    if (best_elem < 0 || best_gain == 0)
      throw SelectError(ErrorCode::SelectionFailed, "uncovered heavy set is empty");
    chosen |= (std::uint64_t{1} << best_elem);
    net.push_back(best_elem);
    for (std::size_t s = 0; s < heavy.size(); ++s)
      if (!covered[s] && (heavy[s] & (std::uint64_t{1} << best_elem))) {
        covered[s] = true;
        --uncovered;
      }
  }
  std::sort(net.begin(), net.end());
  for (auto s : f.sets) {
    if (measure(s) > eps) {
      bool hit = false;
      for (int e : net)
        if (s & (std::uint64_t{1} << e)) hit = true;
      if (!hit) throw SelectError(ErrorCode::SelectionFailed, "greedy net failed certification");
    }
  }
  return net;
}

inline bool is_epsilon_net(const SetFamily& f, const std::vector<double>& p, double eps,
                           const std::vector<int>& net) {
  std::uint64_t mask = 0;
  for (int e : net) mask |= (std::uint64_t{1} << e);
  for (auto s : f.sets) {
    double v = 0.0;
    for (int i = 0; i < f.ground_size; ++i)
      if (s & (std::uint64_t{1} << i)) v += p[static_cast<std::size_t>(i)];
    if (v > eps && (s & mask) == 0) return false;
  }
  return true;
}

// Exact minimum-size epsilon-net via branch-and-bound hitting set.
inline std::vector<int> epsilon_net_minimum(const SetFamily& f, const std::vector<double>& p,
                                            double eps) {
  f.validate();
  if (f.ground_size > 20)
    throw SelectError(ErrorCode::BudgetTooLargeForExact, "ground set too large for exact net");
  auto measure = [&](std::uint64_t s) {
    double v = 0.0;
    for (int i = 0; i < f.ground_size; ++i)
      if (s & (std::uint64_t{1} << i)) v += p[static_cast<std::size_t>(i)];
    return v;
  };
  std::vector<std::uint64_t> heavy;
  for (auto s : f.sets)
    if (measure(s) > eps) heavy.push_back(s);
  if (heavy.empty()) return {};

  std::vector<int> best = epsilon_net_greedy(f, p, eps);
  std::vector<int> current;
  std::function<void(std::uint64_t)> rec = [&](std::uint64_t chosen) {
    // branch on an uncovered heavy set with the fewest elements
    const std::uint64_t* target = nullptr;
    int target_size = 65;
    for (const auto& s : heavy) {
      if (s & chosen) continue;
      const int sz = __builtin_popcountll(s);
      if (sz < target_size) {
        target_size = sz;
        target = &s;
      }
    }
    if (!target) {
      if (current.size() < best.size()) {
        best = current;
        std::sort(best.begin(), best.end());
      }
      return;
    }
    if (target_size == 0) throw SelectError(ErrorCode::SelectionFailed, "empty heavy set has no net");
    if (current.size() + 1 >= best.size()) return;  // cannot improve
    for (int e = 0; e < f.ground_size; ++e) {
      if (*target & (std::uint64_t{1} << e)) {
        current.push_back(e);
        rec(chosen | (std::uint64_t{1} << e));
        current.pop_back();
      }
    }
  };
  rec(0);
  std::sort(best.begin(), best.end());
  return best;
}

// A dataset over the class domain: point indices plus +-1 labels.
struct DomainDataset {
  std::vector<int> points;
  std::vector<int> labels;

  std::size_t size() const { return points.size(); }
};

inline double class_loss(const FiniteClass& h, const DomainDataset& d, int row) {
  double err = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (h.labels[static_cast<std::size_t>(row)][static_cast<std::size_t>(d.points[i])] != d.labels[i])
      err += 1.0;
  return err / static_cast<double>(d.size());
}

inline double optimal_class_loss(const FiniteClass& h, const DomainDataset& d) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < h.num_hypotheses(); ++r) best = std::min(best, class_loss(h, d, r));
  return best;
}

// Largest realizable subdataset; exact because any realizable subset must be
// consistent with a single hypothesis of the finite class.
inline DomainDataset maximal_realizable_subdataset(const FiniteClass& h, const DomainDataset& d) {
  int best_row = 0;
  std::size_t best_count = 0;
  for (int r = 0; r < h.num_hypotheses(); ++r) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (h.labels[static_cast<std::size_t>(r)][static_cast<std::size_t>(d.points[i])] == d.labels[i])
        ++count;
    if (count > best_count) {
      best_count = count;
      best_row = r;
    }
  }
  DomainDataset out;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (h.labels[static_cast<std::size_t>(best_row)][static_cast<std::size_t>(d.points[i])] ==
        d.labels[i]) {
      out.points.push_back(d.points[i]);
      out.labels.push_back(d.labels[i]);
    }
  return out;
}

// err(H | D'): for each hypothesis, the subset of D' it misclassifies.
// Ground set indices refer to positions within d.
inline SetFamily error_family(const FiniteClass& h, const DomainDataset& d) {
  SetFamily f;
  f.ground_size = static_cast<int>(d.size());
  for (int r = 0; r < h.num_hypotheses(); ++r) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (h.labels[static_cast<std::size_t>(r)][static_cast<std::size_t>(d.points[i])] != d.labels[i])
        s |= (std::uint64_t{1} << i);
    f.sets.push_back(s);
  }
  return f;
}

// Adversarial selection regret: min over n-subsets of the worst population
// loss among empirical minimizers on the subset, relative to the best
// hypothesis.  The inner max realizes the sup over ERMs.
inline double regret_adversarial(const FiniteClass& h, const DomainDataset& d, int n) {
  h.validate();
  if (d.size() == 0) throw SelectError(ErrorCode::EmptyInput, "empty dataset");
  if (n < 1) throw SelectError(ErrorCode::InvalidArgument, "budget must be at least 1");
  const int npts = static_cast<int>(d.size());
  n = std::min(n, npts);
  double combos = 1.0;
  for (int k = 1; k <= n; ++k) combos *= static_cast<double>(npts - n + k) / k;
  if (combos > 1e6)
    throw SelectError(ErrorCode::BudgetTooLargeForExact, "too many subsets for exhaustive regret");

  const double lstar = optimal_class_loss(h, d);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  do {
    double min_emp = std::numeric_limits<double>::infinity();
    std::vector<double> emp(static_cast<std::size_t>(h.num_hypotheses()));
    for (int r = 0; r < h.num_hypotheses(); ++r) {
      double e = 0.0;
      for (int i : idx)
        if (h.labels[static_cast<std::size_t>(r)][static_cast<std::size_t>(d.points[static_cast<std::size_t>(i)])] !=
            d.labels[static_cast<std::size_t>(i)])
          e += 1.0;
      emp[static_cast<std::size_t>(r)] = e;
      min_emp = std::min(min_emp, e);
    }
    double adv = 0.0;
    for (int r = 0; r < h.num_hypotheses(); ++r)
      if (emp[static_cast<std::size_t>(r)] == min_emp) adv = std::max(adv, class_loss(h, d, r));
    best = std::min(best, adv - lstar);
  } while (detail::next_subset(idx, npts));
  return best;
}

enum class Regime { Trivial, Linear, Zero };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Trivial: return "trivial";
    case Regime::Linear: return "linear";
    case Regime::Zero: return "zero";
  }
  return "unknown";
}

struct RegimeReport {
  Regime regime = Regime::Zero;
  std::vector<int> sizes;
  std::vector<int> vc;
  std::vector<int> star;
};

// Classifies a growing family of finite classes by whether VC dimension or
// star number grows with the size parameter.  Evidence, not proof: the
// finite members proxy the infinite class.
inline RegimeReport classify_regime(const std::vector<FiniteClass>& family) {
  if (family.size() < 2) throw SelectError(ErrorCode::InvalidArgument, "need at least two members");
  RegimeReport rep;
  for (const auto& h : family) {
    rep.sizes.push_back(h.domain_size());
    rep.vc.push_back(vc_dimension(h));
    rep.star.push_back(star_number(h));
  }
  const bool vc_grows = rep.vc.back() > rep.vc.front();
  const bool star_grows = rep.star.back() > rep.star.front();
  if (vc_grows)
    rep.regime = Regime::Trivial;
  else if (star_grows)
    rep.regime = Regime::Linear;
  else
    rep.regime = Regime::Zero;
  return rep;
}

// Canonical parameterized families used by the experiments.

// Singletons over m points plus the all-minus hypothesis.
inline FiniteClass singleton_class(int m) {
  FiniteClass h;
  for (int i = 0; i < m; ++i) {
    std::vector<int> row(static_cast<std::size_t>(m), -1);
    row[static_cast<std::size_t>(i)] = 1;
    h.labels.push_back(std::move(row));
  }
  h.labels.push_back(std::vector<int>(static_cast<std::size_t>(m), -1));
  return h;
}

// Thresholds over {1..m}: +1 exactly on a suffix (including the constants).
inline FiniteClass threshold_class(int m) {
  FiniteClass h;
  for (int t = 0; t <= m; ++t) {
    std::vector<int> row(static_cast<std::size_t>(m), -1);
    for (int j = t; j < m; ++j) row[static_cast<std::size_t>(j)] = 1;
    h.labels.push_back(std::move(row));
  }
  return h;
}

// The full cube {-1,+1}^m.
inline FiniteClass cube_class(int m) {
  if (m > 16) throw SelectError(ErrorCode::InvalidArgument, "cube class too large");
  FiniteClass h;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    std::vector<int> row(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = (bits >> j) & 1 ? 1 : -1;
    h.labels.push_back(std::move(row));
  }
  return h;
}

}  // namespace dataselect::taxonomy
