#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "dataselect/caratheodory.hpp"
#include "dataselect/linalg.hpp"

using namespace dataselect;
using namespace dataselect::caratheodory;

namespace {

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// independent oracle for the 1-d quadratic family: best sparsified minimum
// over all support pairs and a fine weight grid, subject to keeping the
// argmin fixed
double two_point_oracle_min(const std::vector<double>& zs, const std::vector<double>& lambda,
                            double target_argmin) {
  double best = std::numeric_limits<double>::infinity();
  const int grid = 200000;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    for (std::size_t j = 0; j < zs.size(); ++j) {
      if (i == j) continue;
      if (std::abs(zs[i] - zs[j]) < 1e-12) continue;
      // weight on i forced by the argmin constraint: a zi + (1-a) zj = m
      const double a = (target_argmin - zs[j]) / (zs[i] - zs[j]);
      if (a < -1e-12 || a > 1.0 + 1e-12) continue;
      double value = a * (target_argmin - zs[i]) * (target_argmin - zs[i]) +
                     (1.0 - a) * (target_argmin - zs[j]) * (target_argmin - zs[j]);
      best = std::min(best, value);
    }
  }
  (void)grid;
  (void)lambda;
  // single-point support also allowed when the argmin is a data point
  for (double z : zs)
    if (std::abs(z - target_argmin) < 1e-12) best = std::min(best, 0.0);
  return best;
}

}  // namespace

TEST_CASE("sparsifier reduces the 0001 family to two support points", "[caratheodory]") {
  // uniform combination of (x - z)^2 over z in {0,0,0,1}
  std::vector<Vec> zs = {vec1(0), vec1(0), vec1(0), vec1(1)};
  ConvexCombination g;
  g.family = quadratic_point_family(zs);
  g.lambda = {0.25, 0.25, 0.25, 0.25};
  const auto k = DomainK::all();

  const Vec argmin0 = g.minimizer(k);
  REQUIRE(argmin0[0] == Catch::Approx(0.25));
  const double min0 = g.eval(argmin0);
  REQUIRE(min0 == Catch::Approx(3.0 / 16.0));

  const auto sparse = sparsify_convex(g, k);
  const auto support = sparse.support();
  REQUIRE(support.size() <= 2);
  const Vec argmin1 = sparse.minimizer(k);
  CHECK(argmin1[0] == Catch::Approx(0.25).margin(1e-9));
  CHECK(sparse.eval(argmin1) <= min0 + 1e-9);

  // frozen oracle: best two-point value with argmin 1/4 over support {0,1}
  const double oracle = two_point_oracle_min({0.0, 1.0}, {}, 0.25);
  REQUIRE(oracle == Catch::Approx(3.0 / 16.0));
  CHECK(sparse.eval(argmin1) >= oracle - 1e-9);
}

TEST_CASE("sparsifier leaves small supports unchanged", "[caratheodory]") {
  std::vector<Vec> zs = {vec2(0, 0), vec2(1, 1), vec2(-1, 0.5)};
  ConvexCombination g;
  g.family = quadratic_point_family(zs);
  g.lambda = {0.5, 0.3, 0.2};
  const auto sparse = sparsify_convex(g, DomainK::all());
  REQUIRE(sparse.lambda == g.lambda);
}

TEST_CASE("sparsifier on random planar quadratics matches exhaustive search", "[caratheodory]") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec> zs;
    for (int i = 0; i < 5; ++i) zs.push_back(rng.uniform_vec(2, -1.0, 1.0));
    std::vector<double> lambda(5);
    double total = 0.0;
    for (double& l : lambda) {
      l = 0.1 + rng.uniform();
      total += l;
    }
    for (double& l : lambda) l /= total;

    ConvexCombination g;
    g.family = quadratic_point_family(zs);
    g.lambda = lambda;
    Vec mean = Vec::Zero(2);
    for (int i = 0; i < 5; ++i) mean += lambda[static_cast<std::size_t>(i)] * zs[static_cast<std::size_t>(i)];

    const auto sparse = sparsify_convex(g, DomainK::all());
    REQUIRE(sparse.support().size() <= 3);
    const Vec argmin = sparse.minimizer(DomainK::all());
    CHECK((argmin - mean).norm() <= 1e-6);
    CHECK(sparse.eval(argmin) <= g.eval(mean) + 1e-9);

    // exhaustive oracle over size-3 supports: verify feasibility of the mean
    bool some_triple_represents = false;
    for (int a = 0; a < 5 && !some_triple_represents; ++a)
      for (int b = a + 1; b < 5 && !some_triple_represents; ++b)
        for (int c = b + 1; c < 5 && !some_triple_represents; ++c)
          if (numerics::convex_representation({zs[a], zs[b], zs[c]}, mean, 0.0)) {
            some_triple_represents = true;
          }
    REQUIRE(some_triple_represents);
  }
}

TEST_CASE("sparsifier step invariants hold along the walk", "[caratheodory]") {
  Rng rng(21);
  std::vector<Vec> zs;
  for (int i = 0; i < 9; ++i) zs.push_back(rng.uniform_vec(2, -1.0, 1.0));
  ConvexCombination g;
  g.family = quadratic_point_family(zs);
  g.lambda.assign(9, 1.0 / 9.0);

  std::vector<SparsifyStep> steps;
  sparsify_convex(g, DomainK::all(), {}, [&](const SparsifyStep& s) { steps.push_back(s); });
  REQUIRE_FALSE(steps.empty());
  for (const auto& s : steps) {
    CHECK(s.lambda_sum == Catch::Approx(1.0).margin(1e-12));
    CHECK(s.support_after < s.support_before);
    CHECK(s.value_after <= s.value_before + 1e-12);
  }
}

TEST_CASE("variance never increases through sparsification", "[caratheodory]") {
  // quadratic family: E[Y] = E[X] and Var(Y) <= Var(X)
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 1 + static_cast<int>(rng.below(3));
    const int n = d + 2 + static_cast<int>(rng.below(6));
    std::vector<Vec> zs;
    for (int i = 0; i < n; ++i) zs.push_back(rng.uniform_vec(d, -1.0, 1.0));
    std::vector<double> lambda(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& l : lambda) {
      l = 0.05 + rng.uniform();
      total += l;
    }
    for (double& l : lambda) l /= total;

    ConvexCombination g;
    g.family = quadratic_point_family(zs);
    g.lambda = lambda;
    Vec mean_x = Vec::Zero(d);
    for (int i = 0; i < n; ++i) mean_x += lambda[static_cast<std::size_t>(i)] * zs[static_cast<std::size_t>(i)];
    const double var_x = g.eval(mean_x);

    const auto sparse = sparsify_convex(g, DomainK::all());
    Vec mean_y = Vec::Zero(d);
    for (int i = 0; i < n; ++i) mean_y += sparse.lambda[static_cast<std::size_t>(i)] * zs[static_cast<std::size_t>(i)];
    const double var_y = sparse.eval(mean_y);

    CHECK((mean_y - mean_x).norm() <= 1e-9);
    CHECK(var_y <= var_x + 1e-9);
  }
}

TEST_CASE("sparsifier rejects families that are not strictly convex", "[caratheodory]") {
  ConvexFunctionFamily fam;
  fam.dim = 1;
  fam.count = 3;
  fam.strict = true;  // lies; the spot check catches it
  fam.eval = [](int i, const Vec& x) { return (i + 1.0) * x[0]; };
  fam.subgradient = [](int i, const Vec&) { return vec1(i + 1.0); };
  fam.weighted_minimizer = [](const std::vector<double>&, const DomainK&) { return vec1(0.0); };
  ConvexCombination g;
  g.family = fam;
  g.lambda = {0.5, 0.3, 0.2};
  CHECK_THROWS_AS(sparsify_convex(g, DomainK::all()), SelectError);
}

TEST_CASE("classic caratheodory on a square centroid", "[caratheodory]") {
  std::vector<Vec> corners = {vec2(0, 0), vec2(1, 0), vec2(1, 1), vec2(0, 1)};
  const Vec x = vec2(0.5, 0.5);

  // oracle: the barycentric system for the triangle {0,1,2} containing x
  {
    Mat m(3, 3);
    m << 0, 1, 1, 0, 0, 1, 1, 1, 1;
    Vec rhs(3);
    rhs << 0.5, 0.5, 1.0;
    const Vec bary = m.fullPivLu().solve(rhs);
    REQUIRE(bary.minCoeff() >= -1e-12);  // x sits inside (on a face of) it
  }

  const auto sel = classic_caratheodory(corners, x);
  REQUIRE(sel.size() <= 3);
  Vec recon = Vec::Zero(2);
  double sum = 0.0;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    recon += sel.weights[i] * corners[static_cast<std::size_t>(sel.indices[i])];
    sum += sel.weights[i];
  }
  CHECK(sum == Catch::Approx(1.0).margin(1e-9));
  CHECK((recon - x).norm() <= 1e-9);
}

TEST_CASE("classic caratheodory trivial and error cases", "[caratheodory]") {
  std::vector<Vec> pts = {vec2(0, 0), vec2(1, 0), vec2(0, 1)};
  SECTION("query equal to an input point") {
    const auto sel = classic_caratheodory(pts, vec2(1, 0));
    REQUIRE(sel.size() == 1);
    CHECK(sel.indices[0] == 1);
    CHECK(sel.weights[0] == 1.0);
  }
  SECTION("query outside the hull") {
    CHECK_THROWS_AS(classic_caratheodory(pts, vec2(1, 1)), SelectError);
  }
}

TEST_CASE("steinitz selection keeps the query interior", "[caratheodory]") {
  SECTION("identity when already small") {
    std::vector<Vec> pts = {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)};
    const auto idx = steinitz_select(pts, vec2(0, 0));
    REQUIRE(idx.size() == 4);
  }
  SECTION("drops the redundant fifth point") {
    std::vector<Vec> pts = {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1), vec2(0.5, 0.5)};
    const auto idx = steinitz_select(pts, vec2(0, 0));
    REQUIRE(idx.size() <= 4);
    std::vector<Vec> sub;
    for (int i : idx) sub.push_back(pts[static_cast<std::size_t>(i)]);
    CHECK(numerics::interior_point_check(sub, vec2(0, 0)));
  }
  SECTION("one-dimensional straddle") {
    std::vector<Vec> pts = {vec1(-2), vec1(-1), vec1(3)};
    const auto idx = steinitz_select(pts, vec1(0));
    REQUIRE(idx.size() <= 2);
    std::vector<Vec> sub;
    for (int i : idx) sub.push_back(pts[static_cast<std::size_t>(i)]);
    CHECK(numerics::interior_point_check(sub, vec1(0)));
  }
  SECTION("non-interior query is rejected") {
    std::vector<Vec> pts = {vec2(1, 0), vec2(0, 1)};
    CHECK_THROWS_AS(steinitz_select(pts, vec2(0, 0)), SelectError);
  }
  SECTION("random interior points in dimension 3") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Vec> pts;
      for (int i = 0; i < 12; ++i) pts.push_back(rng.uniform_vec(3, -1.0, 1.0));
      std::vector<double> mix(12);
      double total = 0.0;
      for (double& m : mix) {
        m = 0.2 + rng.uniform();
        total += m;
      }
      Vec q = Vec::Zero(3);
      for (int i = 0; i < 12; ++i) q += mix[static_cast<std::size_t>(i)] / total * pts[static_cast<std::size_t>(i)];
      if (!numerics::interior_point_check(pts, q)) continue;
      const auto idx = steinitz_select(pts, q);
      REQUIRE(static_cast<int>(idx.size()) <= 6);
      std::vector<Vec> sub;
      for (int i : idx) sub.push_back(pts[static_cast<std::size_t>(i)]);
      CHECK(numerics::interior_point_check(sub, q));
    }
  }
}
