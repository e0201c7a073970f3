#include <catch2/catch_amalgamated.hpp>

#include "dataselect/linalg.hpp"
#include "dataselect/types.hpp"

using namespace dataselect;
using numerics::interior_point_check;
using numerics::min_norm_least_squares;
using numerics::null_vector;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

}  // namespace

TEST_CASE("min-norm least squares on a single feature", "[numerics]") {
  const Vec w = min_norm_least_squares({vec2(1, 0)}, {1.0}, {1.0});
  REQUIRE(w.size() == 2);
  CHECK(w[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(w[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("min-norm least squares on the paired-basis dataset", "[numerics]") {
  // {(e_i, 2)} u {(-e_i, 1)} in d = 2 with uniform weights
  std::vector<Vec> xs = {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)};
  std::vector<double> ys = {2.0, 2.0, 1.0, 1.0};
  const Vec w = min_norm_least_squares(xs, ys, {1, 1, 1, 1});
  CHECK(w[0] == Catch::Approx(0.5).margin(1e-12));
  CHECK(w[1] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("min-norm least squares with repeated rows", "[numerics]") {
  // 1-d calculus oracle: minimize w^2 + (w-2)^2 at w = 1
  const Vec w = min_norm_least_squares({vec2(1, 0), vec2(1, 0)}, {0.0, 2.0}, {1.0, 1.0});
  CHECK(w[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(w[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("min-norm solution optimality and norm minimality", "[numerics]") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3;
    const int n = 2;  // rank-deficient on purpose
    std::vector<Vec> xs;
    std::vector<double> ys, weights;
    for (int i = 0; i < n; ++i) {
      xs.push_back(rng.gaussian_vec(d));
      ys.push_back(rng.gaussian());
      weights.push_back(0.5 + rng.uniform());
    }
    const Vec w = min_norm_least_squares(xs, ys, weights);
    auto loss = [&](const Vec& v) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double r = v.dot(xs[i]) - ys[i];
        s += weights[static_cast<std::size_t>(i)] * r * r;
      }
      return s;
    };
    const double base = loss(w);
    // perturbations within the feature span never improve the loss
    for (int k = 0; k < 1000; ++k) {
      Vec delta = rng.gaussian() * xs[0] + rng.gaussian() * xs[1];
      delta *= 1e-3;
      REQUIRE(loss(w + delta) >= base - 1e-9);
    }
    // minimizers built by adding span-orthogonal noise have larger norm
    Vec ortho = rng.gaussian_vec(d);
    for (const auto& x : xs) ortho -= ortho.dot(x) / x.squaredNorm() * x;
    // re-orthogonalize once for numerical cleanliness
    for (const auto& x : xs) ortho -= ortho.dot(x) / x.squaredNorm() * x;
    if (ortho.norm() > 1e-8) {
      const Vec other = w + ortho;
      REQUIRE(loss(other) == Catch::Approx(base).margin(1e-9));
      REQUIRE(other.norm() >= w.norm());
    }
  }
}

TEST_CASE("null vector respects both constraints", "[numerics]") {
  SECTION("n = d+1 independent vectors may yield none") {
    auto beta = null_vector({vec2(1, 0), vec2(-1, 0), vec2(0, 1)});
    CHECK_FALSE(beta.has_value());
  }
  SECTION("four vectors in the plane always admit a dependence") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Vec> vs;
      for (int i = 0; i < 4; ++i) vs.push_back(rng.uniform_vec(2, -1.0, 1.0));
      auto beta = null_vector(vs);
      REQUIRE(beta.has_value());
      Vec combo = Vec::Zero(2);
      double sum = 0.0, maxabs = 0.0;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        combo += (*beta)[i] * vs[i];
        sum += (*beta)[i];
        maxabs = std::max(maxabs, std::abs((*beta)[i]));
      }
      CHECK(combo.norm() <= 1e-12 * 4);
      CHECK(std::abs(sum) <= 1e-12 * 4);
      CHECK(maxabs == Catch::Approx(1.0));
    }
  }
  SECTION("repeated vectors give the first circuit") {
    const Vec v = vec2(0.3, -0.7);
    auto beta = null_vector({v, v, v, v});
    REQUIRE(beta.has_value());
    CHECK((*beta)[0] == Catch::Approx(1.0));
    CHECK((*beta)[1] == Catch::Approx(-1.0));
    CHECK((*beta)[2] == 0.0);
    CHECK((*beta)[3] == 0.0);
  }
}

TEST_CASE("interior point check on the symmetric cross", "[numerics]") {
  std::vector<Vec> cross = {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)};
  CHECK(interior_point_check(cross, vec2(0, 0)));
  CHECK_FALSE(interior_point_check({vec2(1, 0), vec2(0, 1)}, vec2(0, 0)));
}

TEST_CASE("interior point check rejects boundary points", "[numerics]") {
  // 0 lies on the segment between (1,0) and (-1,0); the span test passes but
  // no representation keeps the third weight strictly positive
  std::vector<Vec> pts = {vec2(1, 0), vec2(-1, 0), vec2(0, 1)};
  CHECK_FALSE(interior_point_check(pts, vec2(0, 0)));
}

TEST_CASE("interior certificate reproduces the query", "[numerics]") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vec> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(rng.uniform_vec(3, -1.0, 1.0));
    // query = strictly positive mixture => interior candidate
    std::vector<double> mix(7);
    double total = 0.0;
    for (double& m : mix) {
      m = 0.1 + rng.uniform();
      total += m;
    }
    Vec q = Vec::Zero(3);
    for (int i = 0; i < 7; ++i) q += mix[static_cast<std::size_t>(i)] / total * pts[static_cast<std::size_t>(i)];
    auto cert = numerics::interior_certificate(pts, q);
    REQUIRE(cert.has_value());
    Vec recon = Vec::Zero(3);
    double sum = 0.0;
    for (int i = 0; i < 7; ++i) {
      REQUIRE((*cert)[static_cast<std::size_t>(i)] >= 0.0);
      recon += (*cert)[static_cast<std::size_t>(i)] * pts[static_cast<std::size_t>(i)];
      sum += (*cert)[static_cast<std::size_t>(i)];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-8);
    CHECK((recon - q).norm() <= 1e-7);
  }
}

TEST_CASE("dimension mismatches are rejected", "[numerics]") {
  CHECK_THROWS_AS(min_norm_least_squares({vec2(1, 0)}, {1.0, 2.0}, {1.0}), SelectError);
  CHECK_THROWS_AS(interior_point_check({vec2(1, 0)}, vec1(0.0)), SelectError);
  CHECK_THROWS_AS(min_norm_least_squares({}, {}, {}), SelectError);
}

TEST_CASE("operations are deterministic run to run", "[numerics]") {
  Rng rng(99);
  std::vector<Vec> xs;
  std::vector<double> ys, ws;
  for (int i = 0; i < 6; ++i) {
    xs.push_back(rng.gaussian_vec(3));
    ys.push_back(rng.gaussian());
    ws.push_back(1.0);
  }
  const Vec a = min_norm_least_squares(xs, ys, ws);
  const Vec b = min_norm_least_squares(xs, ys, ws);
  REQUIRE(a == b);  // bitwise identical
}
