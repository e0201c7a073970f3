#include <catch2/catch_amalgamated.hpp>

#include "dataselect/sco.hpp"

using namespace dataselect;
namespace sc = dataselect::sco;
using caratheodory::DomainK;

TEST_CASE("strictly convex selection recovers the ridge optimum", "[sco]") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3;
    const int n = 20;
    std::vector<Vec> xs;
    std::vector<double> ys;
    for (int i = 0; i < n; ++i) {
      xs.push_back(rng.gaussian_vec(d));
      ys.push_back(rng.gaussian());
    }
    auto fam = caratheodory::ridge_family(xs, ys, 0.1);
    const auto k = DomainK::all();
    std::vector<double> uniform(n, 1.0 / n);
    const Vec full = fam.weighted_minimizer(uniform, k);

    const auto sel = sc::select_strictly_convex(fam, k);
    REQUIRE(static_cast<int>(sel.size()) <= d + 1);
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j < sel.indices.size(); ++j)
      w[static_cast<std::size_t>(sel.indices[j])] = sel.weights[j];
    const Vec sub = fam.weighted_minimizer(w, k);
    CHECK((sub - full).norm() <= 1e-6);

    // strict-convexity certificate: axis perturbations strictly increase the
    // selected weighted loss
    auto weighted_eval = [&](const Vec& x) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        if (w[static_cast<std::size_t>(i)] != 0.0) v += w[static_cast<std::size_t>(i)] * fam.eval(i, x);
      return v;
    };
    const double base = weighted_eval(sub);
    for (int axis = 0; axis < d; ++axis) {
      for (double sign : {-1.0, 1.0}) {
        Vec p = sub;
        p[axis] += sign * 1e-5;
        CHECK(weighted_eval(p) > base);
      }
    }
  }
}

TEST_CASE("small families are returned unchanged", "[sco]") {
  Rng rng(5);
  std::vector<Vec> xs;
  std::vector<double> ys;
  for (int i = 0; i < 3; ++i) {
    xs.push_back(rng.gaussian_vec(3));
    ys.push_back(rng.gaussian());
  }
  auto fam = caratheodory::ridge_family(xs, ys, 0.1);
  const auto sel = sc::select_strictly_convex(fam, DomainK::all());
  CHECK(sel.size() == 3);
}

TEST_CASE("quadratic-point family recovers the weighted mean", "[sco]") {
  Rng rng(7);
  std::vector<Vec> zs;
  for (int i = 0; i < 9; ++i) zs.push_back(rng.uniform_vec(2, -1.0, 1.0));
  auto fam = caratheodory::quadratic_point_family(zs);
  const auto sel = sc::select_strictly_convex(fam, DomainK::all());
  REQUIRE(sel.size() <= 3);
  Vec mean = Vec::Zero(2);
  for (const auto& z : zs) mean += z / 9.0;
  std::vector<double> w(9, 0.0);
  for (std::size_t j = 0; j < sel.indices.size(); ++j)
    w[static_cast<std::size_t>(sel.indices[j])] = sel.weights[j];
  const Vec sub = fam.weighted_minimizer(w, DomainK::all());
  CHECK((sub - mean).norm() <= 1e-6);
}

TEST_CASE("hexagon witness separates pair and full minimizer sets", "[sco]") {
  const auto w = sc::hexagon_witness();
  REQUIRE(w.pass);
  CHECK(w.pair_loss == 0.0);
  CHECK(w.full_loss > 0.0);
  CHECK(w.hexagon_interior_zero);

  // the hexagon's vertices still lie in every pair's minimizer set
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    Mat m(2, 2);
    m.row(0) = w.directions[static_cast<std::size_t>(i)].transpose();
    m.row(1) = w.directions[static_cast<std::size_t>(j)].transpose();
    Vec rhs(2);
    rhs << 1.0, 1.0;
    const Vec vertex = m.fullPivLu().solve(rhs);  // a hexagon vertex
    const double pair = 0.5 * (sc::slab_loss(w.directions[static_cast<std::size_t>(i)], vertex) +
                               sc::slab_loss(w.directions[static_cast<std::size_t>(j)], vertex));
    CHECK(pair == 0.0);
  }
}

TEST_CASE("regular simplex geometry", "[sco]") {
  for (int d : {1, 2, 3, 5}) {
    const auto verts = sc::regular_simplex_vertices(d);
    REQUIRE(verts.size() == static_cast<std::size_t>(d + 1));
    // pairwise equidistant
    const double ref = (verts[0] - verts[1]).norm();
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        CHECK((verts[i] - verts[j]).norm() == Catch::Approx(ref).margin(1e-9));
    // unit vertex-to-opposite-facet distance: the facet centroid realizes it
    Vec facet_centroid = Vec::Zero(d);
    for (std::size_t i = 1; i < verts.size(); ++i) facet_centroid += verts[i];
    facet_centroid /= static_cast<double>(d);
    CHECK((verts[0] - facet_centroid).norm() == Catch::Approx(1.0).margin(1e-9));
    // centroid sits at distance d/(d+1) from every vertex
    Vec centroid = Vec::Zero(d);
    for (const auto& v : verts) centroid += v / (d + 1.0);
    CHECK((verts[0] - centroid).norm() ==
          Catch::Approx(static_cast<double>(d) / (d + 1)).margin(1e-9));
  }
}

TEST_CASE("simplex selection ratio grows with the exponent", "[sco]") {
  const auto r = sc::simplex_ratio(2, 10.0);
  CHECK(r.full_loss == Catch::Approx(std::pow(2.0 / 3.0, 10.0)).margin(1e-8));
  CHECK(r.analytic_bound == Catch::Approx(19683.0 / 1024.0).margin(1e-9));
  CHECK(r.ratio >= r.analytic_bound - 1e-6);
  CHECK(r.pass);

  const auto r2 = sc::simplex_ratio(2, 14.0);
  CHECK(r2.ratio > r.ratio);  // arbitrarily large as P grows

  const auto r1 = sc::simplex_ratio(1, 6.0);
  CHECK(r1.ratio >= r1.analytic_bound - 1e-6);
}

TEST_CASE("parameter validation", "[sco]") {
  CHECK_THROWS_AS(sc::simplex_ratio(2, 1.5), SelectError);
  CHECK_THROWS_AS(sc::regular_simplex_vertices(0), SelectError);
}
