#include <catch2/catch_amalgamated.hpp>

#include "dataselect/taxonomy.hpp"

using namespace dataselect;
namespace tx = dataselect::taxonomy;

TEST_CASE("vc dimension of canonical classes", "[taxonomy]") {
  CHECK(tx::vc_dimension(tx::singleton_class(5)) == 1);
  CHECK(tx::vc_dimension(tx::cube_class(6)) == 6);
  CHECK(tx::vc_dimension(tx::threshold_class(9)) == 1);
  // a single hypothesis shatters nothing
  tx::FiniteClass one;
  one.labels = {{1, -1, 1}};
  CHECK(tx::vc_dimension(one) == 0);
}

TEST_CASE("star number of canonical classes", "[taxonomy]") {
  CHECK(tx::star_number(tx::threshold_class(8)) == 2);
  CHECK(tx::star_number(tx::singleton_class(7)) == 7);
  CHECK(tx::star_number(tx::cube_class(5)) == 5);
  // a single domain point with both labels
  tx::FiniteClass h;
  h.labels = {{1}, {-1}};
  CHECK(tx::star_number(h) == 1);
}

TEST_CASE("duplicate hypothesis rows are rejected", "[taxonomy]") {
  tx::FiniteClass h;
  h.labels = {{1, -1}, {1, -1}};
  CHECK_THROWS_AS(h.validate(), SelectError);
}

TEST_CASE("greedy epsilon nets", "[taxonomy]") {
  SECTION("all singletons force the whole ground set") {
    tx::SetFamily f;
    f.ground_size = 6;
    for (int i = 0; i < 6; ++i) f.sets.push_back(std::uint64_t{1} << i);
    std::vector<double> p(6, 1.0 / 6.0);
    const auto net = tx::epsilon_net_greedy(f, p, 0.1);
    CHECK(net.size() == 6);
    CHECK(tx::is_epsilon_net(f, p, 0.1, net));
  }
  SECTION("eps >= 1 admits the empty net") {
    tx::SetFamily f;
    f.ground_size = 4;
    f.sets.push_back(0b1111);
    std::vector<double> p(4, 0.25);
    CHECK(tx::epsilon_net_greedy(f, p, 1.0).empty());
  }
  SECTION("random families always certify") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
      tx::SetFamily f;
      f.ground_size = 10;
      for (int k = 0; k < 15; ++k) f.sets.push_back(rng.next_u64() & 0x3FF);
      std::vector<double> p(10);
      double total = 0.0;
      for (double& q : p) {
        q = rng.uniform();
        total += q;
      }
      for (double& q : p) q /= total;
      const double eps = 0.05 + 0.3 * rng.uniform();
      const auto net = tx::epsilon_net_greedy(f, p, eps);
      CHECK(tx::is_epsilon_net(f, p, eps, net));
    }
  }
}

TEST_CASE("minimum epsilon nets", "[taxonomy]") {
  SECTION("empty family needs no net") {
    tx::SetFamily f;
    f.ground_size = 5;
    std::vector<double> p(5, 0.2);
    CHECK(tx::epsilon_net_minimum(f, p, 0.1).empty());
  }
  SECTION("one heavy set needs one element") {
    tx::SetFamily f;
    f.ground_size = 5;
    f.sets.push_back(0b10110);
    std::vector<double> p(5, 0.2);
    CHECK(tx::epsilon_net_minimum(f, p, 0.1).size() == 1);
  }
  SECTION("petal family is hit by its center") {
    tx::SetFamily f;
    f.ground_size = 7;
    for (int i = 1; i < 7; ++i) f.sets.push_back(std::uint64_t{1} | (std::uint64_t{1} << i));
    std::vector<double> p(7, 1.0 / 7.0);
    const auto net = tx::epsilon_net_minimum(f, p, 0.01);
    CHECK(net.size() == 1);
    CHECK(net[0] == 0);
    // star number of the petal family is the number of petals
    CHECK(tx::star_number(f) == 6);
    CHECK(static_cast<int>(net.size()) <= tx::star_number(f));
  }
  SECTION("minimum is never larger than greedy") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
      tx::SetFamily f;
      f.ground_size = 9;
      for (int k = 0; k < 12; ++k) f.sets.push_back(rng.next_u64() & 0x1FF);
      std::vector<double> p(9);
      double total = 0.0;
      for (double& q : p) {
        q = rng.uniform();
        total += q;
      }
      for (double& q : p) q /= total;
      const double eps = 0.1 + 0.2 * rng.uniform();
      const auto greedy = tx::epsilon_net_greedy(f, p, eps);
      const auto minimum = tx::epsilon_net_minimum(f, p, eps);
      CHECK(minimum.size() <= greedy.size());
      CHECK(tx::is_epsilon_net(f, p, eps, minimum));
    }
  }
}

TEST_CASE("adversarial regret on the three canonical datasets", "[taxonomy]") {
  SECTION("star-set dataset of the singleton class") {
    for (int n : {1, 2, 3}) {
      const auto h = tx::singleton_class(8);
      tx::DomainDataset d;
      for (int i = 0; i <= n; ++i) {
        d.points.push_back(i);
        d.labels.push_back(-1);
      }
      const double regret = tx::regret_adversarial(h, d, n);
      CHECK(regret == Catch::Approx(1.0 / (n + 1.0)).margin(1e-12));
    }
  }
  SECTION("shattered all-plus dataset of the cube") {
    const int m = 6;
    const auto h = tx::cube_class(m);
    tx::DomainDataset d;
    for (int i = 0; i < m; ++i) {
      d.points.push_back(i);
      d.labels.push_back(1);
    }
    for (int n : {1, 2, 3}) {
      CHECK(tx::regret_adversarial(h, d, n) ==
            Catch::Approx(1.0 - static_cast<double>(n) / m).margin(1e-12));
    }
  }
  SECTION("threshold class reaches zero regret at its star number") {
    const auto h = tx::threshold_class(10);
    tx::DomainDataset d;
    for (int i : {1, 3, 4, 7, 9}) {
      d.points.push_back(i);
      d.labels.push_back(i >= 5 ? 1 : -1);
    }
    CHECK(tx::regret_adversarial(h, d, 2) == Catch::Approx(0.0).margin(1e-12));
    // noisy variant: still zero with budget two
    tx::DomainDataset noisy = d;
    noisy.points.push_back(2);
    noisy.labels.push_back(1);  // off-threshold label
    CHECK(tx::regret_adversarial(h, noisy, 2) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("regret never increases with the budget") {
    Rng rng(33);
    const auto h = tx::threshold_class(8);
    for (int trial = 0; trial < 10; ++trial) {
      tx::DomainDataset d;
      const int npts = 4 + static_cast<int>(rng.below(4));
      for (int i = 0; i < npts; ++i) {
        d.points.push_back(static_cast<int>(rng.below(8)));
        d.labels.push_back(rng.below(2) == 0 ? -1 : 1);
      }
      double prev = 2.0;
      for (int n = 1; n <= 4; ++n) {
        const double r = tx::regret_adversarial(h, d, n);
        CHECK(r <= prev + 1e-12);
        prev = r;
      }
    }
  }
}

TEST_CASE("error families inherit the star-number bound", "[taxonomy]") {
  Rng rng(41);
  for (const auto& h : {tx::threshold_class(8), tx::singleton_class(6)}) {
    const int s_h = tx::star_number(h);
    for (int trial = 0; trial < 10; ++trial) {
      tx::DomainDataset d;
      const int npts = 3 + static_cast<int>(rng.below(5));
      for (int i = 0; i < npts; ++i) {
        d.points.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(h.domain_size()))));
        d.labels.push_back(rng.below(2) == 0 ? -1 : 1);
      }
      const auto dprime = tx::maximal_realizable_subdataset(h, d);
      if (dprime.size() == 0) continue;
      const auto fam = tx::error_family(h, dprime);
      CHECK(tx::star_number(fam) <= s_h);
    }
  }
}

TEST_CASE("net-then-train pipeline reaches the realizable optimum", "[taxonomy]") {
  // select a minimum net of err(H | D'), train any empirical minimizer on it,
  // and the loss on D' stays below epsilon
  Rng rng(47);
  const auto h = tx::threshold_class(10);
  for (int trial = 0; trial < 10; ++trial) {
    tx::DomainDataset d;
    const int npts = 5 + static_cast<int>(rng.below(4));
    const int thr = 1 + static_cast<int>(rng.below(8));
    for (int i = 0; i < npts; ++i) {
      d.points.push_back(static_cast<int>(rng.below(10)));
      d.labels.push_back(d.points.back() >= thr ? 1 : -1);
    }
    const auto dprime = tx::maximal_realizable_subdataset(h, d);
    REQUIRE(dprime.size() == d.size());  // realizable by construction
    const auto fam = tx::error_family(h, dprime);
    std::vector<double> p(dprime.size(), 1.0 / static_cast<double>(dprime.size()));
    const double eps = 0.5 / static_cast<double>(dprime.size());
    const auto net_local = tx::epsilon_net_minimum(fam, p, eps);

    tx::DomainDataset net_data;
    for (int i : net_local) {
      net_data.points.push_back(dprime.points[static_cast<std::size_t>(i)]);
      net_data.labels.push_back(dprime.labels[static_cast<std::size_t>(i)]);
    }
    if (net_data.size() == 0) continue;
    // adversarial empirical minimizer on the net
    double min_emp = std::numeric_limits<double>::infinity();
    for (int r = 0; r < h.num_hypotheses(); ++r)
      min_emp = std::min(min_emp, tx::class_loss(h, net_data, r));
    double worst = 0.0;
    for (int r = 0; r < h.num_hypotheses(); ++r)
      if (tx::class_loss(h, net_data, r) == min_emp)
        worst = std::max(worst, tx::class_loss(h, dprime, r));
    CHECK(worst <= eps);
  }
}

TEST_CASE("regime classification of growing families", "[taxonomy]") {
  std::vector<tx::FiniteClass> cubes, singles, thresholds;
  for (int m : {4, 6, 8}) {
    cubes.push_back(tx::cube_class(m));
    singles.push_back(tx::singleton_class(m));
    thresholds.push_back(tx::threshold_class(m));
  }
  CHECK(tx::classify_regime(cubes).regime == tx::Regime::Trivial);
  CHECK(tx::classify_regime(singles).regime == tx::Regime::Linear);
  CHECK(tx::classify_regime(thresholds).regime == tx::Regime::Zero);
}
