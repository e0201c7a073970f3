#include <catch2/catch_amalgamated.hpp>

#include "dataselect/io.hpp"
#include "dataselect/report.hpp"
#include "dataselect/suites.hpp"

using namespace dataselect;

TEST_CASE("dataset CSV round trip preserves values and kind", "[io]") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset data;
    const int d = 1 + static_cast<int>(rng.below(4));
    const int n = 1 + static_cast<int>(rng.below(8));
    const int kind_pick = static_cast<int>(rng.below(3));
    data.kind = kind_pick == 0   ? DatasetKind::Unlabeled
                : kind_pick == 1 ? DatasetKind::Regression
                                 : DatasetKind::Classification;
    for (int i = 0; i < n; ++i) {
      data.xs.push_back(rng.uniform_vec(d, -5.0, 5.0));
      if (data.kind == DatasetKind::Regression)
        data.ys.push_back(rng.gaussian() + 2.0);  // keep labels off +-1
      else if (data.kind == DatasetKind::Classification)
        data.ys.push_back(rng.below(2) == 0 ? -1.0 : 1.0);
    }
    const Dataset back = io::dataset_from_csv(io::dataset_to_csv(data));
    REQUIRE(back.size() == data.size());
    REQUIRE(back.kind == data.kind);
    for (std::size_t i = 0; i < data.size(); ++i) {
      CHECK(back.xs[i] == data.xs[i]);  // %.17g is lossless for doubles
      if (data.kind != DatasetKind::Unlabeled) CHECK(back.ys[i] == data.ys[i]);
    }
  }
}

TEST_CASE("dataset JSON round trip", "[io]") {
  Dataset data;
  data.kind = DatasetKind::Regression;
  Rng rng(2);
  for (int i = 0; i < 5; ++i) {
    data.xs.push_back(rng.uniform_vec(3, -1.0, 1.0));
    data.ys.push_back(rng.gaussian());
  }
  const Dataset back = io::dataset_from_json(io::dataset_to_json(data));
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back.xs[i] == data.xs[i]);
    CHECK(back.ys[i] == data.ys[i]);
  }
}

TEST_CASE("malformed inputs are rejected", "[io]") {
  CHECK_THROWS_AS(io::dataset_from_csv(""), SelectError);
  CHECK_THROWS_AS(io::dataset_from_csv("x1,y\n1.0\n"), SelectError);
  CHECK_THROWS_AS(io::dataset_from_json(io::json::parse(R"({"dim":2,"kind":"bogus","points":[]})")),
                  SelectError);
}

TEST_CASE("finite class JSON round trip", "[io]") {
  taxonomy::FiniteClass h = taxonomy::threshold_class(5);
  const auto j = io::finite_class_to_json(h);
  const auto back = io::finite_class_from_json(j);
  CHECK(back.labels == h.labels);
  REQUIRE(back.domain_names.size() == 5);
}

TEST_CASE("suite reports serialize with the fixed schema", "[io]") {
  report::Suite s;
  s.suite = "demo";
  s.params["seed"] = 7;
  s.add("alpha", 1.5, 2.0, true);
  s.add("beta", 3.0, 2.5, false, "heuristic", "why");
  const auto j = report::to_json(s);
  CHECK(j["suite"] == "demo");
  CHECK(j["results"].size() == 2);
  CHECK(j["results"][0]["check"] == "alpha");
  CHECK(j["results"][1]["certificate"] == "heuristic");
  CHECK(j["pass"] == false);

  s.plot({{"n", 1.0}, {"ratio", 2.0}});
  s.plot({{"n", 2.0}, {"ratio", 1.5}});
  const std::string csv = report::plot_csv(s);
  CHECK(csv.find("n,ratio") != std::string::npos);
}

TEST_CASE("suite reports are byte-identical across runs", "[io]") {
  suites::MeanParams p;
  p.n_max = 3;
  p.random_datasets = 50;
  const auto a = report::to_json(suites::mean_suite(p)).dump(2);
  const auto b = report::to_json(suites::mean_suite(p)).dump(2);
  REQUIRE(a == b);
}
