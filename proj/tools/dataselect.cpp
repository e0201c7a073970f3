// Experiment harness: one subcommand per verification suite, JSON reports and
// CSV plot data, deterministic under a fixed seed.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dataselect/io.hpp"
#include "dataselect/report.hpp"
#include "dataselect/suites.hpp"

namespace {

using dataselect::report::Suite;

struct CommonFlags {
  int d = 0;
  int n = 0;
  int big_n = 0;
  std::uint64_t seed = 0;
  double eta = 0.05;
  double epsilon = 0.0;
  double c = 0.0;
  double p_exponent = 10.0;
  double tol = 0.0;
  std::string mode = "all";
  std::string out;
  std::string format = "json";
  bool deterministic = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--d", f.d, "dimension override");
  cmd->add_option("--n", f.n, "selection budget override");
  cmd->add_option("--N", f.big_n, "population size override");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--eta", f.eta, "adversarial slack in (0, 1/2)");
  cmd->add_option("--epsilon", f.epsilon, "lift size (0 = certify automatically)");
  cmd->add_option("--c", f.c, "label scale of the n = d lower-bound dataset");
  cmd->add_option("--P", f.p_exponent, "exponent of the simplex losses");
  cmd->add_option("--tol", f.tol, "override tol_exact");
  cmd->add_option("--mode", f.mode, "suite-specific mode selector");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
  cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--deterministic", f.deterministic, "omit wall-clock fields from the report");
}

dataselect::Tolerances tolerances_from(const CommonFlags& f) {
  dataselect::Tolerances tol;
  if (f.tol > 0.0) tol.exact = f.tol;
  tol.validate();
  return tol;
}

Suite run_mean(const CommonFlags& f) {
  dataselect::suites::MeanParams p;
  if (f.n > 0) p.n_max = f.n;
  if (f.big_n > 0) p.random_max_points = f.big_n;
  p.seed = f.seed;
  p.tol = tolerances_from(f);
  return dataselect::suites::mean_suite(p);
}

Suite run_mean_highdim(const CommonFlags& f) {
  dataselect::suites::HighDimParams p;
  if (f.d > 0) p.dims = {f.d};
  if (f.n > 0) p.budgets = {f.n};
  p.seed = f.seed;
  p.tol = tolerances_from(f);
  return dataselect::suites::mean_highdim_suite(p);
}

Suite run_classify(const CommonFlags& f) {
  dataselect::suites::ClassifyParams p;
  if (f.big_n > 0) p.adversarial_points = f.big_n;
  if (f.n > 0) p.lower_budget = f.n;
  p.eta = f.eta;
  p.epsilon = f.epsilon;
  p.seed = f.seed;
  p.tol = tolerances_from(f);
  return dataselect::suites::classify_suite(p);
}

Suite run_taxonomy(const CommonFlags& f) {
  dataselect::suites::TaxonomyParams p;
  if (f.n > 0) p.budgets = {f.n};
  p.seed = f.seed;
  p.tol = tolerances_from(f);
  return dataselect::suites::taxonomy_suite(p);
}

Suite run_regression(const CommonFlags& f) {
  dataselect::suites::RegressionParams p;
  p.mode = f.mode;
  if (f.d > 0) p.volume_d = f.d;
  if (f.big_n > 0) p.volume_points = f.big_n;
  if (f.c > 0.0) p.c2 = f.c;
  p.eta = f.eta;
  if (f.epsilon > 0.0) p.epsilon = f.epsilon;
  p.seed = f.seed;
  p.tol = tolerances_from(f);
  return dataselect::suites::regression_suite(p);
}

Suite run_sco(const CommonFlags& f) {
  dataselect::suites::ScoParams p;
  p.mode = f.mode;
  if (f.d > 0) p.simplex_d = f.d;
  p.simplex_p = f.p_exponent;
  p.seed = f.seed;
  p.tol = tolerances_from(f);
  return dataselect::suites::sco_suite(p);
}

template <typename Fn>
Suite timed(Fn&& fn, bool deterministic) {
  const auto start = std::chrono::steady_clock::now();
  Suite s = fn();
  const auto stop = std::chrono::steady_clock::now();
  s.elapsed_seconds =
      deterministic ? -1.0 : std::chrono::duration<double>(stop - start).count();
  return s;
}

void emit(const std::vector<Suite>& suites, const CommonFlags& f) {
  std::string payload;
  if (f.format == "csv") {
    payload = dataselect::report::plot_csv(suites);
  } else {
    payload = dataselect::report::to_json(suites).dump(2);
    payload += "\n";
  }
  if (f.out.empty()) {
    std::fputs(payload.c_str(), stdout);
  } else {
    dataselect::io::write_file(f.out, payload);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"data selection verification harness"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<std::pair<std::string, Suite (*)(const CommonFlags&)>> table = {
      {"mean", run_mean},         {"mean-highdim", run_mean_highdim},
      {"classify", run_classify}, {"taxonomy", run_taxonomy},
      {"regression", run_regression}, {"sco", run_sco},
  };

  for (auto& [name, fn] : table) {
    auto* cmd = app.add_subcommand(name, name + " verification suite");
    add_common(cmd, flags);
    cmd->callback([&flags, fn = fn, &app]() {
      (void)app;
      std::vector<Suite> suites{timed([&] { return fn(flags); }, flags.deterministic)};
      emit(suites, flags);
      bool ok = true;
      for (const auto& s : suites) ok = ok && s.pass();
      std::exit(ok ? 0 : 1);
    });
  }
  {
    auto* cmd = app.add_subcommand("all", "run every suite");
    add_common(cmd, flags);
    cmd->callback([&flags, &table]() {
      std::vector<Suite> suites;
      for (auto& [name, fn] : table)
        suites.push_back(timed([&] { return fn(flags); }, flags.deterministic));
      emit(suites, flags);
      bool ok = true;
      for (const auto& s : suites) ok = ok && s.pass();
      std::exit(ok ? 0 : 1);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // invalid flags -> exit 2
  } catch (const dataselect::SelectError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
