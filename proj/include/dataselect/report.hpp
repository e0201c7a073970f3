#pragma once

// Machine-readable verification reports: per-check records, per-suite JSON in
// a fixed field order, and CSV plot tables.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dataselect/io.hpp"
#include "dataselect/types.hpp"

namespace dataselect::report {

using json = nlohmann::ordered_json;

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string certificate = "exact";  // "exact" or "heuristic"
  std::string note;
};

struct PlotRow {
  std::map<std::string, double> cells;
};

struct Suite {
  std::string suite;
  json params = json::object();
  std::vector<Check> checks;
  std::vector<std::string> plot_columns;
  std::vector<PlotRow> plot_rows;
  double elapsed_seconds = -1.0;  // negative = omitted (deterministic mode)

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void add(Check c) { checks.push_back(std::move(c)); }

  void add(const std::string& name, double value, double bound, bool pass,
           const std::string& certificate = "exact", const std::string& note = "") {
    checks.push_back(Check{name, value, bound, pass, certificate, note});
  }

  void plot(const std::map<std::string, double>& cells) {
    for (const auto& [k, v] : cells) {
      (void)v;
      bool known = false;
      for (const auto& c : plot_columns)
        if (c == k) known = true;
      if (!known) plot_columns.push_back(k);
    }
    plot_rows.push_back(PlotRow{cells});
  }
};

inline json to_json(const Suite& s) {
  json out;
  out["suite"] = s.suite;
  out["params"] = s.params;
  json results = json::array();
  for (const auto& c : s.checks) {
    json r;
    r["check"] = c.name;
    r["value"] = c.value;
    r["bound"] = c.bound;
    r["pass"] = c.pass;
    r["certificate"] = c.certificate;
    if (!c.note.empty()) r["note"] = c.note;
    results.push_back(std::move(r));
  }
  out["results"] = std::move(results);
  out["pass"] = s.pass();
  if (s.elapsed_seconds >= 0.0) out["elapsed_seconds"] = s.elapsed_seconds;
  return out;
}

inline json to_json(const std::vector<Suite>& suites) {
  json out;
  json list = json::array();
  bool all = true;
  for (const auto& s : suites) {
    list.push_back(to_json(s));
    all = all && s.pass();
  }
  out["suites"] = std::move(list);
  out["pass"] = all;
  return out;
}

inline std::string plot_csv(const Suite& s) {
  std::string out;
  for (std::size_t i = 0; i < s.plot_columns.size(); ++i)
    out += (i ? "," : "") + s.plot_columns[i];
  out += "\n";
  for (const auto& row : s.plot_rows) {
    for (std::size_t i = 0; i < s.plot_columns.size(); ++i) {
      if (i) out += ",";
      auto it = row.cells.find(s.plot_columns[i]);
      out += it == row.cells.end() ? "" : io::format_double(it->second);
    }
    out += "\n";
  }
  return out;
}

inline std::string plot_csv(const std::vector<Suite>& suites) {
  std::string out;
  for (const auto& s : suites) {
    if (s.plot_rows.empty()) continue;
    out += "# suite: " + s.suite + "\n";
    out += plot_csv(s);
  }
  return out;
}

}  // namespace dataselect::report
