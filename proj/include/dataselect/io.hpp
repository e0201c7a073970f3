#pragma once

// Dataset and hypothesis-class file formats.
// CSV:  header "x1,...,xd[,y]", one point per row.
// JSON: {"dim": d, "kind": "...", "points": [{"x": [...], "y": ...}, ...]}
// Class JSON: {"domain": [names...], "hypotheses": [[+-1,...], ...]}

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dataselect/taxonomy.hpp"
#include "dataselect/types.hpp"

namespace dataselect::io {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string dataset_to_csv(const Dataset& data) {
  data.validate();
  const int d = data.dim();
  std::ostringstream out;
  for (int j = 1; j <= d; ++j) out << (j > 1 ? "," : "") << "x" << j;
  if (data.kind != DatasetKind::Unlabeled) out << ",y";
  out << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int j = 0; j < d; ++j) out << (j > 0 ? "," : "") << format_double(data.xs[i][j]);
    if (data.kind != DatasetKind::Unlabeled) out << "," << format_double(data.ys[i]);
    out << "\n";
  }
  return out.str();
}

// Kind inference for CSV: no y column means unlabeled; otherwise labels that
// are all +-1 read as classification, anything else as regression.
inline Dataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw SelectError(ErrorCode::EmptyInput, "empty CSV");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();

  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header.empty()) throw SelectError(ErrorCode::InvalidArgument, "missing CSV header");
  const bool labeled = header.back() == "y";
  const int d = static_cast<int>(header.size()) - (labeled ? 1 : 0);
  if (d < 1) throw SelectError(ErrorCode::InvalidArgument, "no feature columns");

  Dataset data;
  bool all_pm1 = true;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    Vec x(d);
    for (int j = 0; j < d; ++j) {
      if (!std::getline(ls, cell, ','))
        throw SelectError(ErrorCode::InvalidArgument, "short CSV row");
      x[j] = std::stod(cell);
    }
    data.xs.push_back(x);
    if (labeled) {
      if (!std::getline(ls, cell, ',')) throw SelectError(ErrorCode::InvalidArgument, "missing label");
      const double y = std::stod(cell);
      if (y != 1.0 && y != -1.0) all_pm1 = false;
      data.ys.push_back(y);
    }
  }
  data.kind = !labeled ? DatasetKind::Unlabeled
                       : (all_pm1 ? DatasetKind::Classification : DatasetKind::Regression);
  data.validate();
  return data;
}

inline json dataset_to_json(const Dataset& data) {
  data.validate();
  json out;
  out["dim"] = data.dim();
  out["kind"] = to_string(data.kind);
  json points = json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    json p;
    p["x"] = std::vector<double>(data.xs[i].data(), data.xs[i].data() + data.xs[i].size());
    if (data.kind != DatasetKind::Unlabeled) p["y"] = data.ys[i];
    points.push_back(std::move(p));
  }
  out["points"] = std::move(points);
  return out;
}

inline Dataset dataset_from_json(const json& j) {
  Dataset data;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "unlabeled")
    data.kind = DatasetKind::Unlabeled;
  else if (kind == "regression")
    data.kind = DatasetKind::Regression;
  else if (kind == "classification")
    data.kind = DatasetKind::Classification;
  else
    throw SelectError(ErrorCode::InvalidArgument, "unknown dataset kind: " + kind);
  const int d = j.at("dim").get<int>();
  for (const auto& p : j.at("points")) {
    const auto coords = p.at("x").get<std::vector<double>>();
    if (static_cast<int>(coords.size()) != d)
      throw SelectError(ErrorCode::DimensionMismatch, "point dimension mismatch");
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = coords[static_cast<std::size_t>(k)];
    data.xs.push_back(x);
    if (data.kind != DatasetKind::Unlabeled) data.ys.push_back(p.at("y").get<double>());
  }
  data.validate();
  return data;
}

inline json finite_class_to_json(const taxonomy::FiniteClass& h) {
  h.validate();
  json out;
  if (!h.domain_names.empty()) {
    out["domain"] = h.domain_names;
  } else {
    std::vector<std::string> names;
    for (int i = 0; i < h.domain_size(); ++i) names.push_back("x" + std::to_string(i));
    out["domain"] = names;
  }
  out["hypotheses"] = h.labels;
  return out;
}

inline taxonomy::FiniteClass finite_class_from_json(const json& j) {
  taxonomy::FiniteClass h;
  h.domain_names = j.at("domain").get<std::vector<std::string>>();
  h.labels = j.at("hypotheses").get<std::vector<std::vector<int>>>();
  h.validate();
  return h;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SelectError(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SelectError(ErrorCode::InvalidArgument, "cannot write " + path);
  out << content;
}

inline Dataset load_dataset(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return dataset_from_json(json::parse(text));
  return dataset_from_csv(text);
}

}  // namespace dataselect::io
