/**
 * @file io.hpp
 * @brief Config JSON documents and the shared json / csv / table output layer.
 */
#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"
#include "sweep.hpp"

namespace gravwitness {
namespace io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config documents
// ---------------------------------------------------------------------------

/// Flat object keyed by ExperimentConfig field names; unknown keys rejected, dx may be null.
inline ExperimentConfig configFromJson(const json &doc) {
  if (!doc.is_object()) throw std::invalid_argument("config document must be a JSON object");
  ExperimentConfig cfg;
  for (const auto &[key, value] : doc.items()) {
    if (!isConfigField(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    if (key == "dx" && value.is_null()) {
      cfg.dx.reset();
      continue;
    }
    if (!value.is_number()) throw std::invalid_argument("config key '" + key + "' must be a number");
    setConfigField(cfg, key, value.get<double>());
  }
  return cfg;
}

inline json configToJson(const ExperimentConfig &cfg) {
  json doc = json::object();
  for (auto name : configFieldNames) {
    auto v = getConfigField(cfg, name);
    if (v)
      doc[std::string(name)] = *v;
    else
      doc[std::string(name)] = nullptr;
  }
  return doc;
}

inline ExperimentConfig loadConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return configFromJson(doc);
}

/// Parses "key=value" and applies it. Throws std::invalid_argument.
inline void applyOverride(ExperimentConfig &cfg, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override must be key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  if (!isConfigField(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  if (key == "dx" && (text == "null" || text.empty())) {
    cfg.dx.reset();
    return;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("override value for '" + key + "' is not a number");
  setConfigField(cfg, key, v);
}

// ---------------------------------------------------------------------------
// Output layer
// ---------------------------------------------------------------------------

using Value = std::variant<double, long long, bool, std::string>;

struct Record {
  std::vector<std::pair<std::string, Value>> fields;

  Record &add(std::string key, Value v) {
    fields.emplace_back(std::move(key), std::move(v));
    return *this;
  }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

struct Section {
  std::string name;
  std::variant<Record, Table> body;
};

struct Report {
  std::vector<Section> sections;

  Report &add(std::string name, Record r) {
    sections.push_back({std::move(name), std::move(r)});
    return *this;
  }
  Report &add(std::string name, Table t) {
    sections.push_back({std::move(name), std::move(t)});
    return *this;
  }
};

enum class Format { Json, Csv, Table };

inline Format parseFormat(const std::string &s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "table") return Format::Table;
  throw std::invalid_argument("unknown format '" + s + "'");
}

inline std::string valueText(const Value &v) {
  return std::visit(
      [](const auto &x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>)
          return sweep::formatNumber(x);
        else if constexpr (std::is_same_v<T, long long>)
          return std::to_string(x);
        else if constexpr (std::is_same_v<T, bool>)
          return x ? "true" : "false";
        else
          return x;
      },
      v);
}

inline json valueJson(const Value &v) {
  return std::visit([](const auto &x) -> json { return json(x); }, v);
}

inline json recordJson(const Record &r) {
  json o = json::object();
  for (const auto &[k, v] : r.fields) o[k] = valueJson(v);
  return o;
}

inline json tableJson(const Table &t) {
  json a = json::array();
  for (const auto &row : t.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = valueJson(row[i]);
    a.push_back(std::move(o));
  }
  return a;
}

inline std::string renderJson(const Report &rep) {
  json doc;
  if (rep.sections.size() == 1 && rep.sections[0].name.empty()) {
    const auto &body = rep.sections[0].body;
    doc = std::holds_alternative<Record>(body) ? recordJson(std::get<Record>(body)) : tableJson(std::get<Table>(body));
  } else {
    doc = json::object();
    for (const auto &s : rep.sections)
      doc[s.name] = std::holds_alternative<Record>(s.body) ? recordJson(std::get<Record>(s.body))
                                                           : tableJson(std::get<Table>(s.body));
  }
  return doc.dump(2) + "\n";
}

inline std::string renderCsv(const Report &rep) {
  std::string out;
  bool first = true;
  for (const auto &s : rep.sections) {
    if (!first) out += "\n";
    first = false;
    if (!s.name.empty() && rep.sections.size() > 1) out += "# " + s.name + "\n";
    if (const auto *r = std::get_if<Record>(&s.body)) {
      out += "key,value\n";
      for (const auto &[k, v] : r->fields) out += sweep::csvField(k) + "," + sweep::csvField(valueText(v)) + "\n";
    } else {
      const auto &t = std::get<Table>(s.body);
      for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + sweep::csvField(t.columns[i]);
      out += "\n";
      for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + sweep::csvField(valueText(row[i]));
        out += "\n";
      }
    }
  }
  return out;
}

inline std::string padRight(const std::string &s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

inline std::string renderTable(const Report &rep) {
  std::string out;
  bool first = true;
  for (const auto &s : rep.sections) {
    if (!first) out += "\n";
    first = false;
    if (!s.name.empty()) out += "[" + s.name + "]\n";
    if (const auto *r = std::get_if<Record>(&s.body)) {
      std::size_t w = 0;
      for (const auto &f : r->fields) w = std::max(w, f.first.size());
      for (const auto &[k, v] : r->fields) out += padRight(k, w) + "  " + valueText(v) + "\n";
    } else {
      const auto &t = std::get<Table>(s.body);
      std::vector<std::size_t> w(t.columns.size());
      for (std::size_t i = 0; i < t.columns.size(); ++i) w[i] = t.columns[i].size();
      std::vector<std::vector<std::string>> cells;
      for (const auto &row : t.rows) {
        cells.emplace_back();
        for (std::size_t i = 0; i < row.size(); ++i) {
          cells.back().push_back(valueText(row[i]));
          w[i] = std::max(w[i], cells.back().back().size());
        }
      }
      auto line = [&](const std::vector<std::string> &c) {
        std::string l;
        for (std::size_t i = 0; i < c.size(); ++i) l += (i ? "  " : "") + (i + 1 < c.size() ? padRight(c[i], w[i]) : c[i]);
        return l + "\n";
      };
      out += line(t.columns);
      for (const auto &c : cells) out += line(c);
    }
  }
  return out;
}

inline std::string render(const Report &rep, Format f) {
  switch (f) {
  case Format::Json: return renderJson(rep);
  case Format::Csv: return renderCsv(rep);
  case Format::Table: return renderTable(rep);
  }
  return {};
}

/// Sweep rows as a table with the fixed sweep column layout.
inline Table sweepTable(const SweepResult &r) {
  Table t;
  t.columns = r.axisNames;
  for (const char *c : {"dPhiLR", "dPhiRL", "objective", "cpRatio", "tauColl", "feasible", "reason"}) t.columns.push_back(c);
  for (const auto &row : r.rows) {
    std::vector<Value> cells;
    for (double v : row.values) cells.emplace_back(v);
    cells.emplace_back(row.dPhiLR);
    cells.emplace_back(row.dPhiRL);
    cells.emplace_back(row.objective);
    cells.emplace_back(row.cpRatio);
    cells.emplace_back(row.tauColl);
    cells.emplace_back(row.feasible);
    cells.emplace_back(row.reason);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

} // namespace io
} // namespace gravwitness
