// Copyright 2026 The setvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// File formats used by the command-line tool. Interval files are CSV lines
//   lower,upper[,weight[,alpha[,flags]]]
// with "inf"/"-inf" endpoints, empty optional fields, and a two-letter
// closure token ("cc", "oc", ...) meaning closed/open lower then upper.
// Weights and levels are all-or-none across a file. JSON output is versioned
// ("schema": "setvote/1"); infinite endpoints are encoded as strings since
// JSON has no infinity literal.

#ifndef SETVOTE_IO_HPP
#define SETVOTE_IO_HPP

#include <cctype>
#include <cstdio>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "setvote/interval.hpp"
#include "setvote/merge.hpp"
#include "setvote/profile.hpp"
#include "setvote/simulate.hpp"

namespace setvote {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntervalRecord {
  Interval interval{0.0, 0.0};
  std::optional<double> weight;
  std::optional<double> alpha;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_endpoint(const std::string& field, int line_no) {
  std::string t = trim(field);
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad endpoint '" + field + "'");
  }
}

inline double parse_number(const std::string& field, int line_no, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(trim(field), &used);
    if (used != trim(field).size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + std::string(what) + " '" +
                     field + "'");
  }
}

inline bool parse_closure(char c, int line_no) {
  if (c == 'c') return true;
  if (c == 'o') return false;
  throw ParseError("line " + std::to_string(line_no) + ": closure token must use 'c'/'o'");
}

}  // namespace detail

inline std::vector<IntervalRecord> parse_interval_records(std::istream& in) {
  std::vector<IntervalRecord> records;
  std::string line;
  int line_no = 0;
  bool saw_weight = false, saw_alpha = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!t.empty() && t.back() == ',') fields.push_back("");
    if (fields.size() < 2 || fields.size() > 5)
      throw ParseError("line " + std::to_string(line_no) + ": expected 2-5 comma-separated fields");

    IntervalRecord rec;
    double lo = detail::parse_endpoint(fields[0], line_no);
    double hi = detail::parse_endpoint(fields[1], line_no);
    bool lo_closed = true, hi_closed = true;
    if (fields.size() == 5 && !detail::trim(fields[4]).empty()) {
      std::string flags = detail::trim(fields[4]);
      if (flags.size() != 2)
        throw ParseError("line " + std::to_string(line_no) + ": closure token must be two letters");
      lo_closed = detail::parse_closure(flags[0], line_no);
      hi_closed = detail::parse_closure(flags[1], line_no);
    }
    try {
      rec.interval = Interval(lo, hi, lo_closed, hi_closed);
    } catch (const std::invalid_argument& err) {
      throw ParseError("line " + std::to_string(line_no) + ": " + err.what());
    }
    if (fields.size() >= 3 && !detail::trim(fields[2]).empty())
      rec.weight = detail::parse_number(fields[2], line_no, "weight");
    if (fields.size() >= 4 && !detail::trim(fields[3]).empty())
      rec.alpha = detail::parse_number(fields[3], line_no, "alpha");

    if (records.empty()) {
      saw_weight = rec.weight.has_value();
      saw_alpha = rec.alpha.has_value();
    } else if (rec.weight.has_value() != saw_weight || rec.alpha.has_value() != saw_alpha) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": weights/levels must be given on all lines or none");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

inline WeightedFamily family_from_records(const std::vector<IntervalRecord>& records) {
  if (records.empty()) throw ParseError("no intervals");
  std::vector<Interval> sets;
  sets.reserve(records.size());
  for (const auto& r : records) sets.push_back(r.interval);
  bool weighted = records.front().weight.has_value();
  bool leveled = records.front().alpha.has_value();
  if (!weighted && !leveled) return WeightedFamily(std::move(sets));
  std::vector<double> weights;
  if (weighted) {
    for (const auto& r : records) weights.push_back(*r.weight);
  } else {
    weights.assign(records.size(), 1.0 / double(records.size()));
  }
  if (!leveled) return WeightedFamily(std::move(sets), std::move(weights));
  std::vector<double> levels;
  for (const auto& r : records) levels.push_back(*r.alpha);
  return WeightedFamily(std::move(sets), std::move(weights), std::move(levels));
}

// --- JSON encoding ---------------------------------------------------------

inline nlohmann::json endpoint_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

inline double endpoint_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    throw ParseError("bad endpoint string '" + s + "'");
  }
  return j.get<double>();
}

inline std::string closure_token(const Interval& iv) {
  std::string t;
  t += iv.lower_closed() ? 'c' : 'o';
  t += iv.upper_closed() ? 'c' : 'o';
  return t;
}

// A part is [lo, hi] when closed on both sides, else [lo, hi, "flags"].
inline nlohmann::json to_json(const IntervalUnion& u) {
  nlohmann::json parts = nlohmann::json::array();
  for (const Interval& iv : u.parts()) {
    nlohmann::json part = nlohmann::json::array();
    part.push_back(endpoint_to_json(iv.lower()));
    part.push_back(endpoint_to_json(iv.upper()));
    if (!(iv.lower_closed() && iv.upper_closed())) part.push_back(closure_token(iv));
    parts.push_back(std::move(part));
  }
  return nlohmann::json{{"parts", std::move(parts)}};
}

inline IntervalUnion union_from_json(const nlohmann::json& j) {
  std::vector<Interval> parts;
  for (const auto& part : j.at("parts")) {
    if (!part.is_array() || part.size() < 2 || part.size() > 3)
      throw ParseError("bad interval part in JSON");
    double lo = endpoint_from_json(part[0]);
    double hi = endpoint_from_json(part[1]);
    bool lo_closed = true, hi_closed = true;
    if (part.size() == 3) {
      std::string flags = part[2].get<std::string>();
      if (flags.size() != 2) throw ParseError("bad closure token in JSON");
      lo_closed = flags[0] == 'c';
      hi_closed = flags[1] == 'c';
    }
    parts.emplace_back(lo, hi, lo_closed, hi_closed);
  }
  return normalize(parts);
}

inline nlohmann::json to_json(const MergeOutcome& outcome) {
  nlohmann::json j = to_json(outcome.merged);
  j["schema"] = "setvote/1";
  j["rule"] = to_string(outcome.rule);
  j["threshold"] = outcome.threshold_used;
  j["part_count"] = outcome.merged.part_count();
  j["measure"] = endpoint_to_json(outcome.merged.measure());
  if (outcome.randomization_value) j["u"] = *outcome.randomization_value;
  if (outcome.seed) j["seed"] = *outcome.seed;
  if (outcome.permutation) j["permutation"] = *outcome.permutation;
  return j;
}

// --- Experiment reports ----------------------------------------------------

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  return nlohmann::json{{"scenario", cfg.scenario},
                        {"replications", cfg.replications},
                        {"master_seed", cfg.master_seed},
                        {"variant", cfg.variant},
                        {"agents", cfg.agents},
                        {"sample_size", cfg.sample_size},
                        {"alpha", cfg.alpha},
                        {"epsilon", cfg.epsilon},
                        {"tau", cfg.tau},
                        {"share", cfg.share},
                        {"mom_buckets", cfg.mom_buckets},
                        {"dimension", cfg.dimension},
                        {"lambda_draws", cfg.lambda_draws},
                        {"threads", cfg.threads}};
}

inline nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& r : report.rows) {
    rows.push_back(nlohmann::json{{"name", r.name},
                                  {"coverage", r.coverage},
                                  {"avg_width", endpoint_to_json(r.avg_width)},
                                  {"frac_empty", r.frac_empty},
                                  {"frac_multipart", r.frac_multipart},
                                  {"mc_se", r.mc_se}});
  }
  nlohmann::json extras = nlohmann::json::object();
  for (const auto& [key, value] : report.extras) extras[key] = value;
  nlohmann::json curves = nlohmann::json::object();
  for (const auto& [key, values] : report.curves) curves[key] = values;
  return nlohmann::json{{"schema", "setvote/1"},
                        {"config", config_to_json(report.config)},
                        {"rows", std::move(rows)},
                        {"extras", std::move(extras)},
                        {"curves", std::move(curves)}};
}

// Table-style CSV, one row per rule, rounded to four decimals.
inline std::string report_to_csv(const ExperimentReport& report) {
  auto cell = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  std::string out = "name,coverage,avg_width,frac_empty,frac_multipart,mc_se\n";
  for (const ReportRow& r : report.rows) {
    out += r.name + "," + cell(r.coverage) + "," + cell(r.avg_width) + "," + cell(r.frac_empty) +
           "," + cell(r.frac_multipart) + "," + cell(r.mc_se) + "\n";
  }
  return out;
}

// Plot-ready long-form CSV for any recorded curves (index is 1-based).
inline std::string curves_to_csv(const ExperimentReport& report) {
  std::string out = "curve,index,value\n";
  char buf[64];
  for (const auto& [name, values] : report.curves) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", values[i]);
      out += name + "," + std::to_string(i + 1) + "," + buf + "\n";
    }
  }
  return out;
}

}  // namespace setvote

#endif  // SETVOTE_IO_HPP
