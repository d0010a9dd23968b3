#pragma once

// JSON file formats for functions, weight sequences and witness reports, plus
// the versioned CSV writer used by the experiment runner.
//
//   function:  {"breakpoints": [[x, y], ...]}
//   sequence:  {"family": "power", "params": {"s": 1}}
//              {"family": "power_log", "params": {"s": 1, "t": 2}}
//              {"family": "block_power_log", "params": {"alpha": 0.75, "s": 2}}
//              {"family": "explicit", "terms": [1, 2, 3]}
//   An optional "scale" param multiplies a named family.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lamvar/constructions.hpp"
#include "lamvar/lambda_sequence.hpp"
#include "lamvar/periodic_function.hpp"

namespace lamvar::io {

using nlohmann::json;

/// Input that does not match a file format; the message names the field.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline json function_to_json(const PiecewiseLinearPeriodic& f) {
  json pts = json::array();
  for (const auto& b : f.breakpoints()) pts.push_back({b.x, b.y});
  return {{"breakpoints", pts}};
}

inline PiecewiseLinearPeriodic function_from_json(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j["breakpoints"].is_array()) {
    throw FormatError("breakpoints: missing or not an array");
  }
  std::vector<Breakpoint> pts;
  for (const auto& e : j["breakpoints"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw FormatError("breakpoints: each entry must be [x, y]");
    }
    pts.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return PiecewiseLinearPeriodic::from_points(std::move(pts));
}

inline json sequence_to_json(const LambdaSequence& lam) {
  json j;
  j["family"] = family_name(lam.family());
  switch (lam.family()) {
    case LambdaFamily::power: j["params"] = {{"s", lam.s()}}; break;
    case LambdaFamily::power_log: j["params"] = {{"s", lam.s()}, {"t", lam.t()}}; break;
    case LambdaFamily::block_power_log: j["params"] = {{"alpha", lam.alpha()}, {"s", lam.s()}}; break;
    case LambdaFamily::explicit_terms: j["terms"] = lam.terms(); break;
  }
  if (lam.is_named() && lam.scale() != 1.0) j["params"]["scale"] = lam.scale();
  return j;
}

namespace detail {

inline double number_field(const json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_number()) {
    throw FormatError(std::string("params.") + key + ": missing or not a number");
  }
  return params[key].get<double>();
}

}  // namespace detail

inline LambdaSequence sequence_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw FormatError("family: missing or not a string");
  }
  const auto family = j["family"].get<std::string>();
  if (family == "explicit") {
    if (!j.contains("terms") || !j["terms"].is_array()) throw FormatError("terms: missing or not an array");
    std::vector<double> terms;
    for (const auto& t : j["terms"]) {
      if (!t.is_number()) throw FormatError("terms: entries must be numbers");
      terms.push_back(t.get<double>());
    }
    return LambdaSequence::explicit_terms(std::move(terms));
  }
  if (!j.contains("params") || !j["params"].is_object()) throw FormatError("params: missing or not an object");
  const auto& params = j["params"];
  const double scale = params.contains("scale") ? detail::number_field(params, "scale") : 1.0;
  if (family == "power") return LambdaSequence::power(detail::number_field(params, "s"), scale);
  if (family == "power_log") {
    return LambdaSequence::power_log(detail::number_field(params, "s"), detail::number_field(params, "t"), scale);
  }
  if (family == "block_power_log") {
    return LambdaSequence::block_power_log(detail::number_field(params, "alpha"),
                                           detail::number_field(params, "s"), scale);
  }
  throw FormatError("family: unknown value '" + family + "'");
}

inline json witness_report_to_json(const WitnessReport& r) {
  json j{{"levels", r.levels},
         {"delta", r.delta},
         {"beta", r.beta},
         {"beta_sum", r.beta_sum},
         {"S", r.s},
         {"block_norms", r.block_norms},
         {"level_lambda_sums", r.level_lambda_sums},
         {"criterion_partial", r.criterion_partial},
         {"measured_lambda_variation", r.measured_lambda_variation},
         {"analytic_lower_bound", r.analytic_lower_bound}};
  if (r.p_cont_ratio) {
    j["p_cont_ratio"] = r.p_cont_ratio->value;
    j["p_cont_ratio_depth"] = r.p_cont_ratio->depth;
  }
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

/// Shortest form is not used: every value is written with 17 significant
/// digits so it re-parses to the same double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr int kCsvSchemaVersion = 1;

class CsvWriter {
 public:
  CsvWriter(std::string layout, std::string command, std::vector<std::string> columns)
      : columns_(std::move(columns)) {
    out_ << "# lamvar-csv schema=" << kCsvSchemaVersion << " layout=" << layout << " command=" << command
         << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
  }

  /// A cell is either text or a number; empty text marks "not applicable".
  struct Cell {
    Cell(double v) : text(format_double(v)) {}                // NOLINT
    Cell(int v) : text(std::to_string(v)) {}                   // NOLINT
    Cell(unsigned v) : text(std::to_string(v)) {}              // NOLINT
    Cell(std::uint64_t v) : text(std::to_string(v)) {}         // NOLINT
    Cell(const char* s) : text(s) {}                           // NOLINT
    Cell(std::string s) : text(std::move(s)) {}                // NOLINT
    std::string text;
  };

  void row(std::initializer_list<Cell> cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("csv: column count mismatch");
    bool first = true;
    for (const auto& c : cells) {
      out_ << (first ? "" : ",") << c.text;
      first = false;
    }
    out_ << '\n';
    ++rows_;
  }

  std::size_t rows() const { return rows_; }
  std::string str() const { return out_.str(); }

 private:
  std::vector<std::string> columns_;
  std::ostringstream out_;
  std::size_t rows_ = 0;
};

}  // namespace lamvar::io
