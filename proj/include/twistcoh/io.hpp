#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "twistcoh/chain.hpp"
#include "twistcoh/form.hpp"
#include "twistcoh/setup.hpp"

namespace twistcoh {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolkitVersion = "0.1.0";

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, what + " is not valid JSON: " + e.what());
  }
}

inline Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const Json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::InvalidInput, what + " must be a number or a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<cplx> complex_list_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, what + " must be an array");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(complex_from_json(j[k], what + "[" + std::to_string(k) + "]"));
  return out;
}

/// {"punctures": [[re,im],...], "exponents": [[re,im],...], "cut_direction": number}
inline TwistedSetup setup_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "setup must be a JSON object");
  if (!j.contains("punctures") || !j.contains("exponents")) {
    throw Error(ErrorCode::InvalidInput, "setup needs \"punctures\" and \"exponents\"");
  }
  double cut = kDefaultCutDirection;
  if (j.contains("cut_direction")) {
    if (!j["cut_direction"].is_number()) throw Error(ErrorCode::InvalidInput, "cut_direction must be a number");
    cut = j["cut_direction"].get<double>();
  }
  return validate_setup(complex_list_from_json(j["punctures"], "punctures"),
                        complex_list_from_json(j["exponents"], "exponents"), cut);
}

inline Json setup_to_json(const TwistedSetup& setup) {
  Json j;
  j["punctures"] = Json::array();
  for (cplx x : setup.punctures()) j["punctures"].push_back(to_json(x));
  j["exponents"] = Json::array();
  for (cplx a : setup.exponents()) j["exponents"].push_back(to_json(a));
  j["cut_direction"] = setup.cut_direction();
  return j;
}

/// {"poles": {"k,m": [re,im], ...}, "poly": [[re,im], ...]}
inline PartialFractions partial_fractions_from_json(const Json& j, const std::string& what) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, what + " must be a JSON object");
  PartialFractions pf;
  if (j.contains("poly")) {
    const auto poly = complex_list_from_json(j["poly"], what + ".poly");
    for (std::size_t m = 0; m < poly.size(); ++m) pf.add_poly(m, poly[m]);
  }
  if (j.contains("poles")) {
    if (!j["poles"].is_object()) throw Error(ErrorCode::InvalidInput, what + ".poles must be an object");
    for (const auto& [key, value] : j["poles"].items()) {
      const auto comma = key.find(',');
      std::size_t k = 0;
      int m = 0;
      try {
        if (comma == std::string::npos) throw std::invalid_argument("comma");
        std::size_t used = 0;
        k = std::stoul(key.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument("index");
        const std::string order = key.substr(comma + 1);
        m = std::stoi(order, &used);
        if (used != order.size()) throw std::invalid_argument("order");
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidInput, "pole key \"" + key + "\" must read \"k,m\"");
      }
      if (m < 1) throw Error(ErrorCode::InvalidInput, "pole order in \"" + key + "\" must be at least 1");
      pf.add_pole(k, m, complex_from_json(value, what + ".poles." + key));
    }
  }
  return pf;
}

/// A form spec, optionally extended by "exact": a rational function f (same
/// syntax) whose twisted differential (d + omega) f is added to the form.
struct FormSpec {
  RationalOneForm form;
  std::optional<RationalFunction> primitive;
};

inline FormSpec form_spec_from_json(const TwistedSetup& setup, const Json& j) {
  FormSpec spec;
  spec.form.coefficient = partial_fractions_from_json(j, "form");
  check_form(setup, spec.form.coefficient);
  if (j.contains("exact")) {
    RationalFunction f{partial_fractions_from_json(j["exact"], "form.exact")};
    check_form(setup, f.terms);
    spec.form = spec.form + twisted_differential(setup, f);
    spec.primitive = std::move(f);
  }
  return spec;
}

inline Json piece_to_json(const Piece& piece) {
  Json j;
  if (const auto* seg = std::get_if<Segment>(&piece)) {
    j["type"] = "segment";
    j["from"] = to_json(seg->from);
    j["to"] = to_json(seg->to);
  } else {
    const auto& arc = std::get<Arc>(piece);
    j["type"] = "arc";
    j["center"] = to_json(arc.center);
    j["radius"] = arc.radius;
    j["theta_from"] = arc.theta_from;
    j["theta_to"] = arc.theta_to;
  }
  return j;
}

inline Json path_to_json(const ContourPath& path) {
  Json j;
  j["start"] = to_json(path.start());
  j["pieces"] = Json::array();
  for (const Piece& p : path.pieces()) j["pieces"].push_back(piece_to_json(p));
  return j;
}

inline Json branch_to_json(const BranchState& b) {
  Json j;
  j["anchor"] = to_json(b.anchor);
  j["args"] = b.args;
  j["logmods"] = b.logmods;
  return j;
}

inline Json chain_to_json(const TwistedChain& chain) {
  Json j = Json::array();
  for (const ChainTerm& term : chain.terms) {
    Json t;
    t["coefficient"] = to_json(term.coefficient);
    t["branch"] = branch_to_json(term.branch);
    t["path"] = path_to_json(term.path);
    j.push_back(std::move(t));
  }
  return j;
}

inline Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    j.push_back(std::move(row));
  }
  return j;
}

inline Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

inline Json error_to_json(const Error& e) {
  Json j;
  j["code"] = std::string(to_string(e.code()));
  j["detail"] = e.detail();
  return j;
}

/// Report envelope shared by every command.
inline Json make_report(const std::string& command, const Json& setup_echo, Json results,
                        double wall_clock_seconds) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["toolkit_version"] = kToolkitVersion;
  j["setup"] = setup_echo;
  j["results"] = std::move(results);
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

}  // namespace twistcoh
