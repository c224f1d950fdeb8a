#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twistcoh/twistcoh.hpp"

using namespace twistcoh;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCheck = 3;
constexpr int kExitIo = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoFailure: return kExitIo;
    case ErrorCode::PathHitsPuncture:
    case ErrorCode::EmptyChain: return kExitCheck;
    default: return kExitValidation;
  }
}

struct Options {
  std::string setup_file;
  std::string out_file;
  double tol = kDefaultTolerance;
  double h = 1e-3;
  double check_tol = 1e-6;
  std::string form_file;
  std::size_t region = 0;
  std::vector<std::string> points;
  std::vector<std::string> chains;
};

struct LoadedSetup {
  Json echo;
  TwistedSetup setup;
};

LoadedSetup load_setup(const std::string& file) {
  Json echo = parse_json(read_text_file(file), file);
  TwistedSetup setup = setup_from_json(echo);
  return {std::move(echo), std::move(setup)};
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out_file.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(opt.out_file, text);
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

cplx parse_point(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("point");
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma);
    const std::string b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument("point");
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument("point");
    return {re, im};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "point \"" + text + "\" must read \"re,im\"");
  }
}

int cmd_periods(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedSetup in = load_setup(opt.setup_file);
  const TwistedSetup& s = in.setup;
  const PeriodMatrix w = wronski_matrix(s, opt.tol);
  const cplx det = w.determinant();
  const double det_error = w.determinant_error();

  Json results;
  results["wronski"] = matrix_to_json(w.entries);
  results["det"] = to_json(det);
  results["det_error_estimate"] = det_error;
  try {
    const cplx rhs = varchenko_rhs(s);
    const double sign = (s.size() - 1) % 2 == 0 ? 1.0 : -1.0;
    results["varchenko_rhs"] = to_json(rhs);
    results["ratio"] = to_json(sign * det / rhs);
  } catch (const Error& e) {
    results["varchenko_rhs"] = nullptr;
    results["ratio"] = nullptr;
    results["varchenko_unavailable"] = error_to_json(e);
  }
  results["error_estimates"] = matrix_to_json(w.errors);
  results["converged"] = w.converged;
  emit(opt, make_report("periods", in.echo, std::move(results), seconds_since(start)).dump(2) + "\n");
  if (!w.converged || !(std::abs(det) > 1e3 * det_error)) {
    std::cerr << "periods: determinant not resolved above its error estimate\n";
    return kExitCheck;
  }
  return kExitOk;
}

int cmd_varchenko(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedSetup in = load_setup(opt.setup_file);
  const VarchenkoReport r = varchenko_check(in.setup, opt.tol, opt.check_tol);
  Json results;
  results["lhs"] = to_json(r.lhs);
  results["rhs"] = to_json(r.rhs);
  results["det_w"] = to_json(r.det_w);
  results["lhs_error_estimate"] = r.lhs_error;
  results["magnitude_error"] = r.magnitude_error;
  results["phase_ratio"] = to_json(r.phase_ratio);
  results["sign"] = r.sign;
  results["expected_sign"] = kVarchenkoSign;
  results["phase_mismatch"] = r.phase_mismatch;
  results["check_tolerance"] = opt.check_tol;
  results["converged"] = r.converged;
  results["passed"] = r.passed;
  emit(opt, make_report("varchenko", in.echo, std::move(results), seconds_since(start)).dump(2) + "\n");
  if (!r.passed) {
    std::cerr << "varchenko: mismatch lhs = " << detail::format(r.lhs) << " rhs = " << detail::format(r.rhs) << "\n";
    return kExitCheck;
  }
  return kExitOk;
}

int cmd_solve(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedSetup in = load_setup(opt.setup_file);
  const TwistedSetup& s = in.setup;
  if (opt.form_file.empty()) throw Error(ErrorCode::InvalidInput, "solve needs --form");
  check_index(s, opt.region);
  const Json form_json = parse_json(read_text_file(opt.form_file), opt.form_file);
  const FormSpec spec = form_spec_from_json(s, form_json);
  std::vector<cplx> points;
  for (const auto& p : opt.points) points.push_back(parse_point(p));

  std::vector<Json> entries(points.size());
  std::vector<char> failed(points.size(), 0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    Json e;
    e["point"] = to_json(points[k]);
    try {
      const PathIndependenceReport r = path_independence_check(s, opt.region, spec.form, points[k], opt.tol);
      e["value"] = to_json(r.primary.value);
      e["error_estimate"] = r.primary.error_estimate;
      e["converged"] = r.primary.converged;
      e["path"] = path_to_json(r.primary.path);
      if (spec.primitive) e["primitive"] = to_json((*spec.primitive)(s, points[k]));
      Json pi;
      pi["looped_discrepancy"] = r.looped_discrepancy;
      pi["looped_bound"] = r.looped_bound;
      pi["detoured_discrepancy"] = r.detoured_discrepancy;
      pi["detoured_bound"] = r.detoured_bound;
      pi["passed"] = r.passed;
      e["path_independence"] = std::move(pi);
      failed[k] = !r.passed;
    } catch (const Error& err) {
      e["error"] = error_to_json(err);
    }
    entries[k] = std::move(e);
  }
  Json results;
  results["region"] = opt.region;
  results["form"] = form_json;
  results["evaluations"] = Json::array();
  for (auto& e : entries) results["evaluations"].push_back(std::move(e));
  emit(opt, make_report("solve", in.echo, std::move(results), seconds_since(start)).dump(2) + "\n");
  for (char f : failed) {
    if (f) {
      std::cerr << "solve: path independence violated\n";
      return kExitCheck;
    }
  }
  return kExitOk;
}

int cmd_gauss_manin(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedSetup in = load_setup(opt.setup_file);
  const TwistedSetup& s = in.setup;
  const ConnectionMatrices omega = connection_matrices(s);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(omega[0].rows(), omega[0].cols());
  double magnitude = 0.0;
  Json matrices = Json::array();
  for (std::size_t j = 0; j < omega.size(); ++j) {
    matrices.push_back(matrix_to_json(omega[j]));
    total += omega[j];
    magnitude += omega[j].norm();
  }
  const double sum_norm = total.norm();
  const bool translation_ok = sum_norm <= 1e-12 * std::max(1.0, magnitude);

  Json residuals = Json::array();
  Json table = Json::array();
  bool decay_ok = true;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const PfaffianResidual r = pfaffian_residual(s, j, opt.h, opt.tol);
    residuals.push_back({{"j", j}, {"h", r.h}, {"residual", r.residual}, {"noise_floor", r.noise_floor}});
    std::vector<double> res;
    std::vector<double> floors;
    Json rows = Json::array();
    for (double h : convergence_steps()) {
      const PfaffianResidual c = pfaffian_residual(s, j, h, opt.tol);
      res.push_back(c.residual);
      floors.push_back(c.noise_floor);
      rows.push_back({{"h", h}, {"residual", c.residual}, {"noise_floor", c.noise_floor}});
    }
    const bool ok = second_order_decay(res, floors);
    decay_ok = decay_ok && ok;
    table.push_back({{"j", j}, {"rows", std::move(rows)}, {"second_order", ok}});
  }
  Json results;
  results["convention"] = "dW/dx_j = W * Omega_j";
  results["omega"] = std::move(matrices);
  results["sum_norm"] = sum_norm;
  results["residuals"] = std::move(residuals);
  results["convergence"] = std::move(table);
  emit(opt, make_report("gauss-manin", in.echo, std::move(results), seconds_since(start)).dump(2) + "\n");
  if (!translation_ok || !decay_ok) {
    std::cerr << "gauss-manin: quantitative check failed\n";
    return kExitCheck;
  }
  return kExitOk;
}

DiagramLayer parse_chain(const TwistedSetup& s, const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
  std::vector<std::size_t> idx;
  try {
    std::size_t pos = 0;
    while (pos < args.size()) {
      const auto next = args.find(',', pos);
      const std::string part = args.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      std::size_t used = 0;
      idx.push_back(std::stoul(part, &used));
      if (used != part.size()) throw std::invalid_argument("index");
      pos = next == std::string::npos ? args.size() : next + 1;
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "chain spec \"" + text + "\" has bad indices");
  }
  if (kind == "loop" && idx.size() == 1) {
    check_index(s, idx[0]);
    TwistedChain chain;
    chain.terms.push_back({cplx(1.0, 0.0), loop_around(s, idx[0]), principal_branch(s, s.base_point())});
    return {text, std::move(chain)};
  }
  if (kind == "reg" && idx.size() == 2) return {text, reg_pair(s, idx[0], idx[1])};
  if (kind == "segment" && idx.size() == 2) {
    return {text, reg_segment(s, idx[0], idx[1], 0.1 * s.default_loop_radius(idx[0]))};
  }
  throw Error(ErrorCode::InvalidInput, "chain spec \"" + text + "\" must be loop:i, reg:i,j or segment:i,j");
}

int cmd_diagram(const Options& opt) {
  const LoadedSetup in = load_setup(opt.setup_file);
  std::vector<DiagramLayer> layers;
  for (const auto& c : opt.chains) layers.push_back(parse_chain(in.setup, c));
  emit(opt, render_diagram(in.setup, layers));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted period integrals, Wronski matrices and the Gauss-Manin connection"};
  app.require_subcommand(1);
  // --h is the step size, so help is long-form only.
  app.set_help_flag("--help", "print this help and exit");
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--setup", opt.setup_file, "setup JSON file")->required();
    sub->add_option("--out", opt.out_file, "write the report here instead of stdout");
    sub->add_option("--tol", opt.tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  };
  CLI::App* periods = app.add_subcommand("periods", "Wronski matrix, determinant and error estimates");
  add_common(periods);
  CLI::App* varchenko = app.add_subcommand("varchenko", "determinant against the Gamma-factor formula");
  add_common(varchenko);
  varchenko->add_option("--check-tol", opt.check_tol, "tolerance of the magnitude and phase comparison")
      ->check(CLI::PositiveNumber);
  CLI::App* solve = app.add_subcommand("solve", "single-valued solution of (d + omega) g = eta");
  add_common(solve);
  solve->add_option("--form", opt.form_file, "form spec JSON file");
  solve->add_option("--region", opt.region, "index i of the region U_i");
  solve->add_option("--point", opt.points, "evaluation point re,im (repeatable)");
  CLI::App* gm = app.add_subcommand("gauss-manin", "connection matrices and Pfaffian residuals");
  add_common(gm);
  gm->add_option("--h", opt.h, "finite-difference step")->check(CLI::PositiveNumber);
  CLI::App* diagram = app.add_subcommand("diagram", "SVG of punctures, cuts and chains");
  add_common(diagram);
  diagram->add_option("--chain", opt.chains, "loop:i, reg:i,j or segment:i,j (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*periods) return cmd_periods(opt);
    if (*varchenko) return cmd_varchenko(opt);
    if (*solve) return cmd_solve(opt);
    if (*gm) return cmd_gauss_manin(opt);
    if (*diagram) return cmd_diagram(opt);
  } catch (const Error& e) {
    Json j;
    j["error"] = error_to_json(e);
    std::cerr << j.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    Json j;
    j["error"] = {{"code", "Internal"}, {"detail", e.what()}};
    std::cerr << j.dump() << "\n";
    return kExitCheck;
  }
  return kExitValidation;
}
