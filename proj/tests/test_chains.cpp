#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace twistcoh;
using Catch::Matchers::WithinAbs;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::vector<double> windings(const TwistedSetup& s, const ContourPath& path) {
  const auto b = principal_branch(s, path.start());
  const auto e = continue_along(s, path, b);
  std::vector<double> w;
  for (std::size_t j = 0; j < s.size(); ++j) w.push_back((e.args[j] - b.args[j]) / kTwoPi);
  return w;
}

// A path from the base point into U_i ending at a random point of the region.
ContourPath random_gamma(std::mt19937_64& rng, const TwistedSetup& s, std::size_t i) {
  for (;;) {
    const cplx t = testing_support::random_point_in_region(rng, s, i);
    try {
      return default_path(s, i, t);
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("loop windings") {
  const auto s = validate_setup({0.0, 1.0}, {0.5, 0.5});
  const auto w0 = windings(s, loop_around(s, 0, 0.5, 0.1));
  CHECK_THAT(w0[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(w0[1], WithinAbs(0.0, 1e-12));
  const auto w1 = windings(s, loop_around(s, 1, 0.5, 0.1));
  CHECK_THAT(w1[0], WithinAbs(0.0, 1e-12));
  CHECK_THAT(w1[1], WithinAbs(1.0, 1e-12));
  CHECK(code_of([&] { loop_around(s, 0, 0.5, 0.6); }) == ErrorCode::RadiusTooLarge);
  CHECK(code_of([&] { loop_around(s, 0, cplx(1.0, 1.0), 0.1); }) == ErrorCode::BasepointOnCut);
  CHECK(code_of([&] { loop_around(s, 2, 0.5, 0.1); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("default loops wind once around their own puncture") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 15; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 4);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto loop = loop_around(s, i);
      CHECK(std::abs(loop.start() - s.base_point()) == 0.0);
      CHECK(std::abs(loop.end() - s.base_point()) < 1e-12);
      const auto w = windings(s, loop);
      for (std::size_t j = 0; j < s.size(); ++j) CHECK_THAT(w[j], WithinAbs(i == j ? 1.0 : 0.0, 1e-12));
    }
  }
}

TEST_CASE("regularize builds the two term chain") {
  const auto s = validate_setup({0.0, 1.0}, {0.5, cplx(0.3, 0.1)});
  const ContourPath gamma = ContourPath(s.base_point()).line_to(0.5);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto chain = regularize(s, gamma, i);
    REQUIRE(chain.size() == 2);
    CHECK(chain.terms[0].coefficient == cplx(1.0, 0.0));
    CHECK(std::abs(chain.terms[1].coefficient - 1.0 / (monodromy_coefficient(s, i) - 1.0)) < 1e-15);
    CHECK(chain.terms[0].branch.args == principal_branch(s, s.base_point()).args);
    CHECK(chain.terms[1].branch.args == chain.terms[0].branch.args);
  }
  CHECK(std::abs(regularize(s, gamma, 0).terms[1].coefficient - cplx(-0.5, 0.0)) < 1e-15);
}

TEST_CASE("regularize rejects paths leaving U_i") {
  const auto s = validate_setup({0.0, 1.0}, {0.5, 0.5});
  const ContourPath crossing = ContourPath(s.base_point()).line_to(cplx(-0.5, 2.0));
  CHECK(code_of([&] { regularize(s, crossing, 1); }) == ErrorCode::PathLeavesRegion);
  CHECK_NOTHROW(regularize(s, crossing, 0));
}

TEST_CASE("reg_pair coefficients, antisymmetry and cycle property") {
  const auto s = validate_setup({0.0, 1.0}, {0.5, 0.5});
  const auto chain = reg_pair(s, 0, 1);
  REQUIRE(chain.size() == 2);
  CHECK(std::abs(chain.terms[0].coefficient - cplx(-0.5, 0.0)) < 1e-15);
  CHECK(std::abs(chain.terms[1].coefficient - cplx(0.5, 0.0)) < 1e-15);
  CHECK(twisted_boundary(s, chain).empty());
  CHECK(chain_combine(s, reg_pair(s, 0, 1), reg_pair(s, 1, 0), 1.0, 1.0).empty());
  CHECK(code_of([&] { reg_pair(s, 1, 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { reg_pair(s, 0, 2); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("cycle property on random setups") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 10; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 4);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (i != j) CHECK(twisted_boundary(s, reg_pair(s, i, j)).empty());
      }
    }
  }
}

TEST_CASE("chain_combine trivial identities") {
  const auto s = validate_setup({0.0, 1.0, 2.5}, {0.3, 0.6, 0.45});
  const auto a = reg_pair(s, 0, 2);
  const auto b = regularize(s, ContourPath(s.base_point()).line_to(cplx(1.7, 0.2)), 1);
  CHECK(chain_combine(s, a, a, 1.0, -1.0).empty());
  CHECK(chain_combine(s, a, b, 0.0, 0.0).empty());
  CHECK_FALSE(simplify(s, a).empty());
}

TEST_CASE("regularizations of gamma and sigma_i then gamma cancel exactly") {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 20; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 3);
    const std::size_t i = k % s.size();
    const auto gamma = random_gamma(rng, s, i);
    const auto gamma_prime = loop_around(s, i).then(gamma);
    const cplx c = monodromy_coefficient(s, i);
    const auto combo = chain_combine(s, regularize(s, gamma_prime, i), regularize(s, gamma, i), 1.0 / c, -1.0);
    CHECK(combo.empty());
  }
}

TEST_CASE("twisted boundary of elementary chains") {
  const auto s = validate_setup({0.0, 1.0}, {0.3, 0.4});
  const cplx a(0.5, -0.5);
  const cplx b(2.0, -0.5);
  TwistedChain segment;
  segment.terms.push_back({1.0, ContourPath(a).line_to(b), principal_branch(s, a)});
  const auto boundary = twisted_boundary(s, segment);
  REQUIRE(boundary.size() == 2);
  CHECK(std::abs(boundary[0].point - b) < 1e-15);
  CHECK(boundary[0].coefficient == cplx(1.0, 0.0));
  CHECK(std::abs(boundary[1].point - a) < 1e-15);
  CHECK(boundary[1].coefficient == cplx(-1.0, 0.0));

  // (1/(c_i - 1)) sigma_i contributes exactly one unit of the fixed branch at p.
  for (std::size_t i = 0; i < 2; ++i) {
    TwistedChain loop;
    const auto base = principal_branch(s, s.base_point());
    loop.terms.push_back({1.0 / (monodromy_coefficient(s, i) - 1.0), loop_around(s, i), base});
    const auto bd = twisted_boundary(s, loop);
    REQUIRE(bd.size() == 1);
    CHECK(std::abs(bd[0].point - s.base_point()) < 1e-12);
    const cplx as_fixed = bd[0].coefficient * weight_value(s, bd[0].branch) / weight_value(s, base);
    CHECK(std::abs(as_fixed - 1.0) < 1e-12);
  }
}

TEST_CASE("integration is linear over chain_combine") {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 8; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 3);
    const auto a = reg_pair(s, 0, 1);
    const auto b = reg_pair(s, 1, 2);
    const cplx lambda(0.7, -0.2);
    const cplx mu(-1.3, 0.4);
    const auto form = basis_form(k % 3);
    const auto ia = integrate_chain(s, a, form);
    const auto ib = integrate_chain(s, b, form);
    const auto ic = integrate_chain(s, chain_combine(s, a, b, lambda, mu), form);
    const double bound = std::abs(lambda) * ia.error_estimate + std::abs(mu) * ib.error_estimate + ic.error_estimate;
    CHECK(std::abs(ic.value - (lambda * ia.value + mu * ib.value)) <= 10.0 * bound + 1e-12);
    const auto twice = integrate_chain(s, chain_combine(s, a, a, 1.0, 1.0), form);
    CHECK(std::abs(twice.value - 2.0 * ia.value) <= 10.0 * (twice.error_estimate + 2.0 * ia.error_estimate) + 1e-12);
  }
}

TEST_CASE("regularized path integrals do not depend on the loop radius") {
  std::mt19937_64 rng(59);
  for (int k = 0; k < 8; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 3);
    const std::size_t i = k % 3;
    const auto gamma = random_gamma(rng, s, i);
    const auto form = basis_form((i + 1) % 3);
    const auto wide = integrate_chain(s, regularize(s, gamma, i, 1.0), form);
    const auto narrow = integrate_chain(s, regularize(s, gamma, i, 0.5), form);
    const double bound = wide.error_estimate + narrow.error_estimate;
    CHECK(std::abs(wide.value - narrow.value) <= 10.0 * bound + 1e-11 * std::abs(wide.value));
  }
}

TEST_CASE("reg_segment closes the segment into a cycle") {
  const auto s = validate_setup({0.0, 1.0, 2.0}, {0.3, 0.4, 0.6});
  const auto chain = reg_segment(s, 0, 1, 0.05);
  CHECK(chain.size() == 3);
  CHECK(twisted_boundary(s, chain).empty());
  CHECK(code_of([&] { reg_segment(s, 0, 1, 0.3); }) == ErrorCode::RadiusTooLarge);
  CHECK(code_of([&] { reg_segment(s, 0, 2, 0.05); }) == ErrorCode::PathLeavesRegion);
}

TEST_CASE("chains serialize their pieces") {
  const auto s = validate_setup({0.0, 1.0}, {0.5, 0.5});
  const auto j = chain_to_json(reg_pair(s, 0, 1));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["coefficient"][0].get<double>() == -0.5);
  CHECK(j[0]["path"]["pieces"].size() == loop_around(s, 0).pieces().size());
  bool has_arc = false;
  for (const auto& piece : j[0]["path"]["pieces"]) has_arc = has_arc || piece["type"] == "arc";
  CHECK(has_arc);
}
