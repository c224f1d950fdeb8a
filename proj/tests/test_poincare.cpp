#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace twistcoh;
using testing_support::relative_error;

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

RationalFunction random_rational(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RationalFunction f;
  f.terms.add_poly(0, cplx(u(rng), u(rng)));
  for (std::size_t k = 0; k < n; ++k) f.terms.add_pole(k, 1 + static_cast<int>(k % 2), cplx(u(rng), u(rng)));
  return f;
}

}  // namespace

TEST_CASE("default paths stay in U_i and end at t") {
  std::mt19937_64 rng(137);
  for (int k = 0; k < 30; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 4);
    const std::size_t i = k % s.size();
    const cplx t = testing_support::random_point_in_region(rng, s, i);
    for (double depth : {0.0, s.diameter()}) {
      const auto path = default_path(s, i, t, depth);
      CHECK(std::abs(path.start() - s.base_point()) == 0.0);
      CHECK(std::abs(path.end() - t) < 1e-12);
      CHECK(path_in_region(s, Region::of(i), path));
      CHECK(puncture_clearance(s, path) >= s.safety_radius());
    }
  }
}

TEST_CASE("default path rejects points outside the region") {
  const auto s = validate_setup({0.0, 1.0}, {0.5, 0.5});
  CHECK(code_of([&] { default_path(s, 1, cplx(0.0, 1.0)); }) == ErrorCode::PointOutsideRegion);
  CHECK_NOTHROW(default_path(s, 0, cplx(0.0, 1.0)));
  CHECK(code_of([&] { solve_at(s, 0, connection_form(s), 1.0); }) == ErrorCode::PointOutsideRegion);
}

TEST_CASE("omega has primitive one") {
  std::mt19937_64 rng(139);
  for (int k = 0; k < 6; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 3);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto at_p = solve_at(s, i, connection_form(s), s.base_point());
      CHECK(std::abs(at_p.value - 1.0) < 1e-9);
      const cplx t = testing_support::random_point_in_region(rng, s, i);
      CHECK(std::abs(solve_at(s, i, connection_form(s), t).value - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("zero form gives zero") {
  const auto s = validate_setup({0.0, 1.0, 2.5}, {0.3, 0.6, 0.45});
  const auto g = solve_at(s, 1, RationalOneForm{}, cplx(1.2, 0.7));
  CHECK(g.value == cplx{});
  const auto r = residual_check(s, 1, RationalOneForm{}, cplx(1.2, 0.7), 1e-2);
  CHECK(r.residual == 0.0);
}

TEST_CASE("exact forms are inverted") {
  std::mt19937_64 rng(149);
  for (int k = 0; k < 10; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 3);
    const std::size_t i = k % s.size();
    const std::size_t pole_at = (k / 2) % s.size();
    const RationalFunction f = inverse_power(pole_at, 1);
    const auto form = twisted_differential(s, f);
    const cplx t = testing_support::random_point_in_region(rng, s, i);
    const auto g = solve_at(s, i, form, t);
    CHECK(relative_error(g.value, f(s, t)) < 1e-6);

    const RationalFunction h = random_rational(rng, s.size());
    const auto gh = solve_at(s, i, twisted_differential(s, h), t);
    CHECK(relative_error(gh.value, h(s, t)) < 1e-6);
  }
}

TEST_CASE("solutions do not depend on the path") {
  std::mt19937_64 rng(151);
  for (int k = 0; k < 12; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 3);
    const std::size_t m = k % s.size();
    for (std::size_t i : {std::size_t{0}, s.size() - 1}) {
      const cplx t = testing_support::random_point_in_region(rng, s, i);
      const auto r = path_independence_check(s, i, basis_form(m), t);
      CHECK(r.passed);
      CHECK(r.looped_discrepancy <= r.looped_bound);
      CHECK(r.detoured_discrepancy <= r.detoured_bound);
      CHECK(r.primary.converged);
    }
  }
}

TEST_CASE("residual decays at second order") {
  std::mt19937_64 rng(157);
  for (int k = 0; k < 4; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 3);
    const std::size_t i = k % 3;
    const cplx t = testing_support::random_point_in_region(rng, s, i);
    const auto form = basis_form((k + 1) % 3);
    std::vector<double> residuals;
    std::vector<double> floors;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
      const auto r = residual_check(s, i, form, t, h);
      residuals.push_back(r.residual);
      floors.push_back(r.noise_floor);
    }
    CHECK(second_order_decay(residuals, floors));
  }
}

TEST_CASE("residual on an exact form") {
  const auto s = validate_setup({0.0, 1.0, 2.5}, {0.3, 0.6, 0.45});
  const auto form = twisted_differential(s, inverse_power(1, 1));
  for (double h : {1e-2, 1e-3}) {
    const auto r = residual_check(s, 0, form, cplx(0.6, 0.5), h);
    CHECK(r.residual < std::max(1e-6, 10.0 * h * h));
  }
}

TEST_CASE("stencil must stay in the region") {
  const auto s = validate_setup({0.0, 1.0}, {0.5, 0.5});
  CHECK(code_of([&] { residual_check(s, 0, basis_form(1), cplx(1.005, 0.5), 1e-2); }) ==
        ErrorCode::StencilLeavesRegion);
  CHECK(code_of([&] { residual_check(s, 0, basis_form(1), cplx(0.5, 0.5), 0.0); }) == ErrorCode::InvalidArgument);
}
