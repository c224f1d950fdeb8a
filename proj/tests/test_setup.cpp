#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace twistcoh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

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

TwistedSetup make(std::vector<cplx> x, std::vector<cplx> a, double cut = kDefaultCutDirection) {
  return validate_setup(x, a, cut);
}

}  // namespace

TEST_CASE("minimal valid setup") {
  const auto s = make({0.0, 1.0}, {0.5, 0.5});
  CHECK(s.size() == 2);
  CHECK(s.cut_direction() == kDefaultCutDirection);
  CHECK_THAT(s.min_gap(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("validation rejections") {
  CHECK(code_of([] { make({0.0, 0.0}, {0.5, 1.0 / 3.0}); }) == ErrorCode::DuplicatePuncture);
  CHECK(code_of([] { make({0.0, 1.0}, {1.0, 0.5}); }) == ErrorCode::IntegerExponent);
  CHECK(code_of([] { make({0.0, 1.0}, {0.5, -2.0 + 1e-13}); }) == ErrorCode::IntegerExponent);
  CHECK(code_of([] { make({0.0, 1.0}, {-0.5, -0.5}); }) == ErrorCode::ResonantSum);
  CHECK(code_of([] { make({0.0, 1.0}, {-1.25, -0.75}); }) == ErrorCode::ResonantSum);
  CHECK(code_of([] { make({0.0, cplx(0.0, 2.0)}, {0.3, 0.4}); }) == ErrorCode::VerticalAlignment);
  CHECK(code_of([] { make({0.0}, {0.3}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make({0.0, 1.0}, {0.3}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("rotating the cuts avoids vertical alignment") {
  const auto s = make({0.0, cplx(0.0, 2.0)}, {0.3, 0.4}, 0.3);
  CHECK(s.size() == 2);
}

TEST_CASE("error messages quote the integer tolerance") {
  try {
    make({0.0, 1.0}, {1.0, 0.5});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("1e-12") != std::string::npos);
  }
}

TEST_CASE("monodromy coefficients") {
  const auto s = make({0.0, 1.0, 3.0}, {0.5, 0.25, cplx(0.3, 0.1)});
  CHECK(std::abs(monodromy_coefficient(s, 0) - cplx(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(monodromy_coefficient(s, 1) - cplx(0.0, 1.0)) < 1e-15);
  // exp(2 pi i (a + i b)) = exp(-2 pi b) (cos 2 pi a + i sin 2 pi a)
  const double m = std::exp(-2.0 * kPi * 0.1);
  const cplx expected(m * std::cos(2.0 * kPi * 0.3), m * std::sin(2.0 * kPi * 0.3));
  CHECK(std::abs(monodromy_coefficient(s, 2) - expected) < 1e-15);
  CHECK(code_of([&] { monodromy_coefficient(s, 3); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("monodromy coefficients never equal one") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 4);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const cplx c = monodromy_coefficient(s, i);
      CHECK(std::abs(c - std::exp(cplx(0.0, 2.0 * kPi) * s.exponent(i))) <= 1e-14 * std::abs(c));
      CHECK(std::abs(c - 1.0) > 0.0);
    }
  }
}

TEST_CASE("connection form") {
  const cplx a(0.3, 0.1);
  const cplx b(0.7, 0.0);
  const auto s = make({0.0, 1.0}, {a, b});
  const auto omega = connection_form(s);
  CHECK(omega.coefficient.poly().empty());
  CHECK(omega.coefficient.poles().size() == 2);
  CHECK(omega.coefficient.pole_coefficient(0, 1) == a);
  CHECK(omega.coefficient.pole_coefficient(1, 1) == b);
  const cplx t(0.4, 0.9);
  CHECK(std::abs(omega(s, t) - (a / t + b / (t - 1.0))) < 1e-15);
}

TEST_CASE("connection form residues equal exponents") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 3);
    const auto omega = connection_form(s);
    cplx total{};
    for (const auto& [key, c] : omega.coefficient.poles()) {
      CHECK(key.second == 1);
      CHECK(c == s.exponent(key.first));
      total += c;
    }
    CHECK(std::abs(total - s.exponent_sum()) < 1e-15);
  }
}

TEST_CASE("region membership") {
  const auto s = make({0.0, 1.0}, {0.5, 0.5});
  for (auto r : {Region::all(), Region::of(0), Region::of(1)}) CHECK(in_region(s, r, 0.5));
  const cplx above0(0.0, 1.0);
  CHECK_FALSE(in_region(s, Region::of(1), above0));
  CHECK_FALSE(in_region(s, Region::all(), above0));
  CHECK(in_region(s, Region::of(0), above0));
  for (auto r : {Region::all(), Region::of(0), Region::of(1)}) CHECK_FALSE(in_region(s, r, 1.0));
}

TEST_CASE("membership in U implies membership in every U_i") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int k = 0; k < 10; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 3);
    for (int m = 0; m < 200; ++m) {
      cplx t(coord(rng), coord(rng));
      if (m % 10 == 0) t = s.puncture(m % 3) + cplx(0.0, 0.5);  // exactly on a cut
      if (in_region(s, Region::all(), t)) {
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(in_region(s, Region::of(i), t));
      }
    }
  }
}

TEST_CASE("real order") {
  CHECK(real_order(make({0.0, 1.0, 2.0}, {0.3, 0.3, 0.3})) == std::vector<std::size_t>{0, 1, 2});
  CHECK(real_order(make({2.0, 0.0, 1.0}, {0.3, 0.3, 0.3})) == std::vector<std::size_t>{1, 2, 0});
  const auto tied = make({0.0, cplx(0.0, 1.0)}, {0.3, 0.3}, 0.2);
  CHECK(code_of([&] { real_order(tied); }) == ErrorCode::TiedRealParts);
}

TEST_CASE("real order is a sorting bijection") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 5);
    const auto order = real_order(s);
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
    for (std::size_t i = 1; i < order.size(); ++i) {
      CHECK(s.puncture(order[i - 1]).real() < s.puncture(order[i]).real());
    }
  }
}

TEST_CASE("base point sits in U below every puncture") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const auto s = testing_support::random_complex_setup(rng, 2 + k % 4);
    CHECK(in_region(s, Region::all(), s.base_point()));
    for (cplx x : s.punctures()) CHECK(s.height(s.base_point()) < s.height(x));
  }
  const auto rotated = make({0.0, 1.0, cplx(0.5, 1.0)}, {0.3, 0.4, 0.2}, 2.0);
  CHECK(in_region(rotated, Region::all(), rotated.base_point()));
}

TEST_CASE("frame maps the cut direction to straight up") {
  const auto s = make({0.0, 1.0}, {0.3, 0.4}, 0.7);
  const cplx z = s.to_frame(s.cut_unit());
  CHECK_THAT(z.real(), WithinAbs(0.0, 1e-15));
  CHECK_THAT(z.imag(), WithinRel(1.0, 1e-15));
  CHECK(on_cut(s, s.puncture(1) + 2.0 * s.cut_unit(), 1));
  CHECK_FALSE(on_cut(s, s.puncture(1) - 2.0 * s.cut_unit(), 1));
}
