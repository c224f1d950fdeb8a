#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "twistcoh/chain.hpp"
#include "twistcoh/form.hpp"
#include "twistcoh/parallel.hpp"
#include "twistcoh/quadrature.hpp"

namespace twistcoh {

/// Coordinates of a form's twisted de Rham class in the basis
/// eta_1..eta_{n-1}. Entry k-1 holds the coefficient of eta_k.
///
/// Reduction modulo (d + omega)(rational functions):
///  1. polynomial part, top degree first, with (d + omega) t^{m+1} whose
///     leading coefficient is m + 1 + sum(alpha);
///  2. poles of order m >= 2, top order first, with
///     (d + omega) (t - x_k)^{-(m-1)} whose leading coefficient is
///     alpha_k - (m - 1);
///  3. eta_0 traded for -(1/alpha_0) sum_{k>=1} alpha_k eta_k, since
///     omega = (d + omega) 1 is exact.
inline Eigen::VectorXcd reduce_to_basis(const TwistedSetup& setup, const RationalOneForm& form) {
  check_form(setup, form.coefficient);
  const std::size_t n = setup.size();
  PartialFractions work = form.coefficient;

  for (std::size_t degree = work.poly().size(); degree-- > 0;) {
    const cplx c = work.poly_coefficient(degree);
    if (c == cplx{}) continue;
    const cplx lead = static_cast<double>(degree + 1) + setup.exponent_sum();
    const RationalOneForm exact = twisted_differential(setup, monomial(degree + 1));
    work += (-c / lead) * exact.coefficient;
    work.clear_poly(degree);
  }

  for (std::size_t k = 0; k < n; ++k) {
    for (int order = work.max_order(k); order >= 2; --order) {
      const cplx c = work.pole_coefficient(k, order);
      if (c == cplx{}) continue;
      const cplx lead = setup.exponent(k) - static_cast<double>(order - 1);
      const RationalOneForm exact = twisted_differential(setup, inverse_power(k, order - 1));
      work += (-c / lead) * exact.coefficient;
      work.clear_pole(k, order);
    }
  }

  Eigen::VectorXcd v(static_cast<Eigen::Index>(n - 1));
  const cplx residue0 = work.pole_coefficient(0, 1);
  for (std::size_t k = 1; k < n; ++k) {
    v(static_cast<Eigen::Index>(k - 1)) =
        work.pole_coefficient(k, 1) - residue0 * setup.exponent(k) / setup.exponent(0);
  }
  return v;
}

/// Degree-0 Cech cochain: a_i is the coefficient of 1/weight on U_i.
struct CechCochain0 {
  std::vector<cplx> a;
};

/// Degree-1 cochain (s_ij = a_ij / weight); stored as a full antisymmetric
/// matrix.
struct CechCochain1 {
  Eigen::MatrixXcd a;

  std::size_t size() const { return static_cast<std::size_t>(a.rows()); }
  cplx operator()(std::size_t i, std::size_t j) const {
    return a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

/// Degree-2 cochain, meaningful on i < j < k.
struct CechCochain2 {
  std::size_t n = 0;
  std::vector<cplx> values;

  cplx operator()(std::size_t i, std::size_t j, std::size_t k) const { return values[(i * n + j) * n + k]; }
  cplx& at(std::size_t i, std::size_t j, std::size_t k) { return values[(i * n + j) * n + k]; }

  double max_abs() const {
    double best = 0.0;
    for (cplx v : values) best = std::max(best, std::abs(v));
    return best;
  }
};

inline CechCochain1 cech_d0(const TwistedSetup& setup, const CechCochain0& c) {
  const auto n = static_cast<Eigen::Index>(setup.size());
  if (c.a.size() != setup.size()) throw Error(ErrorCode::InvalidArgument, "cochain size mismatch");
  CechCochain1 out{Eigen::MatrixXcd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out.a(i, j) = c.a[static_cast<std::size_t>(j)] - c.a[static_cast<std::size_t>(i)];
  }
  return out;
}

inline CechCochain2 cech_d1(const TwistedSetup& setup, const CechCochain1& c) {
  const std::size_t n = setup.size();
  if (c.size() != n) throw Error(ErrorCode::InvalidArgument, "cochain size mismatch");
  CechCochain2 out{n, std::vector<cplx>(n * n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) out.at(i, j, k) = c(j, k) - c(i, k) + c(i, j);
    }
  }
  return out;
}

/// e_k: the cocycle with a_{0i} = -delta_{ik} and a_ij = a_{0j} - a_{0i}.
inline CechCochain1 standard_cocycle(const TwistedSetup& setup, std::size_t k) {
  if (k < 1 || k >= setup.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "standard cocycles are e_1 .. e_{n-1}");
  }
  std::vector<cplx> first_row(setup.size());
  first_row[k] = -1.0;
  CechCochain1 out{Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(setup.size()),
                                          static_cast<Eigen::Index>(setup.size()))};
  for (std::size_t i = 0; i < setup.size(); ++i) {
    for (std::size_t j = 0; j < setup.size(); ++j) {
      out.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = first_row[j] - first_row[i];
    }
  }
  return out;
}

/// Rebuilds a cocycle from its first row via a_jk = a_{0k} - a_{0j}.
inline CechCochain1 cocycle_from_first_row(const CechCochain1& c) {
  const Eigen::Index n = c.a.rows();
  CechCochain1 out{Eigen::MatrixXcd::Zero(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) out.a(j, k) = c.a(0, k) - c.a(0, j);
  }
  return out;
}

/// Coordinates of a cocycle in the basis e_1..e_{n-1}: -a_{0k}.
inline Eigen::VectorXcd cocycle_coordinates(const CechCochain1& c) {
  const Eigen::Index n = c.a.rows();
  Eigen::VectorXcd v(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) v(k - 1) = -c.a(0, k);
  return v;
}

struct PhiResult {
  CechCochain1 cochain;
  Eigen::MatrixXd errors;
  bool converged = true;
};

/// Cech-de Rham map: a_ij = -(pairing of reg(i,j) with weight * form).
inline PhiResult phi_map(const TwistedSetup& setup, const RationalOneForm& form,
                         double tol = kDefaultTolerance) {
  const std::size_t n = setup.size();
  const auto N = static_cast<Eigen::Index>(n);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<QuadratureResult> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    results[p] = integrate_chain(setup, reg_pair(setup, pairs[p].first, pairs[p].second), form, tol);
  });
  PhiResult out{CechCochain1{Eigen::MatrixXcd::Zero(N, N)}, Eigen::MatrixXd::Zero(N, N), true};
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto i = static_cast<Eigen::Index>(pairs[p].first);
    const auto j = static_cast<Eigen::Index>(pairs[p].second);
    out.cochain.a(i, j) = -results[p].value;
    out.cochain.a(j, i) = results[p].value;
    out.errors(i, j) = out.errors(j, i) = results[p].error_estimate;
    out.converged = out.converged && results[p].converged;
  }
  return out;
}

/// Period (Wronski) matrix: rows are the cycles reg(0,i), columns the forms
/// eta_j, i, j = 1..n-1.
struct PeriodMatrix {
  Eigen::MatrixXcd entries;
  Eigen::MatrixXd errors;
  bool converged = true;

  cplx determinant() const { return entries.determinant(); }

  /// First-order bound on the determinant error: sum |cofactor| * error.
  double determinant_error() const {
    const Eigen::Index m = entries.rows();
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::MatrixXcd minor(m - 1, m - 1);
        for (Eigen::Index r = 0, rr = 0; r < m; ++r) {
          if (r == i) continue;
          for (Eigen::Index c = 0, cc = 0; c < m; ++c) {
            if (c == j) continue;
            minor(rr, cc++) = entries(r, c);
          }
          ++rr;
        }
        const cplx cof = m == 1 ? cplx(1.0, 0.0) : minor.determinant();
        total += std::abs(cof) * errors(i, j);
      }
    }
    return total;
  }
};

/// Matrix of pairings of the given cycles with eta_1..eta_{n-1}, entries
/// computed concurrently.
inline PeriodMatrix period_matrix(const TwistedSetup& setup, const std::vector<TwistedChain>& cycles,
                                  double tol = kDefaultTolerance) {
  const std::size_t m = setup.size() - 1;
  const auto M = static_cast<Eigen::Index>(m);
  if (cycles.size() != m) throw Error(ErrorCode::InvalidArgument, "need n - 1 cycles");
  std::vector<QuadratureResult> results(m * m);
  parallel_for(m * m, [&](std::size_t idx) {
    const std::size_t row = idx / m;
    const std::size_t col = idx % m;
    results[idx] = integrate_chain(setup, cycles[row], basis_form(col + 1), tol);
  });
  PeriodMatrix out{Eigen::MatrixXcd(M, M), Eigen::MatrixXd(M, M), true};
  for (std::size_t idx = 0; idx < m * m; ++idx) {
    const auto row = static_cast<Eigen::Index>(idx / m);
    const auto col = static_cast<Eigen::Index>(idx % m);
    out.entries(row, col) = results[idx].value;
    out.errors(row, col) = results[idx].error_estimate;
    out.converged = out.converged && results[idx].converged;
  }
  return out;
}

inline PeriodMatrix wronski_matrix(const TwistedSetup& setup, double tol = kDefaultTolerance,
                                   double radius_scale = 1.0) {
  std::vector<TwistedChain> cycles;
  for (std::size_t i = 1; i < setup.size(); ++i) cycles.push_back(reg_pair(setup, 0, i, radius_scale));
  return period_matrix(setup, cycles, tol);
}

}  // namespace twistcoh
