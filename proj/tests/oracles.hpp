#pragma once

// Reference implementations for tests. Deliberately naive: multiplicative
// binomials in long double, explicit powers, dense partial transposes.
// None of this shares code with the library.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline long double binom(std::int64_t n, std::int64_t k) {
  long double r = 1.0L;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return r;
}

inline double coop_zeta(double c1, double c2) { return 4.0 * c1 * c2 / ((1 + c1 + c2) * (1 + c1 + c2)); }
inline double coop_nm(double c1, double c2) { return 4.0 * c2 / ((1 + c1 - c2) * (1 + c1 - c2)); }

// f_p(q) for moderate p + q (no overflow below ~1500 in long double).
inline double f(double zeta, std::int64_t q, std::int64_t p) {
  return static_cast<double>(binom(p + q, p) * std::pow(static_cast<long double>(zeta), p) *
                             std::pow(1.0L - zeta, q + 1));
}

inline double phonon(double nm, std::int64_t q) {
  return static_cast<double>(std::pow(static_cast<long double>(nm), q) / std::pow(1.0L + nm, q + 1));
}

// Negative-binomial form of the efficiency weights: eta(q + j).
inline double eta(double nm, double mu, std::int64_t q, std::int64_t j) {
  const long double e = (1.0L - mu) * nm / (1.0L + nm);
  return static_cast<double>(binom(q + j, j) * std::pow(e, j) * std::pow(1.0L - e, q + 1));
}

// 2 ln sum_p sqrt(f_p(q)) with a fixed generous window.
inline double schmidt_sum(double zeta, std::int64_t q, std::int64_t window) {
  long double s = 0.0L;
  for (std::int64_t p = 0; p <= window; ++p) s += std::sqrt(static_cast<long double>(f(zeta, q, p)));
  return static_cast<double>(2.0L * std::log(s));
}

struct Component {
  double weight;
  std::int64_t offset;
  std::vector<double> coeffs;
};

// Negativity of sum_s w |Psi_s><Psi_s| from the full dense partial transpose
// (second mode transposed) in the truncated product basis.
inline double dense_negativity(const std::vector<Component>& mix) {
  std::int64_t amax = 0, bmax = 0;
  for (const auto& c : mix) {
    const auto n = static_cast<std::int64_t>(c.coeffs.size()) - 1;
    amax = std::max(amax, n);
    bmax = std::max(bmax, n + c.offset);
  }
  const std::int64_t nb = bmax + 1;
  const std::int64_t dim = (amax + 1) * nb;
  Eigen::MatrixXd pt = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& c : mix) {
    const auto n = static_cast<std::int64_t>(c.coeffs.size());
    for (std::int64_t a = 0; a < n; ++a) {
      for (std::int64_t a2 = 0; a2 < n; ++a2) {
        // <a, a+s| rho |a2, a2+s>  ->  <a, a2+s| rho^T |a2, a+s>
        const std::int64_t row = a * nb + (a2 + c.offset);
        const std::int64_t col = a2 * nb + (a + c.offset);
        pt(row, col) += c.weight * c.coeffs[a] * c.coeffs[a2];
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) < -1e-14) neg -= es.eigenvalues()(i);
  }
  return neg;
}

}  // namespace oracle
