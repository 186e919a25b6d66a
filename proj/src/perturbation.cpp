#include "entconc/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "entconc/error.hpp"

namespace entconc {

namespace {

constexpr double kAmplitudeTail = 1e-17;
constexpr double kTrustedBound = 0.1;

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

PerturbativeValue finish(double raw, double epsilon, std::int64_t q) {
  PerturbativeValue v;
  v.raw = raw;
  v.clamped = raw < 0.0;
  v.value = v.clamped ? 0.0 : raw;
  v.trusted = epsilon * static_cast<double>(q + 1) < kTrustedBound;
  return v;
}

}  // namespace

double perturbation_epsilon(const ModeOccupations& occ, DetectorEfficiency mu) {
  return (1.0 - mu.value()) * occ.nm / (1.0 + occ.nm);
}

EtaWeights eta_weights(const ModeOccupations& occ, DetectorEfficiency mu, std::int64_t q) {
  if (q < 0) throw InvalidInput("eta_weights: q must be nonnegative");
  EtaWeights w;
  const double e = perturbation_epsilon(occ, mu);
  const double n = static_cast<double>(q + 1);
  w.epsilon = e;

  w.exact = {imperfect_weight(occ, mu, q, q), imperfect_weight(occ, mu, q, q + 1),
             imperfect_weight(occ, mu, q, q + 2)};

  const double base = std::pow(1.0 - e, n);
  w.closed = {base, n * e * base, 0.5 * n * (n + 1.0) * e * e * base};

  w.expanded = {1.0 - n * e + 0.5 * (n - 1.0) * n * e * e, n * e - n * n * e * e,
                0.5 * n * (n + 1.0) * e * e};
  return w;
}

double g_coupling(double zeta, std::int64_t q, std::int64_t p1, std::int64_t p2) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw InvalidInput("g_coupling: zeta must lie in (0, 1)");
  if (p1 < 0 || p2 < 0) throw InvalidInput("g_coupling: p1 and p2 must be nonnegative");
  const PairDistribution f(zeta, q);
  const PairDistribution f_next(zeta, q + 1);
  const double log_num = f_next.log_value(p2) + f_next.log_value(p1);
  const double left = 0.5 * (f.log_value(p1) + f.log_value(p2 + 1));
  const double right = 0.5 * (f.log_value(p1 + 1) + f.log_value(p2));
  return std::exp(log_num - log_add_exp(left, right));
}

double omega_gaussian(double zeta, std::int64_t q) {
  if (!(zeta > 0.0)) throw InvalidInput("omega: zeta must be positive");
  const double qd = static_cast<double>(q);
  return 0.5 * std::sqrt((1.0 + zeta * qd) / (zeta + zeta * qd));
}

OmegaFactor omega_factor(const Cooperativities& coop, std::int64_t q) {
  if (q < 0) throw InvalidInput("omega_factor: q must be nonnegative");
  const double zeta = occupations(coop).zeta;
  if (!(zeta > 0.0)) throw InvalidInput("omega_factor: zeta must be positive");

  const PairDistribution f(zeta, q);
  const PairDistribution f_next(zeta, q + 1);
  const std::int64_t window = std::max(f.amplitude_cutoff(kAmplitudeTail), f_next.amplitude_cutoff(kAmplitudeTail));
  const auto n = static_cast<std::size_t>(window + 1);

  std::vector<double> lf(n + 1), lf_next(n);
  for (std::size_t p = 0; p <= n; ++p) lf[p] = f.log_value(static_cast<std::int64_t>(p));
  for (std::size_t p = 0; p < n; ++p) lf_next[p] = f_next.log_value(static_cast<std::int64_t>(p));

  double amp_sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) amp_sum += std::exp(0.5 * lf[p]);

  double g_sum = 0.0;
  for (std::size_t p1 = 0; p1 < n; ++p1) {
    for (std::size_t p2 = 0; p2 < n; ++p2) {
      const double left = 0.5 * (lf[p1] + lf[p2 + 1]);
      const double right = 0.5 * (lf[p1 + 1] + lf[p2]);
      g_sum += std::exp(lf_next[p2] + lf_next[p1] - log_add_exp(left, right));
    }
  }

  OmegaFactor omega;
  omega.direct = g_sum / (amp_sum * amp_sum);
  omega.gaussian = omega_gaussian(zeta, q);
  return omega;
}

PerturbativeValue first_order_entanglement(const Cooperativities& coop, DetectorEfficiency mu,
                                           std::int64_t q) {
  const double e = perturbation_epsilon(occupations(coop), mu);
  const double raw = perfect_entanglement(coop, q) - static_cast<double>(q + 1) * e;
  return finish(raw, e, q);
}

PerturbativeValue second_order_entanglement(const Cooperativities& coop, DetectorEfficiency mu,
                                            std::int64_t q, OmegaMode mode) {
  const ModeOccupations occ = occupations(coop);
  const double e = perturbation_epsilon(occ, mu);
  const double n = static_cast<double>(q + 1);
  const double en = perfect_entanglement(coop, q);
  double raw = 0.0;
  if (mode == OmegaMode::half) {
    const double qd = static_cast<double>(q);
    raw = en - n * e + 0.25 * (qd * qd - 1.0) * e * e;
  } else {
    const double omega =
        mode == OmegaMode::direct ? omega_factor(coop, q).direct : omega_gaussian(occ.zeta, q);
    raw = en + n * e * (0.5 * (n * omega - 1.0) * e - 1.0);
  }
  return finish(raw, e, q);
}

}  // namespace entconc
