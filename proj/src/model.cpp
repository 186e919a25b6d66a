#include "entconc/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "entconc/error.hpp"
#include "entconc/truncation.hpp"

namespace entconc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binomial(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

Cooperativities::Cooperativities(double c1, double c2) : c1_(c1), c2_(c2) {
  if (!std::isfinite(c1) || !std::isfinite(c2) || c1 < 0.0 || c2 < 0.0) {
    std::ostringstream msg;
    msg << "cooperativities must be finite and nonnegative (c1=" << c1 << ", c2=" << c2 << ")";
    throw InvalidInput(msg.str());
  }
  if (!(1.0 + c1 - c2 > 0.0)) {
    std::ostringstream msg;
    msg << "stability violated: 1 + c1 - c2 = " << 1.0 + c1 - c2 << " <= 0 (c1=" << c1
        << ", c2=" << c2 << ")";
    throw InvalidInput(msg.str());
  }
}

ModeOccupations occupations(const Cooperativities& coop) {
  const double c1 = coop.c1();
  const double c2 = coop.c2();
  const double gap = 1.0 + c1 - c2;
  const double denom = gap * gap;
  ModeOccupations occ;
  occ.n1 = 4.0 * c1 * c2 / denom;
  occ.nm = 4.0 * c2 / denom;
  occ.n2 = occ.n1 + occ.nm;
  const double sum = 1.0 + c1 + c2;
  occ.zeta = 4.0 * c1 * c2 / (sum * sum);
  return occ;
}

double phonon_prob(const ModeOccupations& occ, std::int64_t q) {
  if (q < 0) throw InvalidInput("phonon_prob: q must be nonnegative");
  if (occ.nm == 0.0) return q == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(q) * std::log(occ.nm) -
                  static_cast<double>(q + 1) * std::log1p(occ.nm));
}

PairDistribution::PairDistribution(double zeta, std::int64_t q)
    : zeta_(zeta),
      q_(q),
      log_zeta_(zeta > 0.0 ? std::log(zeta) : kNegInf),
      log1m_zeta_(std::log1p(-zeta)) {
  if (!(zeta >= 0.0 && zeta < 1.0)) throw InvalidInput("PairDistribution: zeta must lie in [0, 1)");
  if (q < 0) throw InvalidInput("PairDistribution: offset must be nonnegative");
}

double PairDistribution::log_value(std::int64_t p) const {
  if (p < 0) return kNegInf;
  if (p == 0) return static_cast<double>(q_ + 1) * log1m_zeta_;
  if (zeta_ == 0.0) return kNegInf;
  return log_binomial(p + q_, p) + static_cast<double>(p) * log_zeta_ +
         static_cast<double>(q_ + 1) * log1m_zeta_;
}

double PairDistribution::operator()(std::int64_t p) const { return std::exp(log_value(p)); }

TailCut PairDistribution::cut(double eps) const {
  return tail_cut([this](std::int64_t p) { return (*this)(p); }, eps);
}

std::int64_t PairDistribution::amplitude_cutoff(double eps) const {
  return tail_cutoff([this](std::int64_t p) { return std::exp(0.5 * log_value(p)); }, eps);
}

double pair_coeff(const PairDistribution& dist, std::int64_t p) {
  if (p < 0) throw InvalidInput("pair_coeff: p must be nonnegative");
  return dist(p);
}

double three_mode_amplitude(const Cooperativities& coop, std::int64_t p, std::int64_t q) {
  if (p < 0 || q < 0) throw InvalidInput("three_mode_amplitude: p and q must be nonnegative");
  const ModeOccupations occ = occupations(coop);
  const double log_den = std::log1p(occ.n2);
  double log_amp2 = log_binomial(p + q, p) - static_cast<double>(p + q + 1) * log_den;
  if (q > 0) {
    if (occ.nm == 0.0) return 0.0;
    log_amp2 += static_cast<double>(q) * std::log(occ.nm);
  }
  if (p > 0) {
    if (occ.n1 == 0.0) return 0.0;
    log_amp2 += static_cast<double>(p) * std::log(occ.n1);
  }
  return std::exp(0.5 * log_amp2);
}

GaussianMoments gaussian_moments(double zeta, std::int64_t q) {
  if (!(zeta >= 0.0 && zeta < 1.0)) throw InvalidInput("gaussian_moments: zeta must lie in [0, 1)");
  if (q < 0) throw InvalidInput("gaussian_moments: q must be nonnegative");
  GaussianMoments m;
  if (zeta == 0.0) {
    m.degenerate = true;
    return m;
  }
  const double n = static_cast<double>(q + 1);
  m.kappa = zeta * n / (1.0 - zeta);
  m.sigma = std::sqrt(zeta * n) / (1.0 - zeta);
  return m;
}

double pre_measurement_entanglement(const Cooperativities& coop) {
  const double c1 = coop.c1();
  const double c2 = coop.c2();
  const double a = c2 * (c1 + c2);
  const double b = (1.0 + c1) * (1.0 + c1) + c1 * c2;
  const double x = 2.0 * c2 * (1.0 + 2.0 * c1);
  const double gap = 1.0 + c1 - c2;
  // (1+c1-c2)^2 / (a + b + x - 4 sqrt(ab)), multiplied through by the
  // conjugate; (a+b+x)^2 - 16ab = (1+c1-c2)^2 ((1+c1-c2)^2 + 8 c2).
  const double numerator = a + b + x + 4.0 * std::sqrt(a * b);
  const double denominator = gap * gap + 8.0 * c2;
  const double ratio = numerator / denominator;
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw NumericalFailure("pre_measurement_entanglement: logarithm argument not positive");
  }
  return std::log(ratio);
}

double pre_measurement_instability_limit(double c1) {
  if (!(c1 >= 0.0)) throw InvalidInput("pre_measurement_instability_limit: c1 must be nonnegative");
  return std::log(2.0 * c1 + 1.0);
}

}  // namespace entconc
