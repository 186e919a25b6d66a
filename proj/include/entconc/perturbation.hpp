#pragma once

// Small-(1 - mu) expansion of the imperfect-detection log-negativity around
// the projective result, in powers of eps = (1 - mu) nm / (1 + nm).

#include <cstdint>

#include "entconc/channels.hpp"
#include "entconc/model.hpp"

namespace entconc {

/// eta(s) at s = q, q+1, q+2.
struct EtaTriple {
  double q = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;

  double residual() const { return 1.0 - q - q1 - q2; }
};

struct EtaWeights {
  double epsilon = 0.0;
  EtaTriple exact;     // direct evaluation of eta(s)
  EtaTriple closed;    // (1-eps)^(1+q) * {1, (q+1) eps, (q+1)(q+2)/2 eps^2}
  EtaTriple expanded;  // closed forms expanded through eps^2
};

double perturbation_epsilon(const ModeOccupations& occ, DetectorEfficiency mu);

EtaWeights eta_weights(const ModeOccupations& occ, DetectorEfficiency mu, std::int64_t q);

/// f_p2(q+1) f_p1(q+1) / (sqrt(f_p1(q) f_p2+1(q)) + sqrt(f_p1+1(q) f_p2(q))),
/// evaluated in the log domain. Symmetric in (p1, p2) bit-for-bit.
double g_coupling(double zeta, std::int64_t q, std::int64_t p1, std::int64_t p2);

struct OmegaFactor {
  double direct = 0.0;    // double sum of g over the truncation window / (sum sqrt f)^2
  double gaussian = 0.0;  // sqrt((1 + zeta q) / (zeta + zeta q)) / 2
};

OmegaFactor omega_factor(const Cooperativities& coop, std::int64_t q);

/// Closed-form Gaussian Omega; throws InvalidInput when zeta == 0.
double omega_gaussian(double zeta, std::int64_t q);

enum class OmegaMode { direct, gaussian, half };

struct PerturbativeValue {
  double value = 0.0;  // max(raw, 0)
  double raw = 0.0;
  bool clamped = false;
  bool trusted = false;  // eps (q + 1) < 0.1
};

/// E_N(q) - (q + 1) eps
PerturbativeValue first_order_entanglement(const Cooperativities& coop, DetectorEfficiency mu,
                                           std::int64_t q);

/// E_N(q) + (q + 1) eps ((q Omega + Omega - 1) eps / 2 - 1)
PerturbativeValue second_order_entanglement(const Cooperativities& coop, DetectorEfficiency mu,
                                            std::int64_t q, OmegaMode mode);

}  // namespace entconc
