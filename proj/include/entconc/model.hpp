#pragma once

// Parameters of the stationary three-mode output state and the closed-form
// scalar quantities derived from them.

#include <cstdint>

#include "entconc/truncation.hpp"

namespace entconc {

/// Driving cooperativities of the red-detuned (c1) and blue-detuned (c2)
/// cavities. Construction validates stability, 1 + c1 - c2 > 0.
class Cooperativities {
 public:
  Cooperativities(double c1, double c2);

  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }

 private:
  double c1_;
  double c2_;
};

/// Mean output quanta of the two cavity modes and the mechanics.
/// n2 == n1 + nm holds bit-for-bit.
struct ModeOccupations {
  double n1 = 0.0;
  double n2 = 0.0;
  double nm = 0.0;
  double zeta = 0.0;  // n1 / (1 + n2), in [0, 1)
};

ModeOccupations occupations(const Cooperativities& coop);

/// Probability of finding q phonons in the mechanical output mode.
double phonon_prob(const ModeOccupations& occ, std::int64_t q);

/// Conditional photon-number distribution of the first cavity mode given q
/// phonons: f_p(q) = C(p+q, p) zeta^p (1 - zeta)^(1+q).
class PairDistribution {
 public:
  PairDistribution(double zeta, std::int64_t q);

  double zeta() const noexcept { return zeta_; }
  std::int64_t offset() const noexcept { return q_; }

  double operator()(std::int64_t p) const;
  /// ln f_p(q); -inf where f vanishes.
  double log_value(std::int64_t p) const;

  /// Smallest p whose discarded tail sum_{p' > p} f_{p'} is <= eps.
  std::int64_t cutoff(double eps) const { return cut(eps).index; }
  TailCut cut(double eps) const;
  /// Same, for the amplitude series sqrt(f_p).
  std::int64_t amplitude_cutoff(double eps) const;

 private:
  double zeta_;
  std::int64_t q_;
  double log_zeta_;
  double log1m_zeta_;
};

double pair_coeff(const PairDistribution& dist, std::int64_t p);

/// Amplitude of |p, p+q, q> in the stationary three-mode state, evaluated
/// from the occupation form (not the P_q f_p(q) factorization).
double three_mode_amplitude(const Cooperativities& coop, std::int64_t p, std::int64_t q);

struct GaussianMoments {
  double kappa = 0.0;
  double sigma = 0.0;
  bool degenerate = false;  // zeta == 0: point mass at p = 0
};

GaussianMoments gaussian_moments(double zeta, std::int64_t q);

/// Log-negativity of the two cavity outputs with the mechanics traced out
/// (two-mode squeezed thermal state).
double pre_measurement_entanglement(const Cooperativities& coop);

/// Value approached at the instability point c2 -> c1 + 1.
double pre_measurement_instability_limit(double c1);

}  // namespace entconc
