#pragma once

// Phonon-counting measurement channels acting on the stationary state:
// projective counting, counting with detector efficiency mu, and on-off
// detection. Each produces the conditional two-mode state of the cavity
// outputs and its log-negativity.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "entconc/model.hpp"
#include "entconc/negativity.hpp"
#include "entconc/truncation.hpp"

namespace entconc {

/// Probability that the detector registers a single quantum; 0 < mu <= 1.
class DetectorEfficiency {
 public:
  explicit DetectorEfficiency(double mu);
  double value() const noexcept { return mu_; }

 private:
  double mu_;
};

/// Mixing weights w(s), s = s_min .. s_min + size - 1, of a ladder mixture.
struct OffsetWeights {
  std::int64_t s_min = 0;
  std::vector<double> weights;
  double deficit = 0.0;  // discarded weight beyond the last retained offset
};

/// Ladder |Psi_s> = sum_p sqrt(f_p(s)) |p, p+s> truncated so that the
/// discarded probability is at most tail_eps.
LadderPure pair_ladder(double zeta, std::int64_t offset, double tail_eps);

/// Mixture sum_s w(s) |Psi_s><Psi_s|. Component s keeps a ladder tail of at
/// most eps_trunc / (2 K w(s)), so the retained trace is >= 1 - eps_trunc
/// whenever the weights were cut at eps_trunc / 2.
LadderMixture pair_mixture(double zeta, const OffsetWeights& weights, const TruncationPolicy& policy);

struct PerfectOutcome {
  LadderPure state;
  double probability = 0.0;
};

struct MixtureOutcome {
  LadderMixture state;
  double probability = 0.0;
};

// --- projective counting -------------------------------------------------

PerfectOutcome perfect_post_state(const Cooperativities& coop, std::int64_t q,
                                  const TruncationPolicy& policy = {});

/// 2 ln sum_p sqrt(f_p(q)), summed until the amplitude tail is below 1e-17.
double perfect_entanglement(const Cooperativities& coop, std::int64_t q);

/// Large-q Gaussian estimate ln(sqrt(8 pi zeta (1+q)) / (1 - zeta)).
/// Approximation only; throws InvalidInput when zeta == 0.
double perfect_entanglement_gaussian(const Cooperativities& coop, std::int64_t q);

// --- finite efficiency ---------------------------------------------------

/// Closed form (nm mu)^q / (1 + nm mu)^(1+q).
double imperfect_outcome_prob(const ModeOccupations& occ, DetectorEfficiency mu, std::int64_t q);

/// eta(s) = P_s C(s,q) mu^q (1-mu)^(s-q) / P_mu(q) for a single s >= q.
double imperfect_weight(const ModeOccupations& occ, DetectorEfficiency mu, std::int64_t q,
                        std::int64_t s);

/// eta(s) for s = q .. s_max, cut where the remaining weight is <= eps.
OffsetWeights imperfect_weights(const ModeOccupations& occ, DetectorEfficiency mu, std::int64_t q,
                                double eps);

MixtureOutcome imperfect_post_state(const Cooperativities& coop, DetectorEfficiency mu, std::int64_t q,
                                    const TruncationPolicy& policy = {});

/// Eigensolve over the full (truncated) conditional mixture.
NegativityResult imperfect_entanglement_numeric(const Cooperativities& coop, DetectorEfficiency mu,
                                                std::int64_t q, const TruncationPolicy& policy = {});

// --- no measurement / on-off ----------------------------------------------

/// Cavity state with the mechanics traced out: w(s) = P_s.
LadderMixture traced_two_mode_state(const Cooperativities& coop, const TruncationPolicy& policy = {});

/// Off outcome leaves |Psi_0>; identical code path to perfect_entanglement(coop, 0).
double off_entanglement(const Cooperativities& coop);

/// Probability of the on outcome, 1 - P_0.
double on_probability(const ModeOccupations& occ);

/// w(k) = P_k (1 + nm) / nm, k >= 1. Throws InvalidInput when nm == 0.
OffsetWeights on_weights(const ModeOccupations& occ, double eps);

MixtureOutcome on_post_state(const Cooperativities& coop, const TruncationPolicy& policy = {});

enum class OnMethod { numeric, average, average_gaussian };

struct OnEntanglement {
  double value = 0.0;
  double deficit = 0.0;  // trace deficit (numeric) or dropped weight (averages)
  std::int64_t largest_block = 0;
};

OnEntanglement on_entanglement(const Cooperativities& coop, OnMethod method,
                               const TruncationPolicy& policy = {});

// --- records ---------------------------------------------------------------

enum class Channel { perfect, imperfect, off, on };

std::string_view to_string(Channel channel);

/// Outcome of one measurement evaluation. Values are in nats; a method that
/// does not apply to the channel (or was not requested) is left empty.
struct MeasurementRecord {
  Channel channel = Channel::perfect;
  std::optional<std::int64_t> outcome;
  std::optional<double> mu;
  double probability = 0.0;
  std::optional<double> exact;
  std::optional<double> eigensolve;
  std::optional<double> gaussian;
  std::optional<double> pert1;
  std::optional<double> pert2;
  std::optional<double> average;           // on channel: mean of E_N(k) over k >= 1
  std::optional<double> average_gaussian;  // same, with the Gaussian E_N(k)
  bool pert_trusted = false;
  bool pert_clamped = false;
  double trunc_deficit = 0.0;
  std::int64_t largest_block = 0;
};

}  // namespace entconc
