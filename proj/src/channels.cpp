#include "entconc/channels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "entconc/error.hpp"

namespace entconc {

namespace {

constexpr double kAmplitudeTail = 1e-17;

double log_binomial(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

void require_outcome(std::int64_t q) {
  if (q < 0) throw InvalidInput("outcome q must be nonnegative");
}

}  // namespace

DetectorEfficiency::DetectorEfficiency(double mu) : mu_(mu) {
  if (!(mu > 0.0 && mu <= 1.0)) {
    throw InvalidInput("detector efficiency must lie in (0, 1], got " + std::to_string(mu));
  }
}

LadderPure pair_ladder(double zeta, std::int64_t offset, double tail_eps) {
  const PairDistribution dist(zeta, offset);
  const TailCut cut = dist.cut(tail_eps);
  LadderPure state;
  state.offset = offset;
  state.coeffs.reserve(static_cast<std::size_t>(cut.index + 1));
  for (std::int64_t p = 0; p <= cut.index; ++p) state.coeffs.push_back(std::exp(0.5 * dist.log_value(p)));
  state.tail_deficit = cut.tail;
  return state;
}

LadderMixture pair_mixture(double zeta, const OffsetWeights& weights, const TruncationPolicy& policy) {
  std::size_t nonzero = 0;
  for (double w : weights.weights) nonzero += w > 0.0 ? 1 : 0;
  std::vector<LadderComponent> comps;
  comps.reserve(nonzero);
  for (std::size_t i = 0; i < weights.weights.size(); ++i) {
    const double w = weights.weights[i];
    if (!(w > 0.0)) continue;
    const double budget = policy.eps_trunc / (2.0 * static_cast<double>(nonzero) * w);
    comps.push_back({w, pair_ladder(zeta, weights.s_min + static_cast<std::int64_t>(i), budget)});
  }
  if (comps.empty()) throw NumericalFailure("pair_mixture: all mixture weights vanished");
  return LadderMixture(std::move(comps), weights.deficit);
}

PerfectOutcome perfect_post_state(const Cooperativities& coop, std::int64_t q,
                                  const TruncationPolicy& policy) {
  require_outcome(q);
  const ModeOccupations occ = occupations(coop);
  return {pair_ladder(occ.zeta, q, policy.eps_trunc), phonon_prob(occ, q)};
}

double perfect_entanglement(const Cooperativities& coop, std::int64_t q) {
  require_outcome(q);
  const PairDistribution dist(occupations(coop).zeta, q);
  const std::int64_t last = dist.amplitude_cutoff(kAmplitudeTail);
  double sum = 0.0;
  for (std::int64_t p = 0; p <= last; ++p) sum += std::exp(0.5 * dist.log_value(p));
  return 2.0 * std::log(sum);
}

double perfect_entanglement_gaussian(const Cooperativities& coop, std::int64_t q) {
  require_outcome(q);
  const double zeta = occupations(coop).zeta;
  if (!(zeta > 0.0)) throw InvalidInput("gaussian approximation needs zeta > 0");
  const double n = static_cast<double>(q + 1);
  return 0.5 * std::log(8.0 * std::numbers::pi * zeta * n) - std::log1p(-zeta);
}

double imperfect_outcome_prob(const ModeOccupations& occ, DetectorEfficiency mu, std::int64_t q) {
  require_outcome(q);
  const double x = occ.nm * mu.value();
  if (x == 0.0) return q == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(q) * std::log(x) - static_cast<double>(q + 1) * std::log1p(x));
}

double imperfect_weight(const ModeOccupations& occ, DetectorEfficiency mu, std::int64_t q,
                        std::int64_t s) {
  require_outcome(q);
  if (occ.nm == 0.0 && q > 0) throw InvalidInput("outcome q > 0 has zero probability when nm = 0");
  if (s < q) return 0.0;
  const double nm = occ.nm;
  double log_eta = static_cast<double>(1 + q) * std::log1p(nm * mu.value()) -
                   static_cast<double>(1 + s) * std::log1p(nm);
  if (s > q) {
    if (nm == 0.0 || mu.value() == 1.0) return 0.0;
    log_eta += static_cast<double>(s - q) * (std::log(nm) + std::log1p(-mu.value())) + log_binomial(s, q);
  }
  return std::exp(log_eta);
}

OffsetWeights imperfect_weights(const ModeOccupations& occ, DetectorEfficiency mu, std::int64_t q,
                                double eps) {
  const TailCut cut =
      tail_cut([&](std::int64_t j) { return imperfect_weight(occ, mu, q, q + j); }, eps);
  OffsetWeights out;
  out.s_min = q;
  out.deficit = cut.tail;
  for (std::int64_t j = 0; j <= cut.index; ++j) out.weights.push_back(imperfect_weight(occ, mu, q, q + j));
  return out;
}

MixtureOutcome imperfect_post_state(const Cooperativities& coop, DetectorEfficiency mu, std::int64_t q,
                                    const TruncationPolicy& policy) {
  const ModeOccupations occ = occupations(coop);
  const OffsetWeights w = imperfect_weights(occ, mu, q, 0.5 * policy.eps_trunc);
  return {pair_mixture(occ.zeta, w, policy), imperfect_outcome_prob(occ, mu, q)};
}

NegativityResult imperfect_entanglement_numeric(const Cooperativities& coop, DetectorEfficiency mu,
                                                std::int64_t q, const TruncationPolicy& policy) {
  return log_negativity(imperfect_post_state(coop, mu, q, policy).state, policy);
}

LadderMixture traced_two_mode_state(const Cooperativities& coop, const TruncationPolicy& policy) {
  const ModeOccupations occ = occupations(coop);
  const TailCut cut =
      tail_cut([&](std::int64_t s) { return phonon_prob(occ, s); }, 0.5 * policy.eps_trunc);
  OffsetWeights w;
  w.deficit = cut.tail;
  for (std::int64_t s = 0; s <= cut.index; ++s) w.weights.push_back(phonon_prob(occ, s));
  return pair_mixture(occ.zeta, w, policy);
}

double off_entanglement(const Cooperativities& coop) { return perfect_entanglement(coop, 0); }

double on_probability(const ModeOccupations& occ) { return 1.0 - phonon_prob(occ, 0); }

OffsetWeights on_weights(const ModeOccupations& occ, double eps) {
  if (!(occ.nm > 0.0)) throw InvalidInput("on outcome has zero probability (nm = 0)");
  const double log_nm = std::log(occ.nm);
  const double log1p_nm = std::log1p(occ.nm);
  // w(k) = P_k (1 + nm) / nm = nm^(k-1) / (1 + nm)^k
  auto weight = [&](std::int64_t j) {
    return std::exp(static_cast<double>(j) * log_nm - static_cast<double>(j + 1) * log1p_nm);
  };
  const TailCut cut = tail_cut(weight, eps);
  OffsetWeights out;
  out.s_min = 1;
  out.deficit = cut.tail;
  for (std::int64_t j = 0; j <= cut.index; ++j) out.weights.push_back(weight(j));
  return out;
}

MixtureOutcome on_post_state(const Cooperativities& coop, const TruncationPolicy& policy) {
  const ModeOccupations occ = occupations(coop);
  const OffsetWeights w = on_weights(occ, 0.5 * policy.eps_trunc);
  return {pair_mixture(occ.zeta, w, policy), on_probability(occ)};
}

OnEntanglement on_entanglement(const Cooperativities& coop, OnMethod method,
                               const TruncationPolicy& policy) {
  OnEntanglement out;
  if (method == OnMethod::numeric) {
    const NegativityResult r = log_negativity(on_post_state(coop, policy).state, policy);
    out.value = r.log_negativity;
    out.deficit = r.trace_deficit;
    out.largest_block = r.largest_block;
    return out;
  }
  const OffsetWeights w = on_weights(occupations(coop), policy.eps_trunc);
  out.deficit = w.deficit;
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    const std::int64_t k = w.s_min + static_cast<std::int64_t>(i);
    const double e = method == OnMethod::average ? perfect_entanglement(coop, k)
                                                 : perfect_entanglement_gaussian(coop, k);
    out.value += w.weights[i] * e;
  }
  return out;
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::perfect: return "perfect";
    case Channel::imperfect: return "imperfect";
    case Channel::off: return "off";
    case Channel::on: return "on";
  }
  return "unknown";
}

}  // namespace entconc
