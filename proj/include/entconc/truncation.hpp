#pragma once

#include <cstdint>
#include <functional>

namespace entconc {

struct TruncationPolicy {
  // Probability mass allowed to be discarded from any infinite Fock sum.
  double eps_trunc = 1e-12;
  // Eigenvalues below -eps_eig * ||block|| count as negative.
  double eps_eig = 1e-12;
};

struct TailCut {
  std::int64_t index = 0;  // last retained term
  double tail = 0.0;       // upper bound on sum_{k > index} term(k)
};

/// Smallest n such that sum_{k > n} term(k) <= eps.
///
/// `term` must describe a nonnegative unimodal series whose successive ratio
/// term(k+1)/term(k) is nonincreasing once it drops below one (negative
/// binomial and geometric series qualify). The far tail is bounded by the
/// geometric majorant term(k+1) / (1 - ratio), and the remaining tails are
/// accumulated backwards, so eps well below machine epsilon is honoured.
///
/// Throws NumericalFailure if the tail does not fall below eps within
/// `max_terms` terms.
TailCut tail_cut(const std::function<double(std::int64_t)>& term, double eps,
                 std::int64_t max_terms = 2'000'000);

inline std::int64_t tail_cutoff(const std::function<double(std::int64_t)>& term, double eps) {
  return tail_cut(term, eps).index;
}

}  // namespace entconc
