#pragma once

// Logarithmic negativity of two-mode states built from Schmidt ladders
// |p, p+s>. The partial transpose of any mixture of ladders splits into
// independent real symmetric blocks labelled by the total quanta Q.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "entconc/truncation.hpp"

namespace entconc {

/// sum_p coeffs[p] |p, p + offset>, truncated; tail_deficit is the norm
/// discarded by the truncation (coefficients are not renormalized).
struct LadderPure {
  std::int64_t offset = 0;
  std::vector<double> coeffs;
  double tail_deficit = 0.0;

  double norm_squared() const;
};

/// One weighted term w |Psi_s><Psi_s| of a ladder mixture.
struct LadderComponent {
  double weight = 0.0;
  LadderPure state;
};

/// sum_s w(s) |Psi_s><Psi_s| with distinct, increasing offsets s.
class LadderMixture {
 public:
  LadderMixture() = default;
  /// Components must have strictly increasing offsets and nonnegative weights.
  LadderMixture(std::vector<LadderComponent> components, double weight_deficit);

  static LadderMixture pure(LadderPure state);

  const std::vector<LadderComponent>& components() const noexcept { return components_; }
  std::int64_t min_offset() const;
  std::int64_t max_offset() const;
  /// Probability mass dropped when truncating the offset sum.
  double weight_deficit() const noexcept { return weight_deficit_; }
  /// sum_s w(s) * tail_deficit(s)
  double ladder_deficit() const;
  /// Trace of the retained (truncated) density matrix.
  double captured_trace() const;
  /// Component for offset s, or nullptr.
  const LadderComponent* find(std::int64_t offset) const;

 private:
  std::vector<LadderComponent> components_;
  double weight_deficit_ = 0.0;
};

/// Block of the partial transpose with total quanta Q. Row/column i stands
/// for first-mode photon number a = first_index + i; entry (a, a') is
/// sqrt(c_a(s) c_a'(s)) w(s) with s = Q - a - a'.
struct PtBlock {
  std::int64_t total_quanta = 0;
  std::int64_t first_index = 0;
  Eigen::MatrixXd matrix;
};

/// E_N = 2 ln sum_p |c_p| for a pure ladder state.
double schmidt_log_negativity(const LadderPure& state);

/// All nonzero blocks, in increasing Q.
std::vector<PtBlock> build_pt_blocks(const LadderMixture& mix);

/// Block for a single Q (possibly all-zero or empty).
PtBlock build_pt_block(const LadderMixture& mix, std::int64_t total_quanta);

/// Eigenvalues in ascending order. `block_index` labels error messages.
std::vector<double> block_eigenvalues(const PtBlock& block, std::int64_t block_index = -1);

struct NegativityResult {
  double log_negativity = 0.0;
  double negativity = 0.0;       // N = sum of |negative eigenvalues|
  double captured_trace = 0.0;   // trace of the retained density matrix
  double trace_deficit = 0.0;    // 1 - captured_trace, clamped at 0
  std::int64_t block_count = 0;
  std::int64_t largest_block = 0;
};

/// ln(1 + 2N) over all partial-transpose blocks. Blocks are evaluated
/// concurrently (see parallel.hpp) and summed in increasing Q.
NegativityResult log_negativity(const LadderMixture& mix, const TruncationPolicy& policy = {});

}  // namespace entconc
