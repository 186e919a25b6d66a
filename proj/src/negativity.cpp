#include "entconc/negativity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entconc/error.hpp"
#include "entconc/parallel.hpp"

namespace entconc {

double LadderPure::norm_squared() const {
  return std::transform_reduce(coeffs.begin(), coeffs.end(), 0.0, std::plus<>(),
                               [](double c) { return c * c; });
}

LadderMixture::LadderMixture(std::vector<LadderComponent> components, double weight_deficit)
    : components_(std::move(components)), weight_deficit_(weight_deficit) {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
      throw InvalidInput("LadderMixture: weights must be finite and nonnegative");
    }
    if (c.state.offset < 0) throw InvalidInput("LadderMixture: offsets must be nonnegative");
    if (i > 0 && c.state.offset <= components_[i - 1].state.offset) {
      throw InvalidInput("LadderMixture: offsets must be strictly increasing");
    }
  }
}

LadderMixture LadderMixture::pure(LadderPure state) {
  std::vector<LadderComponent> comps;
  comps.push_back({1.0, std::move(state)});
  return LadderMixture(std::move(comps), 0.0);
}

std::int64_t LadderMixture::min_offset() const {
  return components_.empty() ? 0 : components_.front().state.offset;
}

std::int64_t LadderMixture::max_offset() const {
  return components_.empty() ? 0 : components_.back().state.offset;
}

double LadderMixture::ladder_deficit() const {
  double total = 0.0;
  for (const auto& c : components_) total += c.weight * c.state.tail_deficit;
  return total;
}

double LadderMixture::captured_trace() const {
  double total = 0.0;
  for (const auto& c : components_) total += c.weight * c.state.norm_squared();
  return total;
}

const LadderComponent* LadderMixture::find(std::int64_t offset) const {
  auto it = std::lower_bound(components_.begin(), components_.end(), offset,
                             [](const LadderComponent& c, std::int64_t s) { return c.state.offset < s; });
  return (it != components_.end() && it->state.offset == offset) ? &*it : nullptr;
}

double schmidt_log_negativity(const LadderPure& state) {
  if (state.coeffs.empty()) throw InvalidInput("schmidt_log_negativity: empty coefficient sequence");
  double sum = 0.0;
  for (double c : state.coeffs) sum += std::abs(c);
  if (!(sum > 0.0)) throw InvalidInput("schmidt_log_negativity: zero state");
  return 2.0 * std::log(sum);
}

namespace {

// Retained first-mode photon numbers of component s inside block Q.
struct RowRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  bool empty() const { return hi < lo; }
};

RowRange component_rows(const LadderComponent& comp, std::int64_t total_quanta) {
  const std::int64_t s = comp.state.offset;
  const auto pmax = static_cast<std::int64_t>(comp.state.coeffs.size()) - 1;
  const std::int64_t free_quanta = total_quanta - s;  // a + a'
  if (pmax < 0 || free_quanta < 0) return {};
  return {std::max<std::int64_t>(0, free_quanta - pmax), std::min(pmax, free_quanta)};
}

std::int64_t max_total_quanta(const LadderMixture& mix) {
  std::int64_t q_max = -1;
  for (const auto& c : mix.components()) {
    const auto pmax = static_cast<std::int64_t>(c.state.coeffs.size()) - 1;
    q_max = std::max(q_max, c.state.offset + 2 * pmax);
  }
  return q_max;
}

}  // namespace

PtBlock build_pt_block(const LadderMixture& mix, std::int64_t total_quanta) {
  PtBlock block;
  block.total_quanta = total_quanta;
  std::int64_t lo = 0, hi = -1;
  bool any = false;
  for (const auto& comp : mix.components()) {
    const RowRange r = component_rows(comp, total_quanta);
    if (r.empty()) continue;
    lo = any ? std::min(lo, r.lo) : r.lo;
    hi = any ? std::max(hi, r.hi) : r.hi;
    any = true;
  }
  if (!any) return block;

  block.first_index = lo;
  const std::int64_t n = hi - lo + 1;
  block.matrix = Eigen::MatrixXd::Zero(n, n);
  for (const auto& comp : mix.components()) {
    const RowRange r = component_rows(comp, total_quanta);
    const std::int64_t free_quanta = total_quanta - comp.state.offset;
    const auto& c = comp.state.coeffs;
    for (std::int64_t a = r.lo; a <= r.hi; ++a) {
      const std::int64_t b = free_quanta - a;
      // w * (c_a c_b) keeps (a, b) and (b, a) bitwise equal.
      block.matrix(a - lo, b - lo) =
          comp.weight * (c[static_cast<std::size_t>(a)] * c[static_cast<std::size_t>(b)]);
    }
  }
  return block;
}

std::vector<PtBlock> build_pt_blocks(const LadderMixture& mix) {
  std::vector<PtBlock> blocks;
  const std::int64_t q_max = max_total_quanta(mix);
  for (std::int64_t q = mix.min_offset(); q <= q_max; ++q) {
    PtBlock b = build_pt_block(mix, q);
    if (b.matrix.size() == 0 || b.matrix.isZero(0.0)) continue;
    blocks.push_back(std::move(b));
  }
  return blocks;
}

std::vector<double> block_eigenvalues(const PtBlock& block, std::int64_t block_index) {
  if (block.matrix.rows() == 0) return {};
  if (block.matrix.rows() == 1) return {block.matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigensolver did not converge for block " + std::to_string(block_index) +
                           " (Q=" + std::to_string(block.total_quanta) + ")");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

NegativityResult log_negativity(const LadderMixture& mix, const TruncationPolicy& policy) {
  NegativityResult result;
  if (mix.components().empty()) throw InvalidInput("log_negativity: empty mixture");

  const std::int64_t q_min = mix.min_offset();
  const std::int64_t q_max = max_total_quanta(mix);
  const auto n_blocks = static_cast<std::size_t>(std::max<std::int64_t>(0, q_max - q_min + 1));

  std::vector<double> negative_sum(n_blocks, 0.0);
  std::vector<std::int64_t> sizes(n_blocks, 0);
  parallel_for(n_blocks, [&](std::size_t i) {
    const auto q = q_min + static_cast<std::int64_t>(i);
    const PtBlock block = build_pt_block(mix, q);
    if (block.matrix.size() == 0 || block.matrix.isZero(0.0)) return;
    sizes[i] = block.matrix.rows();
    const auto ev = block_eigenvalues(block, static_cast<std::int64_t>(i));
    const double scale = std::max(std::abs(ev.front()), std::abs(ev.back()));
    const double threshold = -policy.eps_eig * scale;
    double neg = 0.0;
    for (double lambda : ev) {
      if (lambda < threshold) neg -= lambda;
    }
    negative_sum[i] = neg;
  });

  for (std::size_t i = 0; i < n_blocks; ++i) {
    result.negativity += negative_sum[i];
    if (sizes[i] > 0) ++result.block_count;
    result.largest_block = std::max(result.largest_block, sizes[i]);
  }
  if (!std::isfinite(result.negativity)) throw NumericalFailure("log_negativity: non-finite negativity");
  result.log_negativity = std::log1p(2.0 * result.negativity);
  result.captured_trace = mix.captured_trace();
  result.trace_deficit = std::max(0.0, 1.0 - result.captured_trace);
  return result;
}

}  // namespace entconc
