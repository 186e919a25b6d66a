#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "entconc/channels.hpp"
#include "entconc/error.hpp"
#include "entconc/negativity.hpp"
#include "oracles.hpp"

using namespace entconc;

namespace {

LadderPure ladder(std::int64_t offset, std::vector<double> c) {
  LadderPure s;
  s.offset = offset;
  s.coeffs = std::move(c);
  return s;
}

std::vector<oracle::Component> as_oracle(const LadderMixture& mix) {
  std::vector<oracle::Component> out;
  for (const auto& c : mix.components()) out.push_back({c.weight, c.state.offset, c.state.coeffs});
  return out;
}

}  // namespace

TEST_CASE("Schmidt shortcut") {
  CHECK(schmidt_log_negativity(ladder(0, {1.0})) == 0.0);
  CHECK(schmidt_log_negativity(ladder(0, {M_SQRT1_2, M_SQRT1_2})) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(schmidt_log_negativity(ladder(0, {})), InvalidInput);

  const double z = 80.0 / 169;
  const LadderPure s = pair_ladder(z, 0, 1e-30);
  CHECK(schmidt_log_negativity(s) ==
        doctest::Approx(std::log((1 + std::sqrt(z)) / (1 - std::sqrt(z)))).epsilon(1e-10));
}

TEST_CASE("mixture validation") {
  std::vector<LadderComponent> unordered{{0.5, ladder(2, {1.0})}, {0.5, ladder(1, {1.0})}};
  CHECK_THROWS_AS(LadderMixture(unordered, 0.0), InvalidInput);
  std::vector<LadderComponent> negative{{-0.1, ladder(0, {1.0})}};
  CHECK_THROWS_AS(LadderMixture(negative, 0.0), InvalidInput);
  CHECK_THROWS_AS(log_negativity(LadderMixture()), InvalidInput);

  std::vector<LadderComponent> ok{{0.25, ladder(1, {1.0})}, {0.75, ladder(3, {0.6, 0.8})}};
  const LadderMixture mix(ok, 0.0);
  CHECK(mix.min_offset() == 1);
  CHECK(mix.max_offset() == 3);
  CHECK(mix.find(3) != nullptr);
  CHECK(mix.find(2) == nullptr);
  CHECK(mix.captured_trace() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("smallest blocks of a pure ladder") {
  const double z = 80.0 / 169;
  const int q = 2;
  const LadderMixture mix = LadderMixture::pure(pair_ladder(z, q, 1e-14));
  const PtBlock b0 = build_pt_block(mix, q);
  REQUIRE(b0.matrix.rows() == 1);
  CHECK(b0.matrix(0, 0) == doctest::Approx(oracle::f(z, q, 0)).epsilon(1e-13));

  const PtBlock b1 = build_pt_block(mix, q + 1);
  REQUIRE(b1.matrix.rows() == 2);
  CHECK(b1.matrix(0, 0) == 0.0);
  CHECK(b1.matrix(1, 1) == 0.0);
  CHECK(b1.matrix(0, 1) == doctest::Approx(std::sqrt(oracle::f(z, q, 0) * oracle::f(z, q, 1))).epsilon(1e-13));
  CHECK(b1.matrix(0, 1) == b1.matrix(1, 0));

  const auto ev = block_eigenvalues(b1);
  CHECK(ev[0] == doctest::Approx(-b1.matrix(0, 1)).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(b1.matrix(0, 1)).epsilon(1e-14));
}

TEST_CASE("blocks are exactly symmetric and the retained trace is tracked") {
  OffsetWeights w;
  w.s_min = 1;
  w.weights = {0.5, 0.3, 0.2};
  const LadderMixture mix = pair_mixture(0.6, w, TruncationPolicy{});
  for (const auto& b : build_pt_blocks(mix)) CHECK(b.matrix == b.matrix.transpose());
  CHECK(mix.captured_trace() >= 1 - 1e-12);
  CHECK(mix.captured_trace() <= 1 + 1e-15);
  CHECK(1 - mix.captured_trace() == doctest::Approx(mix.ladder_deficit()).epsilon(1e-2));
}

TEST_CASE("block eigenvalues") {
  PtBlock one;
  one.matrix = Eigen::MatrixXd::Constant(1, 1, 0.37);
  CHECK(block_eigenvalues(one) == std::vector<double>{0.37});

  PtBlock two;
  two.matrix.resize(2, 2);
  const double a = 0.3, b = -0.2, c = 0.1;
  two.matrix << a, b, b, c;
  const auto ev = block_eigenvalues(two);
  const double mid = (a + c) / 2, rad = std::sqrt((a - c) * (a - c) / 4 + b * b);
  CHECK(ev[0] == doctest::Approx(mid - rad).epsilon(1e-15));
  CHECK(ev[1] == doctest::Approx(mid + rad).epsilon(1e-15));

  // invariants of a larger block: trace and Frobenius norm
  const LadderMixture mix = LadderMixture::pure(pair_ladder(0.78125, 3, 1e-12));
  const PtBlock big = build_pt_block(mix, 60);
  const auto evs = block_eigenvalues(big);
  const double tr = std::accumulate(evs.begin(), evs.end(), 0.0);
  const double sq = std::transform_reduce(evs.begin(), evs.end(), 0.0, std::plus<>(), [](double x) { return x * x; });
  const double norm = big.matrix.norm();
  CHECK(std::abs(tr - big.matrix.trace()) < 1e-12 * norm);
  CHECK(std::abs(sq - norm * norm) < 1e-12 * norm * norm);
  CHECK(std::is_sorted(evs.begin(), evs.end()));
}

TEST_CASE("pure ladder eigen table at q = 0") {
  const double z = 80.0 / 169;
  const LadderPure s = pair_ladder(z, 0, 1e-14);
  const auto pmax = static_cast<std::int64_t>(s.coeffs.size()) - 1;
  const LadderMixture mix = LadderMixture::pure(s);
  for (std::int64_t Q : {0, 1, 2, 5, 10, 17}) {
    REQUIRE(Q <= pmax);
    std::vector<double> expected;
    for (std::int64_t p1 = 0; 2 * p1 <= Q; ++p1) {
      const std::int64_t p2 = Q - p1;
      const double fp1 = oracle::f(z, 0, p1), fp2 = oracle::f(z, 0, p2);
      if (p1 == p2) {
        expected.push_back(fp1);
      } else {
        expected.push_back(std::sqrt(fp1 * fp2));
        expected.push_back(-std::sqrt(fp1 * fp2));
      }
    }
    std::sort(expected.begin(), expected.end());
    const auto ev = block_eigenvalues(build_pt_block(mix, Q));
    REQUIRE(ev.size() == expected.size());
    for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-11));
  }
}

TEST_CASE("zeta = 0 is separable") {
  const LadderMixture pure = LadderMixture::pure(pair_ladder(0.0, 3, 1e-12));
  for (const auto& b : build_pt_blocks(pure)) {
    CHECK(b.matrix.rows() == 1);
  }
  const auto r = log_negativity(pure);
  CHECK(r.negativity == 0.0);
  CHECK(r.log_negativity == 0.0);

  OffsetWeights w;
  w.weights = {0.7, 0.2, 0.1};
  const auto mixed = log_negativity(pair_mixture(0.0, w, TruncationPolicy{}));
  CHECK(mixed.log_negativity == 0.0);
}

TEST_CASE("route equivalence for pure ladders") {
  for (double z : {0.1, 80.0 / 169, 0.78125}) {
    for (int q : {0, 1, 4, 10}) {
      const LadderPure s = pair_ladder(z, q, 1e-12);
      const double schmidt = schmidt_log_negativity(s);
      const auto eig = log_negativity(LadderMixture::pure(s));
      CHECK(std::abs(eig.log_negativity - schmidt) < 1e-9);
    }
  }
}

TEST_CASE("block route matches the dense partial transpose") {
  OffsetWeights w;
  w.s_min = 1;
  w.weights = {0.55, 0.25, 0.15, 0.05};
  for (double z : {0.1, 0.35}) {
    TruncationPolicy p;
    p.eps_trunc = 1e-8;
    const LadderMixture mix = pair_mixture(z, w, p);
    const double dense = oracle::dense_negativity(as_oracle(mix));
    const auto r = log_negativity(mix, p);
    CHECK(r.negativity == doctest::Approx(dense).epsilon(1e-11));
    CHECK(r.negativity > 0.0);
  }
}

TEST_CASE("truncation refinement never loses negativity beyond the deficit") {
  const auto occ = occupations(Cooperativities(10, 5));
  const OffsetWeights w = imperfect_weights(occ, DetectorEfficiency(0.8), 2, 1e-14);
  TruncationPolicy coarse, fine;
  coarse.eps_trunc = 1e-6;
  fine.eps_trunc = 1e-12;
  const auto rc = log_negativity(pair_mixture(occ.zeta, w, coarse), coarse);
  const auto rf = log_negativity(pair_mixture(occ.zeta, w, fine), fine);
  CHECK(rf.negativity >= rc.negativity - rc.trace_deficit);
  CHECK(rc.trace_deficit <= coarse.eps_trunc);
  CHECK(rf.trace_deficit <= fine.eps_trunc);
  CHECK(rf.largest_block >= rc.largest_block);
}

TEST_CASE("threshold ignores numerically zero eigenvalues") {
  // product state |1,1>: partial transpose has a single positive entry
  const LadderMixture mix = LadderMixture::pure(ladder(0, {0.0, 1.0}));
  const auto r = log_negativity(mix);
  CHECK(r.negativity == 0.0);
  CHECK(r.captured_trace == 1.0);
}
