#include "entconc/truncation.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "entconc/error.hpp"

namespace entconc {

TailCut tail_cut(const std::function<double(std::int64_t)>& term, double eps,
                 std::int64_t max_terms) {
  if (!(eps > 0.0)) throw InvalidInput("tail_cut: eps must be positive");

  // Forward pass: collect terms until the geometric bound on the remainder
  // is far below eps.
  std::vector<double> terms;
  terms.push_back(term(0));
  double far_bound = 0.0;
  double next = term(1);
  for (std::int64_t k = 0;; ++k) {
    if (k + 2 > max_terms) {
      throw NumericalFailure("tail_cut: tail above " + std::to_string(eps) + " after " +
                             std::to_string(max_terms) + " terms");
    }
    const double after = term(k + 2);
    if (!std::isfinite(next) || !std::isfinite(after) || next < 0.0 || after < 0.0) {
      throw NumericalFailure("tail_cut: non-finite or negative series term");
    }
    terms.push_back(next);
    if (next == 0.0 && after == 0.0) {
      far_bound = 0.0;
      break;
    }
    if (next > 0.0) {
      const double ratio = after / next;
      if (ratio < 1.0) {
        // sum_{j > k} term(j) <= next / (1 - ratio)
        const double bound = next / (1.0 - ratio);
        if (bound <= eps * 1e-6) {
          // Remainder beyond index k+1 is bounded by after / (1 - ratio).
          far_bound = after / (1.0 - ratio);
          break;
        }
      }
    }
    next = after;
  }

  // Backward pass: tail[n] = sum_{k > n} term(k).
  const auto last = static_cast<std::int64_t>(terms.size()) - 1;
  double tail = far_bound;
  TailCut best{last, far_bound};
  for (std::int64_t n = last; n >= 0; --n) {
    if (tail > eps) break;
    best = {n, tail};
    tail += terms[static_cast<std::size_t>(n)];
  }
  return best;
}

}  // namespace entconc
