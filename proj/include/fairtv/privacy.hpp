#ifndef FAIRTV_PRIVACY_HPP
#define FAIRTV_PRIVACY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fairtv/errors.hpp"
#include "fairtv/prob_core.hpp"
#include "fairtv/repair.hpp"

namespace fairtv {

struct PrivacyBudget {
  double epsilon;

  explicit PrivacyBudget(double eps) : epsilon(eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
      throw InvalidParameter("PrivacyBudget: epsilon must be finite and nonnegative");
    }
  }
};

// Stay-or-switch channel: keep the symbol with probability 1 - exp(-eps),
// otherwise move to one of the n-1 other symbols uniformly. The diagonal is
// balanced against the off-diagonal sum so every row sums to 1 exactly.
inline Channel randomized_response(const PrivacyBudget& budget, std::size_t n) {
  if (n < 2) throw InvalidParameter("randomized_response: alphabet size must be >= 2");
  const double off = std::exp(-budget.epsilon) / static_cast<double>(n - 1);
  const double diag = 1.0 - off * static_cast<double>(n - 1);
  const Alphabet a = Alphabet::indexed(n);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, off));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = diag;
  return Channel(a, a, std::move(rows));
}

// Smallest eps such that the channel is eps-differentially private; infinity
// when some column mixes zero and nonzero entries.
inline double effective_epsilon(const Channel& t) {
  const std::size_t n = t.input_alphabet().size();
  if (t.output_alphabet().size() != n) {
    throw DimensionError("effective_epsilon: channel must be square");
  }
  double worst = 0.0;
  for (std::size_t xo = 0; xo < n; ++xo) {
    double col_min = std::numeric_limits<double>::infinity();
    double col_max = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      col_min = std::min(col_min, t(x, xo));
      col_max = std::max(col_max, t(x, xo));
    }
    if (col_max == 0.0) continue;  // column never produced; no constraint
    if (col_min == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::log(col_max / col_min));
  }
  return worst;
}

// Fairness guarantee of any eps-DP repair: d_TV of the group marginals is at
// most 1 - exp(-eps). The solid curve of the budget trade-off.
inline double dp_fairness_bound(const PrivacyBudget& budget) {
  return 1.0 - std::exp(-budget.epsilon);
}

// Best achievable expected joint distortion over eps-DP channels is at most
// exp(-eps). The dashed curve of the budget trade-off.
inline double dp_utility_bound(const PrivacyBudget& budget) {
  return std::exp(-budget.epsilon);
}

struct PrivacyFairnessReport {
  double epsilon = 0.0;
  double tv = 0.0;          // distance between the pushed group marginals
  double dobrushin = 0.0;   // contraction coefficient of the channel used
  double bound = 0.0;       // 1 - exp(-eps)
  bool holds = false;
};

// Push both group marginals through the stay-or-switch channel at budget eps
// and check the fairness bound along the contraction chain.
inline PrivacyFairnessReport verify_cor1(const PrivacyBudget& budget, const Pmf& q0,
                                         const Pmf& q1) {
  if (q0.alphabet() != q1.alphabet()) {
    throw DimensionError("verify_cor1: pmfs on different alphabets");
  }
  Channel t = randomized_response(budget, q0.size());
  // Rebuild on the callers' alphabet so the pushforward type-checks.
  t = Channel(q0.alphabet(), q0.alphabet(), t.rows());
  PrivacyFairnessReport report;
  report.epsilon = budget.epsilon;
  report.tv = tv_distance(push_forward(t, q1), push_forward(t, q0));
  report.dobrushin = dobrushin_coefficient(t);
  report.bound = dp_fairness_bound(budget);
  report.holds = report.tv <= report.bound + 1e-12;
  return report;
}

struct PrivacyUtilityReport {
  double epsilon = 0.0;
  double expected_tv = 0.0;      // E{d_TV(repaired joint, joint)} under the channel
  double bound_proof = 0.0;      // (n/(n-1)) exp(-eps), asserted
  double bound_statement = 0.0;  // exp(-eps), reported only
  bool holds_proof = false;
  bool holds_statement = false;
};

// Apply the stay-or-switch channel to both groups and compare the expected
// joint distortion against both published bounds. Only the larger one is a
// consequence of the construction; the smaller one is reported as observed.
inline PrivacyUtilityReport verify_cor3(const PrivacyBudget& budget, const GroupData& data) {
  const std::size_t n = data.x_alphabet().size();
  Channel t = randomized_response(budget, n);
  t = Channel(data.x_alphabet(), data.x_alphabet(), t.rows());
  double expected_tv = 0.0;
  for (int s = 0; s < 2; ++s) {
    expected_tv += data.pi[static_cast<std::size_t>(s)] *
                   tv_distance_joint(push_forward_joint(t, data.joint(s)), data.joint(s));
  }
  PrivacyUtilityReport report;
  report.epsilon = budget.epsilon;
  report.expected_tv = expected_tv;
  report.bound_proof =
      (static_cast<double>(n) / static_cast<double>(n - 1)) * std::exp(-budget.epsilon);
  report.bound_statement = std::exp(-budget.epsilon);
  report.holds_proof = expected_tv <= report.bound_proof + 1e-12;
  report.holds_statement = expected_tv <= report.bound_statement + 1e-12;
  return report;
}

}  // namespace fairtv

#endif  // FAIRTV_PRIVACY_HPP
