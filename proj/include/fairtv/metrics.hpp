#ifndef FAIRTV_METRICS_HPP
#define FAIRTV_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "fairtv/errors.hpp"
#include "fairtv/prob_core.hpp"
#include "fairtv/repair.hpp"

namespace fairtv {

// Deterministic model: a total map from input indices to label indices.
struct Classifier {
  Alphabet input;
  Alphabet output;
  std::vector<std::size_t> mapping;  // mapping[x] = label index

  Classifier(Alphabet in, Alphabet out, std::vector<std::size_t> map)
      : input(std::move(in)), output(std::move(out)), mapping(std::move(map)) {
    if (mapping.size() != input.size()) {
      throw DimensionError("Classifier: mapping length != input alphabet size");
    }
    for (std::size_t y : mapping) {
      if (y >= output.size()) throw DimensionError("Classifier: label index out of range");
    }
  }

  std::size_t operator()(std::size_t x) const { return mapping[x]; }

  // Output distribution of the model under input distribution q.
  Pmf push(const Pmf& q) const {
    if (q.alphabet() != input) throw DimensionError("Classifier: pmf alphabet mismatch");
    std::vector<double> out(output.size(), 0.0);
    for (std::size_t x = 0; x < mapping.size(); ++x) out[mapping[x]] += q[x];
    return Pmf(output, std::move(out));
  }
};

// Bounded loss values[predicted][actual] with |value| <= sigma.
struct LossTable {
  std::vector<std::vector<double>> values;
  double sigma;

  LossTable(std::vector<std::vector<double>> vals, double bound)
      : values(std::move(vals)), sigma(bound) {
    if (!(sigma > 0.0)) throw InvalidParameter("LossTable: sigma must be positive");
    for (const auto& row : values) {
      for (double v : row) {
        if (std::abs(v) > sigma) {
          throw InvalidParameter("LossTable: entry exceeds sigma");
        }
      }
    }
  }
};

// Largest per-output probability gap between the two groups.
inline double disparate_impact(const Classifier& m, const Pmf& q1, const Pmf& q0) {
  if (q1.alphabet() != q0.alphabet()) {
    throw DimensionError("disparate_impact: group pmfs on different alphabets");
  }
  const Pmf out1 = m.push(q1);
  const Pmf out0 = m.push(q0);
  double worst = 0.0;
  for (std::size_t y = 0; y < out1.size(); ++y) {
    worst = std::max(worst, std::abs(out1[y] - out0[y]));
  }
  return worst;
}

// Model-free upper bound on disparate impact: twice the TV distance of the
// repaired group marginals.
inline double theorem1_bound(const Pmf& q1, const Pmf& q0) {
  return 2.0 * tv_distance(q1, q0);
}

// |E loss after repair - E loss before|, both expectations exact sums.
inline double utility_degradation(const Classifier& m, const LossTable& loss,
                                  const GroupData& data, const RepairPlan& plan) {
  if (m.input != data.x_alphabet() || m.output != data.y_alphabet()) {
    throw DimensionError("utility_degradation: classifier alphabets mismatch");
  }
  double before = 0.0, after = 0.0;
  for (int s = 0; s < 2; ++s) {
    const double pi_s = data.pi[static_cast<std::size_t>(s)];
    const JointTable& orig = data.joint(s);
    const JointTable rep = push_forward_joint(plan.channel(s), orig);
    for (std::size_t x = 0; x < m.input.size(); ++x) {
      const std::size_t pred = m(x);
      for (std::size_t y = 0; y < m.output.size(); ++y) {
        before += pi_s * orig(x, y) * loss.values[pred][y];
        after += pi_s * rep(x, y) * loss.values[pred][y];
      }
    }
  }
  return std::abs(after - before);
}

// 2 sigma E{d_TV(repaired joint, joint)}: dominates utility_degradation for
// every classifier and sigma-bounded loss.
inline double theorem2_bound(double sigma, const GroupData& data, const RepairPlan& plan) {
  if (!(sigma > 0.0)) throw InvalidParameter("theorem2_bound: sigma must be positive");
  double expected_tv = 0.0;
  for (int s = 0; s < 2; ++s) {
    expected_tv += data.pi[static_cast<std::size_t>(s)] *
                   tv_distance_joint(push_forward_joint(plan.channel(s), data.joint(s)),
                                     data.joint(s));
  }
  return 2.0 * sigma * expected_tv;
}

// Accuracy-change bound: the sigma = 1 specialization for 0/1 loss.
inline double accuracy_gap_bound(const GroupData& data, const RepairPlan& plan) {
  return theorem2_bound(1.0, data, plan);
}

// Worst-case error of the best deterministic group estimator, by exhaustive
// search over all indicator functions of the alphabet.
inline double adversary_min_error(const Pmf& q1, const Pmf& q0) {
  if (q1.alphabet() != q0.alphabet()) {
    throw DimensionError("adversary_min_error: pmfs on different alphabets");
  }
  const std::size_t n = q1.size();
  if (n > 20) {
    throw AlphabetTooLarge("adversary_min_error: alphabet size " + std::to_string(n) +
                           " exceeds exhaustive limit 20");
  }
  double best = 1.0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    // mask bit x set: the estimator answers 1 on symbol x.
    double q1_in = 0.0, q0_in = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (mask >> x & 1) {
        q1_in += q1[x];
        q0_in += q0[x];
      }
    }
    const double err1 = 1.0 - q1_in;  // answers 0 although S = 1
    const double err0 = q0_in;        // answers 1 although S = 0
    best = std::min(best, std::max(err1, err0));
  }
  return best;
}

}  // namespace fairtv

#endif  // FAIRTV_METRICS_HPP
