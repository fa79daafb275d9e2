#ifndef FAIRTV_REPAIR_HPP
#define FAIRTV_REPAIR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairtv/errors.hpp"
#include "fairtv/lp.hpp"
#include "fairtv/prob_core.hpp"

namespace fairtv {

// Per-group conditional joints P_s(x, y) with group weights pi = (pi_0, pi_1).
struct GroupData {
  JointTable joint_0;
  JointTable joint_1;
  Pmf pi;

  GroupData(JointTable j0, JointTable j1, Pmf group_weights)
      : joint_0(std::move(j0)), joint_1(std::move(j1)), pi(std::move(group_weights)) {
    if (joint_0.x_alphabet() != joint_1.x_alphabet() ||
        joint_0.y_alphabet() != joint_1.y_alphabet()) {
      throw DimensionError("GroupData: group joints on different alphabets");
    }
    if (pi.size() != 2) throw DimensionError("GroupData: pi must have two entries");
    if (pi[0] <= 0.0 || pi[1] <= 0.0) {
      throw InvalidParameter("GroupData: group weights must be positive");
    }
  }

  const JointTable& joint(int s) const { return s == 0 ? joint_0 : joint_1; }
  const Alphabet& x_alphabet() const { return joint_0.x_alphabet(); }
  const Alphabet& y_alphabet() const { return joint_0.y_alphabet(); }
};

// A solved repair: one channel per group plus the achieved figures of merit.
struct RepairPlan {
  Channel channel_0;
  Channel channel_1;
  double rho = 0.0;
  double objective = 0.0;   // achieved sum_s pi_s * d_TV(repaired joint, joint)
  double parity_gap = 0.0;  // achieved d_TV between the repaired group marginals

  const Channel& channel(int s) const { return s == 0 ? channel_0 : channel_1; }
};

namespace detail {

// Variable layout of the approximate-fairness program: the two channels
// first, then the joint-deviation epigraph block, then the marginal-gap
// epigraph block.
struct PRhoLayout {
  std::size_t n;   // x alphabet size
  std::size_t ny;  // y alphabet size

  int t(int s, std::size_t x, std::size_t xt) const {
    return static_cast<int>(static_cast<std::size_t>(s) * n * n + x * n + xt);
  }
  int u(int s, std::size_t xt, std::size_t y) const {
    return static_cast<int>(2 * n * n + static_cast<std::size_t>(s) * n * ny + xt * ny + y);
  }
  int v(std::size_t xt) const {
    return static_cast<int>(2 * n * n + 2 * n * ny + xt);
  }
  int total() const { return static_cast<int>(2 * n * n + 2 * n * ny + n); }
};

}  // namespace detail

// LP for: minimize sum_s pi_s d_TV(repaired joint_s, joint_s)
// subject to d_TV(repaired marginal_1, repaired marginal_0) <= rho,
// over row-stochastic channels. Absolute values enter through paired
// epigraph inequalities.
inline LpProblem build_p_rho(const GroupData& data, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw InvalidParameter("build_p_rho: rho must lie in [0, 1]");
  }
  const detail::PRhoLayout L{data.x_alphabet().size(), data.y_alphabet().size()};
  const std::size_t n = L.n, ny = L.ny;
  LpProblem p(L.total());

  std::vector<Pmf> q = {marginal_x(data.joint_0), marginal_x(data.joint_1)};

  for (int s = 0; s < 2; ++s) {
    const JointTable& joint = data.joint(s);
    const double pi_s = data.pi[static_cast<std::size_t>(s)];
    for (std::size_t x = 0; x < n; ++x) {
      // Row stochasticity.
      LpRow row;
      row.reserve(n);
      for (std::size_t xt = 0; xt < n; ++xt) row.push_back({L.t(s, x, xt), 1.0});
      p.add_eq(std::move(row), 1.0);
      // Zero-mass inputs: the objective never sees this row, pin it to the
      // identity for determinism.
      if (q[s][x] == 0.0) p.set_lower(L.t(s, x, x), 1.0);
    }
    for (std::size_t xt = 0; xt < n; ++xt) {
      for (std::size_t y = 0; y < ny; ++y) {
        p.set_objective(L.u(s, xt, y), 0.5 * pi_s);
        // |sum_x T_s(xt|x) P_s(x,y) - P_s(xt,y)| <= u_{s,xt,y}
        LpRow pos, neg;
        for (std::size_t x = 0; x < n; ++x) {
          const double c = joint(x, y);
          if (c != 0.0) {
            pos.push_back({L.t(s, x, xt), c});
            neg.push_back({L.t(s, x, xt), -c});
          }
        }
        pos.push_back({L.u(s, xt, y), -1.0});
        neg.push_back({L.u(s, xt, y), -1.0});
        p.add_ineq(std::move(pos), joint(xt, y));
        p.add_ineq(std::move(neg), -joint(xt, y));
      }
    }
  }

  // |sum_x T_1(xt|x) q_1(x) - sum_x T_0(xt|x) q_0(x)| <= v_xt
  for (std::size_t xt = 0; xt < n; ++xt) {
    LpRow pos, neg;
    for (std::size_t x = 0; x < n; ++x) {
      if (q[1][x] != 0.0) {
        pos.push_back({L.t(1, x, xt), q[1][x]});
        neg.push_back({L.t(1, x, xt), -q[1][x]});
      }
      if (q[0][x] != 0.0) {
        pos.push_back({L.t(0, x, xt), -q[0][x]});
        neg.push_back({L.t(0, x, xt), q[0][x]});
      }
    }
    pos.push_back({L.v(xt), -1.0});
    neg.push_back({L.v(xt), -1.0});
    p.add_ineq(std::move(pos), 0.0);
    p.add_ineq(std::move(neg), 0.0);
  }
  // (1/2) sum_xt v_xt <= rho
  LpRow parity;
  parity.reserve(n);
  for (std::size_t xt = 0; xt < n; ++xt) parity.push_back({L.v(xt), 0.5});
  p.add_ineq(std::move(parity), rho);

  return p;
}

namespace detail {

inline Channel extract_channel(const std::vector<double>& point, const PRhoLayout& L,
                               int s, const Alphabet& alphabet) {
  std::vector<std::vector<double>> rows(L.n, std::vector<double>(L.n, 0.0));
  for (std::size_t x = 0; x < L.n; ++x) {
    double sum = 0.0;
    for (std::size_t xt = 0; xt < L.n; ++xt) {
      double val = point[static_cast<std::size_t>(L.t(s, x, xt))];
      if (val < 0.0) {
        if (val < -1e-9) {
          throw InternalError("extract_channel: entry " + std::to_string(val) +
                              " below tolerance");
        }
        val = 0.0;
      }
      rows[x][xt] = val;
      sum += val;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw InternalError("extract_channel: row sums to " + std::to_string(sum));
    }
    for (std::size_t xt = 0; xt < L.n; ++xt) rows[x][xt] /= sum;
  }
  return Channel(alphabet, alphabet, std::move(rows));
}

}  // namespace detail

inline RepairPlan solve_repair(const GroupData& data, double rho) {
  LpProblem problem = build_p_rho(data, rho);
  LpSolution sol = solve(problem);
  if (sol.status != LpStatus::Optimal) {
    // The identity-on-both-groups point is feasible for every rho >= the
    // group gap, and the common-pushforward construction for smaller rho,
    // so a non-optimal status means the solver went wrong.
    throw InternalError(std::string("solve_repair: solver returned ") +
                        to_string(sol.status));
  }
  const detail::PRhoLayout L{data.x_alphabet().size(), data.y_alphabet().size()};
  Channel t0 = detail::extract_channel(sol.point, L, 0, data.x_alphabet());
  Channel t1 = detail::extract_channel(sol.point, L, 1, data.x_alphabet());

  const Pmf q0_rep = push_forward(t0, marginal_x(data.joint_0));
  const Pmf q1_rep = push_forward(t1, marginal_x(data.joint_1));
  const double gap = tv_distance(q1_rep, q0_rep);
  const double objective =
      data.pi[0] * tv_distance_joint(push_forward_joint(t0, data.joint_0), data.joint_0) +
      data.pi[1] * tv_distance_joint(push_forward_joint(t1, data.joint_1), data.joint_1);
  return RepairPlan{std::move(t0), std::move(t1), rho, objective, gap};
}

// LP for the weighted total-variation barycenter of q0 and q1.
inline LpProblem build_barycenter(const Pmf& q0, const Pmf& q1, const Pmf& pi) {
  if (q0.alphabet() != q1.alphabet()) {
    throw DimensionError("build_barycenter: q0 and q1 on different alphabets");
  }
  if (pi.size() != 2) throw DimensionError("build_barycenter: pi must have two entries");
  const std::size_t n = q0.size();
  // Layout: barycenter masses [0, n), deviations from q0 [n, 2n), from q1 [2n, 3n).
  LpProblem p(static_cast<int>(3 * n));
  LpRow total;
  total.reserve(n);
  for (std::size_t x = 0; x < n; ++x) {
    const int qb = static_cast<int>(x);
    const int a = static_cast<int>(n + x);
    const int b = static_cast<int>(2 * n + x);
    p.set_objective(a, 0.5 * pi[0]);
    p.set_objective(b, 0.5 * pi[1]);
    p.add_ineq({{qb, 1.0}, {a, -1.0}}, q0[x]);
    p.add_ineq({{qb, -1.0}, {a, -1.0}}, -q0[x]);
    p.add_ineq({{qb, 1.0}, {b, -1.0}}, q1[x]);
    p.add_ineq({{qb, -1.0}, {b, -1.0}}, -q1[x]);
    total.push_back({qb, 1.0});
  }
  p.add_eq(std::move(total), 1.0);
  return p;
}

// Closed form of the barycenter optimum: moving the minority-weight
// distribution all the way costs min(pi_0, pi_1) per unit of distance and
// no split of the movement does better.
inline double barycenter_value(const Pmf& q0, const Pmf& q1, const Pmf& pi) {
  if (pi.size() != 2) throw DimensionError("barycenter_value: pi must have two entries");
  return std::min(pi[0], pi[1]) * tv_distance(q0, q1);
}

inline std::vector<RepairPlan> sweep(const GroupData& data, const std::vector<double>& rhos) {
  std::vector<RepairPlan> plans;
  plans.reserve(rhos.size());
  for (double rho : rhos) plans.push_back(solve_repair(data, rho));
  return plans;
}

}  // namespace fairtv

#endif  // FAIRTV_REPAIR_HPP
