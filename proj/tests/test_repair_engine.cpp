#include "fairtv/repair.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fairtv/prob_core.hpp"
#include "lp_oracle.hpp"
#include "test_util.hpp"

namespace fairtv {
namespace {

using testutil::enumerate_vertices;
using testutil::random_group_data;
using testutil::random_pmf;

GroupData two_state_instance() {
  const Alphabet x = Alphabet::indexed(2, "x");
  const Alphabet y = Alphabet::indexed(2, "y");
  return GroupData(JointTable(x, y, {{0.50, 0.20}, {0.20, 0.10}}),
                   JointTable(x, y, {{0.10, 0.15}, {0.35, 0.40}}),
                   Pmf(Alphabet({"s0", "s1"}), {0.4, 0.6}));
}

TEST(BuildPRho, ChannelVariableCount) {
  std::mt19937_64 rng(21);
  const GroupData data = random_group_data(rng, 3, 2);
  const LpProblem p = build_p_rho(data, 0.1);
  const std::size_t n = 3, ny = 2;
  // Channel block first: 2|X|^2 = 18 decision variables, then the epigraph
  // auxiliaries for the objective and the constraint.
  EXPECT_EQ(static_cast<std::size_t>(p.num_vars()), 2 * n * n + 2 * n * ny + n);
  EXPECT_EQ(2 * n * n, 18u);
}

TEST(BuildPRho, RejectsBadRho) {
  std::mt19937_64 rng(22);
  const GroupData data = random_group_data(rng, 2, 2);
  EXPECT_THROW(build_p_rho(data, -0.1), InvalidParameter);
  EXPECT_THROW(build_p_rho(data, 1.5), InvalidParameter);
}

TEST(BuildPRho, SlackConstraintGivesZeroObjective) {
  std::mt19937_64 rng(23);
  const GroupData data = random_group_data(rng, 3, 2);
  const RepairPlan plan = solve_repair(data, 1.0);
  EXPECT_NEAR(plan.objective, 0.0, 1e-9);
}

// Dense grid search over the four free entries of a binary channel pair.
double grid_search_two_state(const GroupData& data, double rho) {
  const Pmf q0 = marginal_x(data.joint_0);
  const Pmf q1 = marginal_x(data.joint_1);
  struct Candidate {
    double cost;
    double pushed0;  // repaired marginal mass on symbol 0
  };
  auto enumerate = [&](int s) {
    const JointTable& joint = data.joint(s);
    const Pmf& q = (s == 0) ? q0 : q1;
    std::vector<Candidate> out;
    out.reserve(101 * 101);
    for (int ia = 0; ia <= 100; ++ia) {
      const double a = ia / 100.0;  // T(0|0)
      for (int ib = 0; ib <= 100; ++ib) {
        const double b = ib / 100.0;  // T(0|1)
        double l1 = 0.0;
        for (int y = 0; y < 2; ++y) {
          const double rep0 = a * joint(0, y) + b * joint(1, y);
          const double rep1 = (1 - a) * joint(0, y) + (1 - b) * joint(1, y);
          l1 += std::abs(rep0 - joint(0, y)) + std::abs(rep1 - joint(1, y));
        }
        out.push_back({0.5 * l1, a * q[0] + b * q[1]});
      }
    }
    return out;
  };
  const auto c0 = enumerate(0);
  const auto c1 = enumerate(1);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& u : c0) {
    for (const auto& v : c1) {
      if (std::abs(u.pushed0 - v.pushed0) > rho) continue;
      const double cost = data.pi[0] * u.cost + data.pi[1] * v.cost;
      best = std::min(best, cost);
    }
  }
  return best;
}

TEST(SolveRepair, MatchesGridSearchOracle) {
  const GroupData data = two_state_instance();
  for (double rho : {0.0, 0.05, 0.2}) {
    const double oracle = grid_search_two_state(data, rho);
    const RepairPlan plan = solve_repair(data, rho);
    EXPECT_NEAR(plan.objective, oracle, 2e-2) << "rho = " << rho;
    // The LP is free of the grid restriction, so it can only do better.
    EXPECT_LE(plan.objective, oracle + 1e-9);
  }
}

TEST(SolveRepair, LargeRhoIsFreeRepair) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupData data = random_group_data(rng, 3, 2);
    const double gap =
        tv_distance(marginal_x(data.joint_0), marginal_x(data.joint_1));
    const RepairPlan plan = solve_repair(data, std::min(1.0, gap + 0.01));
    EXPECT_NEAR(plan.objective, 0.0, 1e-8);
  }
}

TEST(SolveRepair, ZeroRhoReachesParity) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupData data = random_group_data(rng, 4, 2);
    const RepairPlan plan = solve_repair(data, 0.0);
    EXPECT_LE(plan.parity_gap, 1e-6);
  }
}

TEST(SolveRepair, PlanInvariants) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupData data = random_group_data(rng, 4, 2);
    const double rho = (trial % 5) * 0.05;
    const RepairPlan plan = solve_repair(data, rho);
    for (int s = 0; s < 2; ++s) {
      for (const auto& row : plan.channel(s).rows()) {
        double sum = 0.0;
        for (double p : row) {
          EXPECT_GE(p, 0.0);
          sum += p;
        }
        EXPECT_NEAR(sum, 1.0, 1e-8);
      }
    }
    EXPECT_LE(plan.parity_gap, rho + 1e-7);
    // Recompute the objective from the channels through the probability core.
    double obj = 0.0;
    for (int s = 0; s < 2; ++s) {
      obj += data.pi[static_cast<std::size_t>(s)] *
             tv_distance_joint(push_forward_joint(plan.channel(s), data.joint(s)),
                               data.joint(s));
    }
    EXPECT_NEAR(obj, plan.objective, 1e-8);
  }
}

TEST(SolveRepair, MonotoneInRho) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupData data = random_group_data(rng, 3, 2);
    const auto plans = sweep(data, {0.0, 0.02, 0.05, 0.1, 0.2, 0.5});
    for (std::size_t i = 1; i < plans.size(); ++i) {
      EXPECT_GE(plans[i - 1].objective, plans[i].objective - 1e-7);
    }
  }
}

TEST(SolveRepair, BarycenterLowerBoundsZeroRho) {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupData data = random_group_data(rng, 4, 2);
    const RepairPlan plan = solve_repair(data, 0.0);
    const double bc = barycenter_value(marginal_x(data.joint_0),
                                       marginal_x(data.joint_1), data.pi);
    EXPECT_GE(plan.objective, bc - 1e-7);
  }
}

TEST(Sweep, DeterministicRepeats) {
  std::mt19937_64 rng(29);
  const GroupData data = random_group_data(rng, 3, 2);
  const auto plans = sweep(data, {0.3, 0.3});
  ASSERT_EQ(plans.size(), 2u);
  EXPECT_EQ(plans[0].objective, plans[1].objective);
  EXPECT_EQ(plans[0].parity_gap, plans[1].parity_gap);
}

TEST(Barycenter, ClosedFormExamples) {
  const Alphabet a = Alphabet::indexed(3);
  const Pmf q(a, {0.2, 0.3, 0.5});
  const Pmf pi_even(Alphabet({"s0", "s1"}), {0.5, 0.5});
  EXPECT_DOUBLE_EQ(barycenter_value(q, q, pi_even), 0.0);

  std::mt19937_64 rng(30);
  const Pmf q2 = random_pmf(rng, a);
  const Pmf pi_skew(Alphabet({"s0", "s1"}), {0.8, 0.2});
  EXPECT_NEAR(barycenter_value(q, q2, pi_skew), 0.2 * tv_distance(q, q2), 1e-15);
  const Pmf pi_degenerate(Alphabet({"s0", "s1"}), {1.0, 0.0});
  EXPECT_DOUBLE_EQ(barycenter_value(q, q2, pi_degenerate), 0.0);
}

TEST(Barycenter, LpMatchesClosedForm) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(0.02, 0.98);
  for (int trial = 0; trial < 100; ++trial) {
    const Alphabet a = Alphabet::indexed(2 + trial % 5);
    const Pmf q0 = random_pmf(rng, a);
    const Pmf q1 = random_pmf(rng, a);
    const double pi0 = unif(rng);
    const Pmf pi(Alphabet({"s0", "s1"}), {pi0, 1.0 - pi0});
    const LpSolution sol = solve(build_barycenter(q0, q1, pi));
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_NEAR(sol.objective_value, barycenter_value(q0, q1, pi), 1e-8);
  }
}

TEST(Barycenter, LpMatchesVertexOracle) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  for (int trial = 0; trial < 5; ++trial) {
    const Alphabet a = Alphabet::indexed(2);
    const Pmf q0 = random_pmf(rng, a);
    const Pmf q1 = random_pmf(rng, a);
    const double pi0 = unif(rng);
    const Pmf pi(Alphabet({"s0", "s1"}), {pi0, 1.0 - pi0});
    const LpProblem p = build_barycenter(q0, q1, pi);
    const auto oracle = enumerate_vertices(p);
    ASSERT_TRUE(oracle.feasible_vertex_found);
    const LpSolution sol = solve(p);
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_NEAR(sol.objective_value, oracle.best_objective, 1e-8);
  }
}

TEST(Barycenter, DimensionErrors) {
  const Pmf q0(Alphabet::indexed(2), {0.5, 0.5});
  const Pmf q1(Alphabet::indexed(3), {0.3, 0.3, 0.4});
  const Pmf pi(Alphabet({"s0", "s1"}), {0.5, 0.5});
  EXPECT_THROW(build_barycenter(q0, q1, pi), DimensionError);
  EXPECT_THROW(barycenter_value(q0, q0, q1), DimensionError);  // 3-entry pi
}

}  // namespace
}  // namespace fairtv
