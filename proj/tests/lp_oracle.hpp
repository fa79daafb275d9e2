// Independent brute-force check for small LPs: enumerate every basic point
// (each choice of n active constraints), keep the feasible ones, and take
// the best objective. Shares nothing with the simplex path.

#ifndef FAIRTV_TESTS_LP_ORACLE_HPP
#define FAIRTV_TESTS_LP_ORACLE_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "fairtv/lp.hpp"

namespace fairtv::testutil {

// Solves M z = rhs by Gaussian elimination; nullopt if singular.
inline std::optional<std::vector<double>> solve_dense(std::vector<std::vector<double>> m,
                                                      std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
    }
    if (std::abs(m[piv][k]) < 1e-11) return std::nullopt;
    std::swap(m[piv], m[k]);
    std::swap(rhs[piv], rhs[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<double> z(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= m[k][j] * z[j];
    z[k] = s / m[k][k];
  }
  return z;
}

struct OracleResult {
  bool feasible_vertex_found = false;
  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<double> best_point;
  std::vector<double> feasible_objectives;  // every feasible vertex value
};

inline OracleResult enumerate_vertices(const LpProblem& p, double feas_tol = 1e-7) {
  const std::size_t n = static_cast<std::size_t>(p.num_vars());
  // Constraint pool as rows a.z = c when active.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<bool> mandatory;
  auto push = [&](const LpRow& row, double c, bool must) {
    std::vector<double> dense(n, 0.0);
    for (const auto& t : row) dense[t.var] += t.coef;
    rows.push_back(dense);
    rhs.push_back(c);
    mandatory.push_back(must);
  };
  for (std::size_t i = 0; i < p.eq_rows().size(); ++i) push(p.eq_rows()[i], p.eq_rhs()[i], true);
  for (std::size_t i = 0; i < p.ineq_rows().size(); ++i) push(p.ineq_rows()[i], p.ineq_rhs()[i], false);
  for (std::size_t j = 0; j < n; ++j) {
    LpRow unit = {{static_cast<int>(j), 1.0}};
    push(unit, p.lower()[j], false);
    if (std::isfinite(p.upper()[j])) push(unit, p.upper()[j], false);
  }

  OracleResult result;
  const std::size_t total = rows.size();
  std::vector<std::size_t> pick;
  // Recursive subset choice of n active constraints including all equalities.
  auto consider = [&]() {
    std::vector<std::vector<double>> m;
    std::vector<double> c;
    for (std::size_t i : pick) {
      m.push_back(rows[i]);
      c.push_back(rhs[i]);
    }
    const auto z = solve_dense(std::move(m), std::move(c));
    if (!z) return;
    if (!check_feasible(p, *z, feas_tol)) return;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += p.objective()[j] * (*z)[j];
    result.feasible_objectives.push_back(obj);
    if (!result.feasible_vertex_found || obj < result.best_objective) {
      result.feasible_vertex_found = true;
      result.best_objective = obj;
      result.best_point = *z;
    }
  };
  std::vector<std::size_t> optional_ids;
  std::size_t n_mand = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (mandatory[i]) {
      pick.push_back(i);
      ++n_mand;
    } else {
      optional_ids.push_back(i);
    }
  }
  if (n_mand > n) return result;
  const std::size_t need = n - n_mand;
  std::vector<std::size_t> comb(need);
  auto recurse = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == need) {
      consider();
      return;
    }
    for (std::size_t i = start; i < optional_ids.size(); ++i) {
      pick.push_back(optional_ids[i]);
      self(self, i + 1, depth + 1);
      pick.pop_back();
    }
  };
  recurse(recurse, 0, 0);
  return result;
}

}  // namespace fairtv::testutil

#endif  // FAIRTV_TESTS_LP_ORACLE_HPP
