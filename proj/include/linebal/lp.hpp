// Copyright 2025 The linebal Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense two-phase simplex and depth-first branch-and-bound for problems of
// the form
//
//   maximize  p'x + c
//   subject to  Ax <= b,  x >= 0,  x_j integer for flagged j.
//
// Greater-or-equal and equality rows are expressed by the caller through
// negation or pairing. The tableau is dense; intended sizes are n, m < 100.

#ifndef LINEBAL_LP_HPP_
#define LINEBAL_LP_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace linebal::lp {

inline constexpr double kFeasibilityTolerance = 1e-7;
inline constexpr double kIntegralityTolerance = 1e-6;
inline constexpr double kPruneEpsilon = 1e-9;

enum class Status { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "OPTIMAL";
    case Status::kInfeasible:
      return "INFEASIBLE";
    case Status::kUnbounded:
      return "UNBOUNDED";
  }
  return "?";
}

// One row  coefficients . x <= rhs.
struct Constraint {
  std::vector<double> coefficients;
  double rhs = 0.0;
};

struct LpProblem {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  // Empty means every variable is continuous; otherwise one flag per variable.
  std::vector<bool> integrality;
  double objective_constant = 0.0;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_constraints() const { return constraints.size(); }
  bool is_integer(std::size_t j) const {
    return j < integrality.size() && integrality[j];
  }
};

struct LpSolution {
  Status status = Status::kInfeasible;
  std::optional<std::vector<double>> point;  // iff kOptimal
  std::optional<double> objective_value;     // iff kOptimal
  long iterations = 0;                       // simplex pivots
  long nodes = 0;                            // branch-and-bound nodes
};

// Malformed problem: dimension mismatch or non-finite data. Never used to
// signal infeasibility.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void check_problem(const LpProblem& problem) {
  const std::size_t n = problem.num_variables();
  if (n == 0) throw InputError("LP has no variables");
  if (!problem.integrality.empty() && problem.integrality.size() != n) {
    throw InputError("integrality flags: expected " + std::to_string(n) +
                     " entries, got " +
                     std::to_string(problem.integrality.size()));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(problem.objective[j])) {
      throw InputError("objective coefficient " + std::to_string(j) +
                       " is not finite");
    }
  }
  if (!std::isfinite(problem.objective_constant)) {
    throw InputError("objective constant is not finite");
  }
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const Constraint& row = problem.constraints[i];
    if (row.coefficients.size() != n) {
      throw InputError("constraint " + std::to_string(i) + " has " +
                       std::to_string(row.coefficients.size()) +
                       " coefficients, expected " + std::to_string(n));
    }
    if (!std::isfinite(row.rhs)) {
      throw InputError("constraint " + std::to_string(i) +
                       " has a non-finite right-hand side");
    }
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) {
        throw InputError("constraint " + std::to_string(i) +
                         " has a non-finite coefficient");
      }
    }
  }
}

namespace internal {

inline constexpr double kPivotTolerance = 1e-10;
inline constexpr double kReducedCostTolerance = 1e-9;
inline constexpr long kPivotLimit = 1'000'000;

// Row-major tableau holding B^-1 [A | I | artificials | b].
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const {
    return data_[i * (cols_ + 1) + j];
  }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double factor = at(i, c);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= factor * at(r, j);
      at(i, c) = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class PhaseResult { kOptimal, kUnbounded };

// Maximizes cost . x over the current basis with Bland's rule. Columns with
// allowed[j] == false never enter.
inline PhaseResult run_phase(Tableau& t, std::vector<std::size_t>& basis,
                             const std::vector<double>& cost,
                             const std::vector<bool>& allowed,
                             long& iterations) {
  const std::size_t m = t.rows();
  const std::size_t cols = t.cols();
  while (true) {
    if (iterations > kPivotLimit) {
      throw std::logic_error("simplex pivot limit exceeded");
    }
    std::size_t entering = cols;
    for (std::size_t j = 0; j < cols && entering == cols; ++j) {
      if (!allowed[j]) continue;
      double reduced = cost[j];
      for (std::size_t i = 0; i < m; ++i) reduced -= cost[basis[i]] * t.at(i, j);
      if (reduced > kReducedCostTolerance) entering = j;
    }
    if (entering == cols) return PhaseResult::kOptimal;

    std::size_t leaving = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = t.at(i, entering);
      if (a <= kPivotTolerance) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      const double tie = 1e-12 * (1.0 + std::abs(best_ratio));
      if (leaving == m || ratio < best_ratio - tie) {
        leaving = i;
        best_ratio = ratio;
      } else if (std::abs(ratio - best_ratio) <= tie &&
                 basis[i] < basis[leaving]) {
        leaving = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leaving == m) return PhaseResult::kUnbounded;
    t.pivot(leaving, entering);
    basis[leaving] = entering;
    ++iterations;
  }
}

}  // namespace internal

// Solves the continuous relaxation; integrality flags are ignored.
inline LpSolution solve_lp(const LpProblem& problem) {
  using internal::Tableau;
  check_problem(problem);

  const std::size_t n = problem.num_variables();
  const std::size_t m = problem.num_constraints();
  std::size_t num_artificial = 0;
  for (const Constraint& row : problem.constraints) {
    if (row.rhs < 0.0) ++num_artificial;
  }
  const std::size_t slack0 = n;
  const std::size_t art0 = n + m;
  const std::size_t cols = n + m + num_artificial;

  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  std::size_t next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& row = problem.constraints[i];
    const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * row.coefficients[j];
    t.at(i, slack0 + i) = sign;
    t.rhs(i) = sign * row.rhs;
    if (row.rhs < 0.0) {
      t.at(i, next_art) = 1.0;
      basis[i] = next_art++;
    } else {
      basis[i] = slack0 + i;
    }
  }

  LpSolution solution;
  std::vector<bool> allowed(cols, true);

  if (num_artificial > 0) {
    std::vector<double> phase1_cost(cols, 0.0);
    for (std::size_t j = art0; j < cols; ++j) phase1_cost[j] = -1.0;
    internal::run_phase(t, basis, phase1_cost, allowed, solution.iterations);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] >= art0) infeasibility += t.rhs(i);
    }
    if (infeasibility > kFeasibilityTolerance) {
      solution.status = Status::kInfeasible;
      return solution;
    }
    // Drive zero-valued artificials out of the basis where possible; rows
    // that cannot be pivoted are redundant and stay inert.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      for (std::size_t j = 0; j < art0; ++j) {
        if (std::abs(t.at(i, j)) > internal::kPivotTolerance) {
          t.pivot(i, j);
          basis[i] = j;
          ++solution.iterations;
          break;
        }
      }
    }
    for (std::size_t j = art0; j < cols; ++j) allowed[j] = false;
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = problem.objective[j];
  if (internal::run_phase(t, basis, cost, allowed, solution.iterations) ==
      internal::PhaseResult::kUnbounded) {
    solution.status = Status::kUnbounded;
    return solution;
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) x[basis[i]] = std::max(t.rhs(i), 0.0);
  }
  double z = problem.objective_constant;
  for (std::size_t j = 0; j < n; ++j) z += problem.objective[j] * x[j];
  solution.status = Status::kOptimal;
  solution.point = std::move(x);
  solution.objective_value = z;
  return solution;
}

namespace internal {

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;  // +inf when unbounded
};

inline LpProblem with_bounds(const LpProblem& base, const Node& node) {
  LpProblem p = base;
  const std::size_t n = base.num_variables();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(node.upper[j])) {
      Constraint row{std::vector<double>(n, 0.0), node.upper[j]};
      row.coefficients[j] = 1.0;
      p.constraints.push_back(std::move(row));
    }
    if (node.lower[j] > 0.0) {
      Constraint row{std::vector<double>(n, 0.0), -node.lower[j]};
      row.coefficients[j] = -1.0;
      p.constraints.push_back(std::move(row));
    }
  }
  return p;
}

}  // namespace internal

// Depth-first branch and bound over solve_lp relaxations. Branches on the
// integer variable whose fractional part is closest to 0.5 (lowest index on
// ties), explores the floor child first, and prunes nodes whose relaxation
// bound does not exceed the incumbent by more than kPruneEpsilon. An
// unbounded root relaxation is reported as kUnbounded.
inline LpSolution solve_milp(const LpProblem& problem) {
  check_problem(problem);
  const std::size_t n = problem.num_variables();

  LpSolution best;
  best.status = Status::kInfeasible;
  double incumbent = -std::numeric_limits<double>::infinity();
  long iterations = 0;
  long nodes = 0;

  std::vector<internal::Node> stack;
  stack.push_back({std::vector<double>(n, 0.0),
                   std::vector<double>(n, std::numeric_limits<double>::infinity())});
  bool root = true;

  while (!stack.empty()) {
    internal::Node node = std::move(stack.back());
    stack.pop_back();
    ++nodes;

    LpSolution relax = solve_lp(internal::with_bounds(problem, node));
    iterations += relax.iterations;
    if (relax.status == Status::kUnbounded && root) {
      best.status = Status::kUnbounded;
      best.iterations = iterations;
      best.nodes = nodes;
      return best;
    }
    root = false;
    if (relax.status != Status::kOptimal) continue;
    if (*relax.objective_value <= incumbent + kPruneEpsilon) continue;

    const std::vector<double>& x = *relax.point;
    std::size_t branch = n;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!problem.is_integer(j)) continue;
      const double frac = x[j] - std::floor(x[j]);
      if (frac <= kIntegralityTolerance || frac >= 1.0 - kIntegralityTolerance) {
        continue;
      }
      const double score = std::abs(frac - 0.5);
      if (score < best_score) {
        best_score = score;
        branch = j;
      }
    }

    if (branch == n) {
      incumbent = *relax.objective_value;
      best.status = Status::kOptimal;
      best.point = relax.point;
      best.objective_value = relax.objective_value;
      continue;
    }

    internal::Node up = node;
    up.lower[branch] = std::ceil(x[branch]);
    internal::Node down = std::move(node);
    down.upper[branch] = std::floor(x[branch]);
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }

  best.iterations = iterations;
  best.nodes = nodes;
  return best;
}

}  // namespace linebal::lp

#endif  // LINEBAL_LP_HPP_
