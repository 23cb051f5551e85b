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

// Daily profit model for a melting line. One decision variable per furnace:
// r_f, its melt cycles per day. For furnace f pouring into tank t
//
//   revenue  = sum_t (sum_{f->t} r_f * eff_f) * eff_cast_t * rods_t * margin_t
//   idle_f   = (cap_f - ct_f * r_f) * rate_f
//   profit   = revenue - sum_f idle_f
//
// subject to ct_f * r_f <= cap_f for every furnace and
// sum_{f->t} ct_t * r_f * eff_f * eff_cast_t <= cap_t for every tank.
// Expanding idle_f gives a linear objective with constant -sum_f cap_f*rate_f.

#ifndef LINEBAL_BALANCING_HPP_
#define LINEBAL_BALANCING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linebal/lp.hpp"
#include "linebal/scenario.hpp"

namespace linebal {

inline constexpr double kBindingTolerance = 1e-6;
inline constexpr double kPlanFeasibilityTolerance = 1e-6;
inline constexpr std::size_t kMaxAssignments = 10'000;

enum class Mode { kContinuous, kInteger };

inline const char* to_string(Mode m) {
  return m == Mode::kContinuous ? "continuous" : "integer";
}

// Daily cycle count per furnace, aligned with Scenario::furnaces.
struct CyclePlan {
  Mode mode = Mode::kContinuous;
  std::vector<double> cycles;

  double total() const {
    double s = 0.0;
    for (double r : cycles) s += r;
    return s;
  }
  bool operator==(const CyclePlan&) const = default;
};

struct ProfitBreakdown {
  double gross_revenue_usd = 0.0;
  std::map<std::string, double> idle_cost_usd_per_furnace;
  double objective_usd = 0.0;
  std::map<std::string, double> effective_cycles_per_tank;
  std::vector<std::string> binding_constraints;
  // Capacity rows violated by more than kPlanFeasibilityTolerance.
  std::vector<std::string> violated_constraints;

  bool feasible() const { return violated_constraints.empty(); }
  double total_idle_cost_usd() const {
    double s = 0.0;
    for (const auto& [id, c] : idle_cost_usd_per_furnace) s += c;
    return s;
  }
  double total_effective_cycles() const {
    double s = 0.0;
    for (const auto& [id, c] : effective_cycles_per_tank) s += c;
    return s;
  }
  bool operator==(const ProfitBreakdown&) const = default;
};

struct IncrementReport {
  double baseline_daily_cycles = 0.0;
  double optimized_daily_cycles = 0.0;
  double revenue_per_cycle_usd = 0.0;
  double additional_labor_cost_usd_per_day = 0.0;
  double increment_usd_per_day = 0.0;
  double baseline_net_usd_per_day = 0.0;
  double optimized_net_usd_per_day = 0.0;
  // Absent when the baseline net is zero.
  std::optional<double> growth_percent;

  bool operator==(const IncrementReport&) const = default;
};

class InvalidScenarioError : public std::invalid_argument {
 public:
  explicit InvalidScenarioError(std::vector<Violation> violations)
      : std::invalid_argument(describe(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& vs) {
    std::string msg = "invalid scenario:";
    for (const auto& v : vs) {
      msg += std::string("\n  ") + to_string(v.code) + ": " + v.message;
    }
    return msg;
  }
  std::vector<Violation> violations_;
};

class RevenueMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An LpProblem plus the names of its variables and rows.
struct Program {
  lp::LpProblem problem;
  std::vector<std::string> variable_furnace_ids;
  std::vector<std::string> row_ids;  // "furnace:<id>" or "tank:<id>"
};

inline std::string furnace_row_id(const std::string& id) { return "furnace:" + id; }
inline std::string tank_row_id(const std::string& id) { return "tank:" + id; }

namespace internal {

inline std::string fmt_usd(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline void require_valid(const Scenario& s, bool allow_unfed_tanks) {
  std::vector<Violation> vs = validate(s);
  if (allow_unfed_tanks) {
    std::erase_if(vs, [](const Violation& v) {
      return v.code == ViolationCode::kTankUnfed;
    });
  }
  if (!vs.empty()) throw InvalidScenarioError(std::move(vs));
}

inline const TankCastingLine& tank_of(const Scenario& s, const Furnace& f) {
  const TankCastingLine* t = s.find_tank(f.tank_id);
  if (t == nullptr) {
    throw std::invalid_argument("furnace '" + f.id + "' pours into unknown tank '" +
                                f.tank_id + "'");
  }
  return *t;
}

inline Program build_program_unchecked(const Scenario& s, Mode mode) {
  const std::size_t n = s.furnaces.size();
  Program prog;
  lp::LpProblem& p = prog.problem;
  p.objective.assign(n, 0.0);
  if (mode == Mode::kInteger) p.integrality.assign(n, true);

  for (std::size_t j = 0; j < n; ++j) {
    const Furnace& f = s.furnaces[j];
    const TankCastingLine& t = tank_of(s, f);
    prog.variable_furnace_ids.push_back(f.id);
    p.objective[j] = f.output_efficiency * t.casting_efficiency *
                         t.revenue_per_cycle_usd() +
                     f.cycle_time_min * f.idle_cost_rate_usd_per_min;
    p.objective_constant -= f.daily_capacity_min * f.idle_cost_rate_usd_per_min;

    lp::Constraint row{std::vector<double>(n, 0.0), f.daily_capacity_min};
    row.coefficients[j] = f.cycle_time_min;
    p.constraints.push_back(std::move(row));
    prog.row_ids.push_back(furnace_row_id(f.id));
  }
  for (const TankCastingLine& t : s.tanks) {
    lp::Constraint row{std::vector<double>(n, 0.0), t.daily_capacity_min};
    for (std::size_t j = 0; j < n; ++j) {
      const Furnace& f = s.furnaces[j];
      if (f.tank_id != t.id) continue;
      row.coefficients[j] =
          t.cycle_time_min * f.output_efficiency * t.casting_efficiency;
    }
    p.constraints.push_back(std::move(row));
    prog.row_ids.push_back(tank_row_id(t.id));
  }
  return prog;
}

}  // namespace internal

// Encodes the scenario as a max-LP (all variables integer in kInteger mode).
inline Program build_program(const Scenario& s, Mode mode) {
  internal::require_valid(s, /*allow_unfed_tanks=*/false);
  return internal::build_program_unchecked(s, mode);
}

// Recomputes revenue, idle costs and constraint slack at `plan` directly
// from the scenario, without going through the LP. Infeasible plans are
// evaluated and reported through violated_constraints.
inline ProfitBreakdown evaluate_plan(const Scenario& s, const CyclePlan& plan) {
  if (plan.cycles.size() != s.furnaces.size()) {
    throw std::invalid_argument("plan has " + std::to_string(plan.cycles.size()) +
                                " cycle counts for " +
                                std::to_string(s.furnaces.size()) + " furnaces");
  }
  ProfitBreakdown out;
  std::map<std::string, double> tank_minutes;
  for (const auto& t : s.tanks) {
    out.effective_cycles_per_tank[t.id] = 0.0;
    tank_minutes[t.id] = 0.0;
  }

  auto classify = [&out](const std::string& row, double slack) {
    if (slack < -kPlanFeasibilityTolerance) out.violated_constraints.push_back(row);
    if (std::abs(slack) <= kBindingTolerance) out.binding_constraints.push_back(row);
  };

  double idle_total = 0.0;
  for (std::size_t j = 0; j < s.furnaces.size(); ++j) {
    const Furnace& f = s.furnaces[j];
    const TankCastingLine& t = internal::tank_of(s, f);
    const double r = plan.cycles[j];
    const double busy = f.cycle_time_min * r;
    const double idle = (f.daily_capacity_min - busy) * f.idle_cost_rate_usd_per_min;
    out.idle_cost_usd_per_furnace[f.id] = idle;
    idle_total += idle;
    const double effective = r * f.output_efficiency * t.casting_efficiency;
    out.effective_cycles_per_tank[t.id] += effective;
    tank_minutes[t.id] += t.cycle_time_min * effective;
    out.gross_revenue_usd += effective * t.revenue_per_cycle_usd();
    classify(furnace_row_id(f.id), f.daily_capacity_min - busy);
  }
  for (const auto& t : s.tanks) {
    classify(tank_row_id(t.id), t.daily_capacity_min - tank_minutes[t.id]);
  }
  out.objective_usd = out.gross_revenue_usd - idle_total;
  return out;
}

struct OptimizeResult {
  CyclePlan plan;
  ProfitBreakdown breakdown;
  lp::LpSolution solution;
};

namespace internal {

inline OptimizeResult optimize_unchecked(const Scenario& s, Mode mode) {
  const Program prog = build_program_unchecked(s, mode);
  lp::LpSolution sol = mode == Mode::kInteger ? lp::solve_milp(prog.problem)
                                              : lp::solve_lp(prog.problem);
  if (sol.status != lp::Status::kOptimal) {
    // r = 0 is feasible and every variable has a finite capacity bound.
    throw std::logic_error(std::string("balancing program returned ") +
                           lp::to_string(sol.status) + " for a valid scenario");
  }
  OptimizeResult out;
  out.plan.mode = mode;
  out.plan.cycles = *sol.point;
  out.breakdown = evaluate_plan(s, out.plan);
  const double z = *sol.objective_value;
  if (std::abs(z - out.breakdown.objective_usd) > 1e-6 * std::max(1.0, std::abs(z))) {
    throw std::logic_error("solver objective disagrees with direct evaluation");
  }
  out.solution = std::move(sol);
  return out;
}

}  // namespace internal

inline OptimizeResult optimize(const Scenario& s, Mode mode) {
  internal::require_valid(s, /*allow_unfed_tanks=*/false);
  return internal::optimize_unchecked(s, mode);
}

// The bare increment arithmetic: extra cycles are valued at
// revenue_per_cycle, extra labor is charged against the optimized line.
inline IncrementReport increment_from_figures(double baseline_cycles,
                                              double optimized_cycles,
                                              double revenue_per_cycle,
                                              double additional_labor) {
  IncrementReport r;
  r.baseline_daily_cycles = baseline_cycles;
  r.optimized_daily_cycles = optimized_cycles;
  r.revenue_per_cycle_usd = revenue_per_cycle;
  r.additional_labor_cost_usd_per_day = additional_labor;
  r.increment_usd_per_day =
      (optimized_cycles - baseline_cycles) * revenue_per_cycle - additional_labor;
  r.baseline_net_usd_per_day = baseline_cycles * revenue_per_cycle;
  r.optimized_net_usd_per_day = optimized_cycles * revenue_per_cycle - additional_labor;
  if (r.baseline_net_usd_per_day != 0.0) {
    r.growth_percent = (r.optimized_net_usd_per_day - r.baseline_net_usd_per_day) /
                       r.baseline_net_usd_per_day * 100.0;
  }
  return r;
}

// Baseline-vs-optimized daily profit. Every tank of both scenarios must carry
// the same rods_per_cycle and margin_per_rod_usd.
inline IncrementReport incremental_report(const Scenario& baseline,
                                          const CyclePlan& baseline_plan,
                                          const Scenario& optimized,
                                          const CyclePlan& optimized_plan) {
  const TankCastingLine* reference = nullptr;
  const char* reference_side = "";
  for (const Scenario* s : {&baseline, &optimized}) {
    const char* side = s == &baseline ? "baseline" : "optimized";
    for (const auto& t : s->tanks) {
      if (reference == nullptr) {
        reference = &t;
        reference_side = side;
      } else if (t.rods_per_cycle != reference->rods_per_cycle ||
                 t.margin_per_rod_usd != reference->margin_per_rod_usd) {
        throw RevenueMismatchError(
            std::string("tank revenue parameters differ: ") + reference_side + " tank '" +
            reference->id + "' has " + std::to_string(reference->rods_per_cycle) +
            " rods at " + internal::fmt_usd(reference->margin_per_rod_usd) + " USD, " + side +
            " tank '" + t.id + "' has " + std::to_string(t.rods_per_cycle) + " rods at " +
            internal::fmt_usd(t.margin_per_rod_usd) + " USD");
      }
    }
  }
  if (reference == nullptr) throw std::invalid_argument("scenarios have no tanks");

  const double base_cycles = evaluate_plan(baseline, baseline_plan).total_effective_cycles();
  const double opt_cycles = evaluate_plan(optimized, optimized_plan).total_effective_cycles();
  const double extra_labor =
      optimized.labor.daily_labor_cost() - baseline.labor.daily_labor_cost();
  return increment_from_figures(base_cycles, opt_cycles,
                                reference->revenue_per_cycle_usd(), extra_labor);
}

struct AssignmentResult {
  std::map<std::string, std::string> assignment;  // furnace id -> tank id
  Scenario scenario;                              // with the assignment applied
  OptimizeResult result;
};

// Number of ways to put `furnaces` distinct furnaces into `tanks` distinct
// tanks with at most kMaxFurnacesPerTank each (tanks may stay empty).
inline double count_assignments(std::size_t furnaces, std::size_t tanks) {
  // ways[i] = assignments of i furnaces to the tanks seen so far
  std::vector<double> ways(furnaces + 1, 0.0);
  ways[0] = 1.0;
  for (std::size_t t = 0; t < tanks; ++t) {
    std::vector<double> next(furnaces + 1, 0.0);
    for (std::size_t i = 0; i <= furnaces; ++i) {
      // choose k of the i furnaces for this tank
      double choose = 1.0;
      for (std::size_t k = 0; k <= std::min<std::size_t>(i, kMaxFurnacesPerTank); ++k) {
        if (k > 0) choose = choose * static_cast<double>(i - k + 1) / static_cast<double>(k);
        next[i] += choose * ways[i - k];
      }
    }
    ways = std::move(next);
  }
  return ways[furnaces];
}

// Exhaustively tries every furnace->tank assignment with at most two
// furnaces per tank and returns the most profitable one. Ties go to the
// lexicographically smallest assignment (tank ids listed in sorted furnace
// id order, compared element by element). The scenario's tank_id fields are
// ignored.
inline AssignmentResult optimize_assignment(const Scenario& s, Mode mode) {
  {
    std::vector<Violation> vs = validate(s);
    std::erase_if(vs, [](const Violation& v) {
      return v.code == ViolationCode::kOrphanFurnace ||
             v.code == ViolationCode::kRatioExceeded ||
             v.code == ViolationCode::kTankUnfed;
    });
    if (!vs.empty()) throw InvalidScenarioError(std::move(vs));
  }
  const double total = count_assignments(s.furnaces.size(), s.tanks.size());
  if (total > static_cast<double>(kMaxAssignments)) {
    throw std::length_error("assignment enumeration would visit " +
                            std::to_string(static_cast<long long>(total)) +
                            " candidates (limit " + std::to_string(kMaxAssignments) +
                            ")");
  }
  if (total < 1.0) {
    throw InvalidScenarioError({{ViolationCode::kRatioExceeded,
                                 "no assignment keeps every tank within the ratio"}});
  }

  std::vector<std::size_t> furnace_order(s.furnaces.size());
  for (std::size_t i = 0; i < furnace_order.size(); ++i) furnace_order[i] = i;
  std::sort(furnace_order.begin(), furnace_order.end(), [&](std::size_t a, std::size_t b) {
    return s.furnaces[a].id < s.furnaces[b].id;
  });
  std::vector<std::string> tank_ids;
  for (const auto& t : s.tanks) tank_ids.push_back(t.id);
  std::sort(tank_ids.begin(), tank_ids.end());

  std::optional<AssignmentResult> best;
  Scenario candidate = s;
  std::map<std::string, int> load;

  // Depth-first in lexicographic order, so the first of several equal
  // objectives is the smallest assignment.
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == furnace_order.size()) {
      OptimizeResult r = internal::optimize_unchecked(candidate, mode);
      const double z = r.breakdown.objective_usd;
      if (best.has_value()) {
        const double zb = best->result.breakdown.objective_usd;
        if (z <= zb + 1e-9 * std::max(1.0, std::abs(zb))) return;
      }
      AssignmentResult a;
      for (const auto& f : candidate.furnaces) a.assignment[f.id] = f.tank_id;
      a.scenario = candidate;
      a.result = std::move(r);
      best = std::move(a);
      return;
    }
    Furnace& f = candidate.furnaces[furnace_order[depth]];
    for (const std::string& tid : tank_ids) {
      if (load[tid] >= kMaxFurnacesPerTank) continue;
      ++load[tid];
      f.tank_id = tid;
      self(self, depth + 1);
      --load[tid];
    }
  };
  recurse(recurse, 0);
  return std::move(*best);
}

}  // namespace linebal

#endif  // LINEBAL_BALANCING_HPP_
