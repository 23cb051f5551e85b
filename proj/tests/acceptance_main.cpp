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

// Acceptance suite. Usage: linebal_acceptance [criterion...]
// With no arguments every criterion runs. One PASS/FAIL line per criterion;
// the exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "linebal/balancing.hpp"
#include "linebal/lp.hpp"
#include "linebal/scenario.hpp"
#include "linebal/schedule.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

namespace {

using namespace linebal;
using Clock = std::chrono::steady_clock;

// Collects the first few failure messages of a criterion.
class Outcome {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  std::string notes() const {
    if (failures_ <= 5) return notes_;
    return notes_ + "; +" + std::to_string(failures_ - 5) + " more";
  }
  std::string summary;

 private:
  int failures_ = 0;
  std::string notes_;
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Scenario load_data(const std::string& name) {
  return load_scenario(testing::slurp(testing::data_path(name)));
}

void increment_figures(Outcome& o) {
  const IncrementReport r = increment_from_figures(2.0, 4.36, 28'800.0, 182.0);
  o.expect(near(r.increment_usd_per_day, 67'786.0, 0.5),
           "increment " + num(r.increment_usd_per_day, 3));
  o.expect(near(r.baseline_net_usd_per_day, 57'600.0, 1.0),
           "baseline net " + num(r.baseline_net_usd_per_day, 3));
  o.expect(near(r.optimized_net_usd_per_day, 125'386.0, 1.0),
           "optimized net " + num(r.optimized_net_usd_per_day, 3));
  const double growth = r.growth_percent.value_or(NAN);
  o.expect(near(growth, 117.6, 0.05),
           "growth " + num(growth, 4) + "% is outside 117.6 +/- 0.05");
  o.summary = "increment " + num(r.increment_usd_per_day, 2) + " USD/day, growth " +
              num(growth, 4) + "%";
}

void optimizer_reproduction(Outcome& o) {
  const OptimizeResult opt = optimize(load_data("case_study_optimized.json"), Mode::kContinuous);
  const OptimizeResult base = optimize(load_data("case_study_baseline.json"), Mode::kContinuous);
  const double c_opt = opt.breakdown.total_effective_cycles();
  const double c_base = base.breakdown.total_effective_cycles();
  o.expect(near(c_opt, 4.36, 0.005), "optimized cycles " + num(c_opt));
  const auto& b = opt.breakdown.binding_constraints;
  o.expect(std::find(b.begin(), b.end(), "tank:T1") != b.end(), "tank row not binding");
  o.expect(near(c_base, 2.0, 0.005), "baseline cycles " + num(c_base));
  o.summary = "optimized " + num(c_opt, 4) + ", baseline " + num(c_base, 4) + " cycles/day";
}

bool feasible(const lp::LpProblem& p, const std::vector<double>& x, double tol) {
  for (double v : x) {
    if (v < -tol) return false;
  }
  for (const auto& row : p.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coefficients[j] * x[j];
    if (lhs > row.rhs + tol) return false;
  }
  return true;
}

void lp_oracle_suite(Outcome& o) {
  std::mt19937_64 rng(5150);
  int bounded = 0;
  constexpr int kInstances = 250;
  for (int i = 0; i < kInstances; ++i) {
    const testing::DenseLp d = testing::random_lp(rng);
    const lp::LpProblem p = testing::to_problem(d);
    const lp::LpSolution s = lp::solve_lp(p);
    const auto oracle = testing::vertex_oracle(d);
    if (s.status == lp::Status::kOptimal) {
      o.expect(feasible(p, *s.point, 1e-7), "instance " + std::to_string(i) + " infeasible");
    }
    if (oracle.bounded) {
      ++bounded;
      o.expect(s.status == lp::Status::kOptimal &&
                   near(*s.objective_value, oracle.value, 1e-8),
               "instance " + std::to_string(i) + " objective mismatch");
    }
  }
  o.summary = std::to_string(kInstances) + " LPs, " + std::to_string(bounded) + " bounded";
}

void milp_oracle_suite(Outcome& o) {
  std::mt19937_64 rng(8080);
  constexpr int kInstances = 150;
  for (int i = 0; i < kInstances; ++i) {
    const auto ip = testing::random_ip(rng);
    lp::LpProblem p = testing::to_problem(ip.lp);
    p.integrality.assign(p.num_variables(), true);
    const lp::LpSolution s = lp::solve_milp(p);
    const lp::LpSolution relaxed = lp::solve_lp(p);
    const auto oracle = testing::integer_oracle(ip.lp, ip.upper);
    const std::string tag = "instance " + std::to_string(i);
    if (!oracle) {
      o.expect(s.status == lp::Status::kInfeasible, tag + " should be infeasible");
      continue;
    }
    const bool optimal = s.status == lp::Status::kOptimal;
    o.expect(optimal && near(*s.objective_value, *oracle, 1e-9), tag + " objective mismatch");
    o.expect(optimal && relaxed.status == lp::Status::kOptimal &&
                 *s.objective_value <= *relaxed.objective_value + 1e-9,
             tag + " exceeds its relaxation");
  }
  o.summary = std::to_string(kInstances) + " integer programs";
}

void pipeline_consistency(Outcome& o) {
  std::mt19937_64 rng(2024);
  constexpr int kScenarios = 150;
  for (int i = 0; i < kScenarios; ++i) {
    const Scenario s = testing::random_scenario(rng);
    const std::string tag = "scenario " + std::to_string(i);
    const OptimizeResult opt = optimize(s, Mode::kContinuous);
    const ScheduleReport rep = simulate(s, build_schedule(s, opt.plan));
    o.expect(rep.conflicts.empty(), tag + " has conflicts");
    for (const auto& t : s.tanks) {
      o.expect(near(rep.achieved_cycles_per_tank.at(t.id),
                    opt.breakdown.effective_cycles_per_tank.at(t.id), kCycleAgreementTolerance),
               tag + " cycles differ on " + t.id);
    }
    const double z = *opt.solution.objective_value;
    const double e = evaluate_plan(s, opt.plan).objective_usd;
    o.expect(std::abs(e - z) <= 1e-6 * std::max(1.0, std::abs(z)), tag + " objective drift");
  }
  o.summary = std::to_string(kScenarios) + " random scenarios";
}

void invariance_suite(Outcome& o) {
  std::mt19937_64 rng(31);
  constexpr int kScenarios = 120;
  for (int i = 0; i < kScenarios; ++i) {
    const Scenario s = testing::random_scenario(rng);
    const std::string tag = "scenario " + std::to_string(i);
    const OptimizeResult opt = optimize(s, Mode::kContinuous);
    const double z = opt.breakdown.objective_usd;

    const double k = testing::uniform_real(rng, 0.1, 10.0);
    Scenario scaled = s;
    for (auto& t : scaled.tanks) t.margin_per_rod_usd *= k;
    for (auto& f : scaled.furnaces) f.idle_cost_rate_usd_per_min *= k;
    const double zk = optimize(scaled, Mode::kContinuous).breakdown.objective_usd;
    o.expect(std::abs(zk - k * z) <= 1e-6 * std::max(1.0, std::abs(k * z)),
             tag + " monetary scaling");

    Scenario bigger = s;
    const std::size_t which =
        static_cast<std::size_t>(testing::uniform_int(rng, 0, int(s.tanks.size()) - 1));
    bigger.tanks[which].daily_capacity_min *= testing::uniform_real(rng, 1.0, 3.0);
    const double zb = optimize(bigger, Mode::kContinuous).breakdown.objective_usd;
    o.expect(zb >= z - 1e-9 * std::max(1.0, std::abs(z)), tag + " capacity monotonicity");

    const ScheduleReport rep = simulate(s, build_schedule(s, opt.plan));
    for (const auto& f : s.furnaces) {
      const double total = rep.busy_minutes_per_resource.at(f.id) +
                           rep.idle_minutes_per_furnace.at(f.id);
      o.expect(near(total, f.daily_capacity_min, 1e-6), tag + " conservation on " + f.id);
    }
  }
  o.summary = std::to_string(kScenarios) + " random scenarios x 3 properties";
}

void cli_contract(Outcome& o) {
  using testing::data_path;
  using testing::run_cli;
  const std::string opt = data_path("case_study_optimized.json");
  const std::string base = data_path("case_study_baseline.json");
  struct Case {
    std::vector<std::string> args;
    int want;
  };
  const std::vector<Case> cases = {
      {{"solve", opt}, 0},
      {{"report", base, opt}, 0},
      {{"simulate", opt}, 0},
      {{"solve", data_path("missing.json")}, 1},
      {{"solve", opt, "--mode", "bogus"}, 1},
      {{"solve", data_path("invalid_ratio.json")}, 2},
      {{"report", base, data_path("margin_mismatch.json")}, 2},
      {{"simulate", opt, "--cold-start"}, 3},
  };
  for (const auto& c : cases) {
    const int got = run_cli(c.args).exit_code;
    std::string line;
    for (const auto& a : c.args) line += " " + std::filesystem::path(a).filename().string();
    o.expect(got == c.want, "exit " + std::to_string(got) + " for" + line);
  }

  const auto dir = std::filesystem::temp_directory_path() / "linebal_acceptance";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.svg").string();
  const std::string b = (dir / "b.svg").string();
  const auto ra = run_cli({"simulate", opt, "--json", "--gantt", a});
  const auto rb = run_cli({"simulate", opt, "--json", "--gantt", b});
  o.expect(!ra.out.empty() && ra.out == rb.out, "simulate --json differs between runs");
  o.expect(!testing::slurp(a).empty() && testing::slurp(a) == testing::slurp(b),
           "SVG differs between runs");
  o.expect(run_cli({"report", base, opt, "--json"}).out ==
               run_cli({"report", base, opt, "--json"}).out,
           "report --json differs between runs");
  o.expect(run_cli({"solve", opt, "--json"}).out == run_cli({"solve", opt, "--json"}).out,
           "solve --json differs between runs");
  std::filesystem::remove_all(dir);
  o.summary = std::to_string(cases.size()) + " exit-code cases, 4 determinism checks";
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no runtime bound
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "case-study increment", 1.0, increment_figures},
      {2, "optimizer reproduction", 1.0, optimizer_reproduction},
      {3, "LP oracle suite", 10.0, lp_oracle_suite},
      {4, "MILP oracle suite", 30.0, milp_oracle_suite},
      {5, "pipeline consistency", 0.0, pipeline_consistency},
      {6, "invariance suite", 0.0, invariance_suite},
      {7, "CLI contract", 0.0, cli_contract},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > static_cast<int>(all.size())) {
      std::cerr << "unknown criterion '" << argv[i] << "'\n";
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty()) {
    for (const auto& c : all) selected.push_back(c.id);
  }

  bool all_pass = true;
  for (int id : selected) {
    const Criterion& c = all[static_cast<std::size_t>(id - 1)];
    Outcome o;
    const auto start = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.budget_s > 0.0) {
      o.expect(secs < c.budget_s, "took " + num(secs, 3) + " s, budget " + num(c.budget_s, 0) +
                                      " s");
    }
    all_pass = all_pass && o.ok();
    std::cout << (o.ok() ? "[PASS]" : "[FAIL]") << " criterion " << c.id << " (" << c.name
              << "): " << o.summary << " [" << num(secs, 3) << " s]";
    if (!o.ok()) std::cout << " -- " << o.notes();
    std::cout << std::endl;
  }
  return all_pass ? 0 : 1;
}
