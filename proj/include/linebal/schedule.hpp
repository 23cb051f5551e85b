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

// Event timelines for a cycle plan, and an independent checker that
// recomputes occupancy and throughput from the events alone.
//
// A furnace melts a batch, holds it until its tank is free, pours
// (instantaneously) and only then starts the next melt. A pour starts a cast
// on the tank. A batch carrying w cycles of furnace f occupies the furnace
// for ct_f * w minutes and the tank for ct_t * w * eff_f * eff_cast minutes,
// so tank busy minutes divided by ct_t count effective cycles.

#ifndef LINEBAL_SCHEDULE_HPP_
#define LINEBAL_SCHEDULE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "linebal/balancing.hpp"
#include "linebal/scenario.hpp"

namespace linebal {

inline constexpr double kTimeTolerance = 1e-6;
inline constexpr double kCycleAgreementTolerance = 0.01;
inline constexpr double kRevenueAgreementFraction = 0.005;

enum class EventKind { kMelt, kPour, kCast };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::kMelt: return "MELT";
    case EventKind::kPour: return "POUR";
    case EventKind::kCast: return "CAST";
  }
  return "?";
}

struct Event {
  std::string resource;  // furnace for MELT/POUR, tank for CAST
  std::string peer;      // POUR: receiving tank; CAST: source furnace
  EventKind kind = EventKind::kMelt;
  double start_min = 0.0;
  double end_min = 0.0;
  int cycle_index = 0;   // batch ordinal on the furnace that melted it

  bool operator==(const Event&) const = default;
};

// kSteadyState lays the day out as one period of a repeating schedule: the
// first batches of the day were melted at the end of the previous one, so a
// melt may appear as two segments, [a, horizon) and [0, b). kColdStart
// begins with empty furnaces at minute 0 and truncates work at the horizon.
enum class ScheduleMode { kSteadyState, kColdStart };

inline const char* to_string(ScheduleMode m) {
  return m == ScheduleMode::kSteadyState ? "steady-state" : "cold-start";
}

struct Timeline {
  std::vector<Event> events;
  double horizon_min = 0.0;
  ScheduleMode mode = ScheduleMode::kSteadyState;

  bool operator==(const Timeline&) const = default;
};

enum class ConflictCode {
  kUnknownKind,
  kBadInterval,
  kFurnaceOverlap,
  kTankOverlap,
  kPourBeforeMelt,
  kCastWithoutPour,
  kTopologyMismatch,
  kRatioExceeded,
  kCapacityExceeded,
};

inline const char* to_string(ConflictCode c) {
  switch (c) {
    case ConflictCode::kUnknownKind: return "WRONG_RESOURCE";
    case ConflictCode::kBadInterval: return "BAD_INTERVAL";
    case ConflictCode::kFurnaceOverlap: return "FURNACE_OVERLAP";
    case ConflictCode::kTankOverlap: return "TANK_OVERLAP";
    case ConflictCode::kPourBeforeMelt: return "POUR_BEFORE_MELT";
    case ConflictCode::kCastWithoutPour: return "CAST_WITHOUT_POUR";
    case ConflictCode::kTopologyMismatch: return "TOPOLOGY_MISMATCH";
    case ConflictCode::kRatioExceeded: return "RATIO_EXCEEDED";
    case ConflictCode::kCapacityExceeded: return "CAPACITY_EXCEEDED";
  }
  return "?";
}

struct Conflict {
  ConflictCode code;
  std::string message;

  bool operator==(const Conflict&) const = default;
};

struct ScheduleReport {
  std::map<std::string, double> achieved_cycles_per_tank;
  std::map<std::string, double> busy_minutes_per_resource;
  std::map<std::string, double> utilization_per_resource;
  std::map<std::string, double> idle_minutes_per_furnace;
  std::vector<Conflict> conflicts;

  bool has_conflict(ConflictCode code) const {
    return std::any_of(conflicts.begin(), conflicts.end(),
                       [code](const Conflict& c) { return c.code == code; });
  }
  bool operator==(const ScheduleReport&) const = default;
};

namespace internal {

// Planned cycles below this are treated as no work.
inline constexpr double kNegligibleCycles = 1e-9;

struct Feeder {
  const Furnace* furnace;
  double cycles;
};

inline std::vector<Feeder> feeders_of(const Scenario& s, const CyclePlan& plan,
                                      const TankCastingLine& t) {
  std::vector<Feeder> out;
  for (std::size_t j = 0; j < s.furnaces.size(); ++j) {
    const Furnace& f = s.furnaces[j];
    if (f.tank_id == t.id && plan.cycles[j] > kNegligibleCycles) {
      out.push_back({&f, plan.cycles[j]});
    }
  }
  std::sort(out.begin(), out.end(), [](const Feeder& a, const Feeder& b) {
    return a.furnace->id < b.furnace->id;
  });
  return out;
}

inline double cast_minutes(const TankCastingLine& t, const Furnace& f, double w) {
  return t.cycle_time_min * w * f.output_efficiency * t.casting_efficiency;
}

// Appends [start, end) clipped to [0, horizon); empty pieces are dropped.
inline void push_interval(std::vector<Event>& out, Event e, double horizon) {
  e.start_min = std::max(e.start_min, 0.0);
  e.end_min = std::min(e.end_min, horizon);
  if (e.start_min >= horizon || e.end_min <= e.start_min) return;
  out.push_back(std::move(e));
}

// Round robin over the tank's feeders. Every furnace splits its daily
// cycles into K equal batches (K = largest ceil(r) among the feeders), and
// each round pours one batch per furnace in id order. A round lasts
// max(sum of casts, longest melt), which fits K rounds into the horizon for
// any capacity-feasible plan. Melts finish exactly at their pour.
inline void steady_state_tank(const Scenario& s, const CyclePlan& plan,
                              const TankCastingLine& t, double horizon,
                              std::vector<Event>& out) {
  const std::vector<Feeder> feeders = feeders_of(s, plan, t);
  if (feeders.empty()) return;
  int rounds = 1;
  for (const Feeder& fd : feeders) {
    rounds = std::max(rounds, static_cast<int>(std::ceil(fd.cycles - kNegligibleCycles)));
  }
  std::vector<double> melt(feeders.size());
  std::vector<double> cast(feeders.size());
  double period = 0.0;
  double casts_per_round = 0.0;
  for (std::size_t i = 0; i < feeders.size(); ++i) {
    const double w = feeders[i].cycles / rounds;
    melt[i] = feeders[i].furnace->cycle_time_min * w;
    cast[i] = cast_minutes(t, *feeders[i].furnace, w);
    casts_per_round += cast[i];
    period = std::max(period, melt[i]);
  }
  period = std::max(period, casts_per_round);

  for (int k = 0; k < rounds; ++k) {
    double pour = k * period;
    for (std::size_t i = 0; i < feeders.size(); ++i) {
      const std::string& fid = feeders[i].furnace->id;
      const double melt_start = pour - melt[i];
      if (melt_start < -kTimeTolerance) {
        push_interval(out, {fid, t.id, EventKind::kMelt, horizon + melt_start, horizon, k},
                      horizon);
        push_interval(out, {fid, t.id, EventKind::kMelt, 0.0, pour, k}, horizon);
      } else {
        push_interval(out, {fid, t.id, EventKind::kMelt, melt_start, pour, k}, horizon);
      }
      if (pour < horizon) {
        out.push_back({fid, t.id, EventKind::kPour, pour, pour, k});
        push_interval(out, {t.id, fid, EventKind::kCast, pour, pour + cast[i], k},
                      horizon);
      }
      pour += cast[i];
    }
  }
}

// Greedy earliest-available dispatch from an empty line at minute 0. Full
// batches first, then one pro-rata batch for the fractional remainder.
inline void cold_start_tank(const Scenario& s, const CyclePlan& plan,
                            const TankCastingLine& t, double horizon,
                            std::vector<Event>& out) {
  const std::vector<Feeder> feeders = feeders_of(s, plan, t);
  struct State {
    std::vector<double> batches;
    std::size_t next = 0;
    std::optional<double> ready;  // melt done, holding the batch
  };
  std::vector<State> states(feeders.size());
  for (std::size_t i = 0; i < feeders.size(); ++i) {
    double r = feeders[i].cycles;
    const double whole = std::floor(r + kNegligibleCycles);
    for (int b = 0; b < static_cast<int>(whole); ++b) states[i].batches.push_back(1.0);
    if (r - whole > kNegligibleCycles) states[i].batches.push_back(r - whole);
  }

  auto start_melt = [&](std::size_t i, double at) {
    State& st = states[i];
    if (st.next >= st.batches.size()) {
      st.ready.reset();
      return;
    }
    const Furnace& f = *feeders[i].furnace;
    const double end = at + f.cycle_time_min * st.batches[st.next];
    push_interval(out, {f.id, t.id, EventKind::kMelt, at, end,
                        static_cast<int>(st.next)},
                  horizon);
    st.ready = end;
  };
  for (std::size_t i = 0; i < feeders.size(); ++i) start_melt(i, 0.0);

  double tank_free = 0.0;
  while (true) {
    std::size_t pick = feeders.size();
    for (std::size_t i = 0; i < feeders.size(); ++i) {
      if (!states[i].ready) continue;
      // feeders are sorted by id, so strict < keeps the lexicographic tie-break
      if (pick == feeders.size() || *states[i].ready < *states[pick].ready) pick = i;
    }
    if (pick == feeders.size()) break;
    State& st = states[pick];
    const Furnace& f = *feeders[pick].furnace;
    const double pour = std::max(*st.ready, tank_free);
    if (pour >= horizon) break;
    const int index = static_cast<int>(st.next);
    const double c = cast_minutes(t, f, st.batches[st.next]);
    out.push_back({f.id, t.id, EventKind::kPour, pour, pour, index});
    push_interval(out, {t.id, f.id, EventKind::kCast, pour, pour + c, index}, horizon);
    tank_free = pour + c;
    ++st.next;
    start_melt(pick, pour);
  }
}

inline int kind_rank(EventKind k) {
  switch (k) {
    case EventKind::kPour: return 0;
    case EventKind::kCast: return 1;
    case EventKind::kMelt: return 2;
  }
  return 3;
}

}  // namespace internal

// Lays out a concrete day for `plan`. Deterministic; events are ordered by
// start time, then kind, then resource.
inline Timeline build_schedule(const Scenario& s, const CyclePlan& plan,
                               ScheduleMode mode = ScheduleMode::kSteadyState) {
  if (plan.cycles.size() != s.furnaces.size()) {
    throw std::invalid_argument("plan has " + std::to_string(plan.cycles.size()) +
                                " cycle counts for " +
                                std::to_string(s.furnaces.size()) + " furnaces");
  }
  for (const auto& f : s.furnaces) internal::tank_of(s, f);

  Timeline tl;
  tl.mode = mode;
  tl.horizon_min = s.horizon_min();
  for (const auto& t : s.tanks) {
    if (mode == ScheduleMode::kSteadyState) {
      internal::steady_state_tank(s, plan, t, tl.horizon_min, tl.events);
    } else {
      internal::cold_start_tank(s, plan, t, tl.horizon_min, tl.events);
    }
  }
  std::stable_sort(tl.events.begin(), tl.events.end(), [](const Event& a, const Event& b) {
    return std::make_tuple(a.start_min, internal::kind_rank(a.kind), a.resource,
                           a.cycle_index) <
           std::make_tuple(b.start_min, internal::kind_rank(b.kind), b.resource,
                           b.cycle_index);
  });
  return tl;
}

// Recomputes occupancy, throughput and feasibility from the events alone.
// Throws std::invalid_argument for events naming resources the scenario does
// not have; everything else is reported as a conflict.
inline ScheduleReport simulate(const Scenario& s, const Timeline& tl) {
  ScheduleReport rep;
  auto conflict = [&rep](ConflictCode c, std::string msg) {
    rep.conflicts.push_back({c, std::move(msg)});
  };
  const double horizon = tl.horizon_min;

  for (const auto& f : s.furnaces) rep.busy_minutes_per_resource[f.id] = 0.0;
  for (const auto& t : s.tanks) {
    rep.busy_minutes_per_resource[t.id] = 0.0;
    rep.achieved_cycles_per_tank[t.id] = 0.0;
  }

  std::map<std::string, std::vector<const Event*>> intervals;
  std::vector<const Event*> pours;
  std::vector<const Event*> casts;

  for (const Event& e : tl.events) {
    const Furnace* f = s.find_furnace(e.resource);
    const TankCastingLine* t = s.find_tank(e.resource);
    if (f == nullptr && t == nullptr) {
      throw std::invalid_argument("event references unknown resource '" + e.resource + "'");
    }
    if (e.kind != EventKind::kMelt && s.find_furnace(e.peer) == nullptr &&
        s.find_tank(e.peer) == nullptr) {
      throw std::invalid_argument("event references unknown resource '" + e.peer + "'");
    }
    const std::string where = std::string(to_string(e.kind)) + " on '" + e.resource +
                              "' at " + std::to_string(e.start_min);
    const bool on_furnace = f != nullptr;
    if ((e.kind == EventKind::kCast) == on_furnace) {
      conflict(ConflictCode::kUnknownKind, where + ": wrong resource type");
      continue;
    }
    const bool instantaneous = e.kind == EventKind::kPour;
    if (e.start_min < -kTimeTolerance || e.end_min > horizon + kTimeTolerance ||
        (instantaneous ? std::abs(e.end_min - e.start_min) > kTimeTolerance
                       : e.end_min <= e.start_min)) {
      conflict(ConflictCode::kBadInterval, where + ": invalid interval");
      continue;
    }
    if (instantaneous) {
      pours.push_back(&e);
    } else {
      intervals[e.resource].push_back(&e);
      rep.busy_minutes_per_resource[e.resource] += e.end_min - e.start_min;
      if (e.kind == EventKind::kCast) casts.push_back(&e);
    }
  }

  for (auto& [id, evs] : intervals) {
    std::sort(evs.begin(), evs.end(), [](const Event* a, const Event* b) {
      return a->start_min < b->start_min;
    });
    double reach = -1.0;
    for (const Event* e : evs) {
      if (e->start_min < reach - kTimeTolerance) {
        conflict(e->kind == EventKind::kMelt ? ConflictCode::kFurnaceOverlap
                                             : ConflictCode::kTankOverlap,
                 std::string(to_string(e->kind)) + " on '" + id + "' at " +
                     std::to_string(e->start_min) + " overlaps earlier work ending " +
                     std::to_string(reach));
      }
      reach = std::max(reach, e->end_min);
    }
  }

  std::map<std::string, std::set<std::string>> pouring_into;
  for (const Event* p : pours) {
    const Furnace& f = *s.find_furnace(p->resource);
    pouring_into[p->peer].insert(f.id);
    if (f.tank_id != p->peer) {
      conflict(ConflictCode::kTopologyMismatch, "furnace '" + f.id + "' pours into '" +
                                                    p->peer + "' but is connected to '" +
                                                    f.tank_id + "'");
    }
    bool melted = false;
    for (const Event* m : intervals[f.id]) {
      if (m->kind != EventKind::kMelt || m->cycle_index != p->cycle_index) continue;
      const bool done_before = m->end_min <= p->start_min + kTimeTolerance;
      // In a steady-state day a melt reaching the horizon completes at minute 0.
      const bool wrapped = tl.mode == ScheduleMode::kSteadyState &&
                           m->end_min >= horizon - kTimeTolerance;
      melted = melted || done_before || wrapped;
    }
    if (!melted) {
      conflict(ConflictCode::kPourBeforeMelt,
               "furnace '" + f.id + "' pours batch " + std::to_string(p->cycle_index) +
                   " at " + std::to_string(p->start_min) + " before melting it");
    }
  }
  for (const auto& [tank, sources] : pouring_into) {
    if (sources.size() > static_cast<std::size_t>(kMaxFurnacesPerTank)) {
      conflict(ConflictCode::kRatioExceeded, "tank '" + tank + "' receives from " +
                                                 std::to_string(sources.size()) +
                                                 " furnaces");
    }
  }

  std::sort(casts.begin(), casts.end(), [](const Event* a, const Event* b) {
    return a->start_min < b->start_min;
  });
  std::vector<bool> used(pours.size(), false);
  for (const Event* c : casts) {
    std::size_t match = pours.size();
    for (std::size_t i = 0; i < pours.size(); ++i) {
      const Event* p = pours[i];
      if (used[i] || p->resource != c->peer || p->peer != c->resource) continue;
      if (p->start_min > c->start_min + kTimeTolerance) continue;
      if (match == pours.size() || p->start_min < pours[match]->start_min) match = i;
    }
    if (match == pours.size()) {
      conflict(ConflictCode::kCastWithoutPour, "CAST on '" + c->resource + "' at " +
                                                   std::to_string(c->start_min) +
                                                   " has no preceding pour from '" +
                                                   c->peer + "'");
    } else {
      used[match] = true;
    }
  }

  auto account = [&](const std::string& id, double capacity) {
    const double busy = rep.busy_minutes_per_resource[id];
    if (busy > capacity + kTimeTolerance) {
      conflict(ConflictCode::kCapacityExceeded, "'" + id + "' busy " +
                                                    std::to_string(busy) +
                                                    " min exceeds capacity " +
                                                    std::to_string(capacity));
    }
    rep.utilization_per_resource[id] = std::min(busy / capacity, 1.0);
    return std::max(capacity - busy, 0.0);
  };
  for (const auto& f : s.furnaces) {
    rep.idle_minutes_per_furnace[f.id] = account(f.id, f.daily_capacity_min);
  }
  for (const auto& t : s.tanks) {
    account(t.id, t.daily_capacity_min);
    rep.achieved_cycles_per_tank[t.id] =
        rep.busy_minutes_per_resource[t.id] / t.cycle_time_min;
  }
  return rep;
}

// Idle minutes between the first and last CAST on a tank.
inline double cast_gap_minutes(const Timeline& tl, const std::string& tank_id) {
  std::vector<std::pair<double, double>> spans;
  for (const auto& e : tl.events) {
    if (e.kind == EventKind::kCast && e.resource == tank_id) {
      spans.emplace_back(e.start_min, e.end_min);
    }
  }
  if (spans.empty()) return 0.0;
  std::sort(spans.begin(), spans.end());
  double gap = 0.0;
  double reach = spans.front().second;
  for (const auto& [a, b] : spans) {
    if (a > reach) gap += a - reach;
    reach = std::max(reach, b);
  }
  return gap;
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;

  bool operator==(const Check&) const = default;
};

struct Verdict {
  bool pass = true;
  std::vector<Check> checks;

  bool operator==(const Verdict&) const = default;
};

// Compares a simulated day with what the plan promised: capacity
// feasibility, zero conflicts, per-tank cycles within 0.01, and revenue from
// achieved cycles within 0.5% of the planned gross revenue.
inline Verdict cross_check(const Scenario& s, const CyclePlan& plan,
                           const ScheduleReport& report) {
  Verdict v;
  auto record = [&v](std::string name, bool pass, std::string detail) {
    v.pass = v.pass && pass;
    v.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  const ProfitBreakdown planned = evaluate_plan(s, plan);
  {
    std::string detail = "all capacity constraints hold";
    if (!planned.feasible()) {
      detail = "violated:";
      for (const auto& row : planned.violated_constraints) detail += " " + row;
    }
    record("CAPACITY", planned.feasible(), detail);
  }
  {
    std::string detail = std::to_string(report.conflicts.size()) + " conflicts";
    for (const auto& c : report.conflicts) {
      detail += std::string("; ") + to_string(c.code) + ": " + c.message;
    }
    record("CONFLICTS", report.conflicts.empty(), detail);
  }

  double achieved_revenue = 0.0;
  for (const auto& t : s.tanks) {
    const auto it = report.achieved_cycles_per_tank.find(t.id);
    const double achieved = it == report.achieved_cycles_per_tank.end() ? 0.0 : it->second;
    const double want = planned.effective_cycles_per_tank.at(t.id);
    achieved_revenue += achieved * t.revenue_per_cycle_usd();
    record("CYCLES:" + t.id, std::abs(achieved - want) <= kCycleAgreementTolerance,
           "achieved " + std::to_string(achieved) + " vs planned " + std::to_string(want));
  }

  const double gross = planned.gross_revenue_usd;
  const bool revenue_ok =
      gross > 1e-9 ? std::abs(achieved_revenue - gross) <= kRevenueAgreementFraction * gross
                   : std::abs(achieved_revenue) <= 1e-6;
  record("REVENUE", revenue_ok,
         "achieved " + std::to_string(achieved_revenue) + " vs planned " +
             std::to_string(gross) + " USD/day");
  return v;
}

}  // namespace linebal

#endif  // LINEBAL_SCHEDULE_HPP_
