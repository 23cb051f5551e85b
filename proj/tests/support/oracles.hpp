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

// Brute-force reference solvers used only by tests. They share no code with
// the simplex or branch-and-bound implementations.

#ifndef LINEBAL_TESTS_SUPPORT_ORACLES_HPP_
#define LINEBAL_TESTS_SUPPORT_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace linebal::testing {

// Plain data so the oracles do not depend on lp::LpProblem.
struct DenseLp {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
};

// Solves the square system M x = v by Gaussian elimination with partial
// pivoting. Returns nullopt if M is (numerically) singular.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> m,
                                                       std::vector<double> v) {
  const std::size_t n = v.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-12) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(v[piv], v[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      v[r] -= f * v[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = v[i] / m[i][i];
  return x;
}

// Max of the objective over vertices of {Ax <= b, 0 <= x <= box}; nullopt if
// that set has no vertex.
inline std::optional<double> best_vertex(const DenseLp& lp, double box) {
  const std::size_t n = lp.objective.size();
  // Hyperplanes: constraint rows, x_j = 0, x_j = box.
  std::vector<std::vector<double>> planes = lp.rows;
  std::vector<double> values = lp.rhs;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    planes.push_back(e);
    values.push_back(0.0);
    planes.push_back(e);
    values.push_back(box);
  }

  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t depth,
                                                             std::size_t from) {
    if (depth == n) {
      std::vector<std::vector<double>> m;
      std::vector<double> v;
      for (std::size_t k : pick) {
        m.push_back(planes[k]);
        v.push_back(values[k]);
      }
      auto x = solve_square(m, v);
      if (!x) return;
      // Round-off grows with the box, so bound checks scale with it.
      const double slack = 1e-9 * (1.0 + box * 1e-3);
      for (std::size_t j = 0; j < n; ++j) {
        if ((*x)[j] < -slack || (*x)[j] > box + slack) return;
      }
      for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        double lhs = 0.0;
        double scale = std::abs(lp.rhs[i]);
        for (std::size_t j = 0; j < n; ++j) {
          lhs += lp.rows[i][j] * (*x)[j];
          scale += std::abs(lp.rows[i][j] * (*x)[j]);
        }
        if (lhs > lp.rhs[i] + 1e-9 * (1.0 + scale)) return;
      }
      double z = 0.0;
      for (std::size_t j = 0; j < n; ++j) z += lp.objective[j] * (*x)[j];
      if (!best || z > *best) best = z;
      return;
    }
    for (std::size_t k = from; k < planes.size(); ++k) {
      pick[depth] = k;
      choose(depth + 1, k + 1);
    }
  };
  choose(0, 0);
  return best;
}

struct VertexOracleResult {
  bool feasible = false;
  bool bounded = false;
  double value = 0.0;
};

// Enumerates vertices inside two nested boxes; if enlarging the box raises
// the optimum, the LP is unbounded.
inline VertexOracleResult vertex_oracle(const DenseLp& lp) {
  constexpr double kSmallBox = 1e7;
  constexpr double kLargeBox = 1e8;
  VertexOracleResult out;
  const auto small = best_vertex(lp, kSmallBox);
  if (!small) return out;
  out.feasible = true;
  const auto large = best_vertex(lp, kLargeBox);
  out.bounded = large && *large <= *small + 1e-6 * (1.0 + std::abs(*small));
  out.value = *small;
  return out;
}

// Exhaustive search over integer points with 0 <= x_j <= upper[j].
inline std::optional<double> integer_oracle(const DenseLp& lp, const std::vector<int>& upper) {
  const std::size_t n = lp.objective.size();
  std::vector<int> x(n, 0);
  std::optional<double> best;
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < lp.rows.size() && ok; ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += lp.rows[i][j] * x[j];
      ok = lhs <= lp.rhs[i] + 1e-9;
    }
    if (ok) {
      double z = 0.0;
      for (std::size_t j = 0; j < n; ++j) z += lp.objective[j] * x[j];
      if (!best || z > *best) best = z;
    }
    std::size_t j = 0;
    while (j < n && x[j] == upper[j]) x[j++] = 0;
    if (j == n) break;
    ++x[j];
  }
  return best;
}

}  // namespace linebal::testing

#endif  // LINEBAL_TESTS_SUPPORT_ORACLES_HPP_
