// Copyright 2026 The mgspa Authors. All rights reserved.
//
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

#ifndef MGSPA_SIMPLEX_H_
#define MGSPA_SIMPLEX_H_

#include <vector>

namespace mgspa {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

// Dense linear program over variables x. Variables are non-negative unless
// marked free.
struct LinearProgram {
  explicit LinearProgram(int num_vars)
      : objective(num_vars, 0.0), free(num_vars, false) {}

  int num_vars() const { return static_cast<int>(objective.size()); }
  // Adds a constraint row and returns its index.
  int AddRow(std::vector<double> coeffs, RowSense sense, double rhs);

  std::vector<double> objective;
  bool maximize = true;
  std::vector<bool> free;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
};

// kNumerical: the final point failed the feasibility audit.
enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumerical,
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  int pivots = 0;
};

// Two-phase primal simplex on a dense tableau. A point that fails the
// round-off audit is recomputed with SolveLpRevised.
LpSolution SolveLp(const LinearProgram& lp, int max_pivots = 1000000);

// Two-phase revised simplex that refactorizes the basis every pivot. Slower,
// but free of accumulated tableau round-off.
LpSolution SolveLpRevised(const LinearProgram& lp, int max_pivots = 1000000);

}  // namespace mgspa

#endif  // MGSPA_SIMPLEX_H_
