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

#include "mgspa/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "mgspa/common.h"

namespace mgspa {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
constexpr double kNoiseCost = 1e-7;
constexpr double kFeasTol = 1e-9;

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, -1), partner_(cols, -1), in_basis_(cols, false) {}

  // The two halves of a split free variable. Their columns are negatives of
  // each other, so at most one may be basic.
  void SetPartners(int a, int b) {
    partner_[a] = b;
    partner_[b] = a;
  }
  void SetBasis(int r, int c) {
    if (basis_[r] >= 0) in_basis_[basis_[r]] = false;
    basis_[r] = c;
    in_basis_[c] = true;
  }

  double& at(int r, int c) { return data_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  // Row `rows_` holds reduced costs of the current phase objective.
  double& cost(int c) { return at(rows_, c); }
  const std::vector<int>& basis() const { return basis_; }

  void Pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= factor * at(pr, c);
      at(r, pc) = 0.0;
      if (r < rows_ && at(r, cols_) < 0.0 && at(r, cols_) > -kFeasTol) {
        at(r, cols_) = 0.0;
      }
    }
    SetBasis(pr, pc);
  }

  // Minimizes the cost row over the allowed columns.
  LpStatus Run(const std::vector<bool>& allowed, int max_pivots, int* pivots) {
    // Columns whose negative reduced cost is round-off and that admit no
    // pivot row are parked until the next pivot.
    std::vector<bool> parked(cols_, false);
    while (true) {
      int pc = -1;
      for (int c = 0; c < cols_; ++c) {
        if (parked[c]) continue;
        if (partner_[c] >= 0 && in_basis_[partner_[c]]) continue;
        if (allowed[c] && cost(c) < -kCostTol) {
          pc = c;
          break;
        }
      }
      if (pc < 0) return LpStatus::kOptimal;
      // Harris two-pass ratio test: the first pass finds the longest step
      // that keeps every basic variable above -kFeasTol, the second picks
      // the largest pivot among rows blocking within that step. Degenerate
      // steps fall back to Bland's lowest-index rule.
      double step = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, pc);
        if (a > kPivotTol) step = std::min(step, (rhs(r) + kFeasTol) / a);
      }
      int pr = -1;
      bool degenerate = false;
      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, pc);
        if (a <= kPivotTol || rhs(r) / a > step) continue;
        if (rhs(r) <= kFeasTol) degenerate = true;
        if (pr < 0 || a > at(pr, pc)) pr = r;
      }
      if (degenerate) {
        const double floor = 1e-3 * at(pr, pc);
        pr = -1;
        for (int r = 0; r < rows_; ++r) {
          const double a = at(r, pc);
          if (a < floor || a <= kPivotTol || rhs(r) / a > step) continue;
          if (pr < 0 || basis_[r] < basis_[pr]) pr = r;
        }
      }
      if (pr < 0) {
        if (cost(pc) > -kNoiseCost) {
          parked[pc] = true;
          continue;
        }
        return LpStatus::kUnbounded;
      }
      if (++*pivots > max_pivots) return LpStatus::kIterationLimit;
      Pivot(pr, pc);
      std::fill(parked.begin(), parked.end(), false);
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
  std::vector<int> basis_;
  std::vector<int> partner_;
  std::vector<bool> in_basis_;
};

}  // namespace

int LinearProgram::AddRow(std::vector<double> coeffs, RowSense sense,
                          double b) {
  Require(static_cast<int>(coeffs.size()) == num_vars(),
          ErrorKind::kShapeMismatch, "LP row width mismatch");
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(b);
  return static_cast<int>(rows.size()) - 1;
}

namespace {

// Equality form A x = b, b >= 0, x >= 0: structural columns (free variables
// split into +/-), one slack or surplus per inequality, then one artificial
// per row that has no slack to start the basis.
struct StandardForm {
  int m = 0;
  int cols = 0;
  int first_art = 0;
  std::vector<int> pos_col;
  std::vector<int> neg_col;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<int> start_basis;
};

StandardForm ToStandardForm(const LinearProgram& lp) {
  const int n = lp.num_vars();
  StandardForm f;
  f.m = static_cast<int>(lp.rows.size());
  f.pos_col.assign(n, -1);
  f.neg_col.assign(n, -1);
  int cols = 0;
  for (int j = 0; j < n; ++j) {
    f.pos_col[j] = cols++;
    if (lp.free[j]) f.neg_col[j] = cols++;
  }
  std::vector<double> sign(f.m);
  std::vector<RowSense> sense(f.m);
  std::vector<int> slack_col(f.m, -1), art_col(f.m, -1);
  for (int r = 0; r < f.m; ++r) {
    sign[r] = lp.rhs[r] < 0 ? -1.0 : 1.0;
    sense[r] = lp.senses[r];
    if (sign[r] < 0 && sense[r] != RowSense::kEqual) {
      sense[r] = sense[r] == RowSense::kLessEqual ? RowSense::kGreaterEqual
                                                  : RowSense::kLessEqual;
    }
    if (sense[r] != RowSense::kEqual) slack_col[r] = cols++;
  }
  f.first_art = cols;
  for (int r = 0; r < f.m; ++r) {
    if (sense[r] != RowSense::kLessEqual) art_col[r] = cols++;
  }
  f.cols = cols;
  f.a = Eigen::MatrixXd::Zero(f.m, cols);
  f.b.resize(f.m);
  f.start_basis.assign(f.m, -1);
  for (int r = 0; r < f.m; ++r) {
    for (int j = 0; j < n; ++j) {
      const double v = sign[r] * lp.rows[r][j];
      f.a(r, f.pos_col[j]) = v;
      if (f.neg_col[j] >= 0) f.a(r, f.neg_col[j]) = -v;
    }
    if (slack_col[r] >= 0) {
      f.a(r, slack_col[r]) = sense[r] == RowSense::kLessEqual ? 1.0 : -1.0;
    }
    f.b[r] = sign[r] * lp.rhs[r];
    if (art_col[r] >= 0) {
      f.a(r, art_col[r]) = 1.0;
      f.start_basis[r] = art_col[r];
    } else {
      f.start_basis[r] = slack_col[r];
    }
  }
  return f;
}

Eigen::VectorXd Phase2Costs(const LinearProgram& lp, const StandardForm& f) {
  const double dir = lp.maximize ? -1.0 : 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(f.cols);
  for (int j = 0; j < lp.num_vars(); ++j) {
    c[f.pos_col[j]] = dir * lp.objective[j];
    if (f.neg_col[j] >= 0) c[f.neg_col[j]] = -dir * lp.objective[j];
  }
  return c;
}

// Maps column values back to x, then audits the point against the original
// rows.
void Finish(const LinearProgram& lp, const StandardForm& f,
            const std::vector<double>& col_value, LpSolution* sol) {
  const int n = lp.num_vars();
  sol->x.assign(n, 0.0);
  sol->objective = 0.0;
  for (int j = 0; j < n; ++j) {
    sol->x[j] = col_value[f.pos_col[j]];
    if (f.neg_col[j] >= 0) sol->x[j] -= col_value[f.neg_col[j]];
    sol->objective += lp.objective[j] * sol->x[j];
  }
  double scale = 1.0;
  for (int r = 0; r < f.m; ++r) scale = std::max(scale, std::abs(lp.rhs[r]));
  for (int j = 0; j < n; ++j) {
    if (!lp.free[j] && sol->x[j] < -1e-7 * scale) {
      sol->status = LpStatus::kNumerical;
    }
  }
  for (int r = 0; r < f.m; ++r) {
    double acc = 0.0, mag = 1.0;
    for (int j = 0; j < n; ++j) {
      acc += lp.rows[r][j] * sol->x[j];
      mag = std::max(mag, std::abs(lp.rows[r][j] * sol->x[j]));
    }
    const double d = acc - lp.rhs[r];
    const double viol = lp.senses[r] == RowSense::kLessEqual      ? d
                        : lp.senses[r] == RowSense::kGreaterEqual ? -d
                                                                  : std::abs(d);
    if (viol > 1e-7 * mag) sol->status = LpStatus::kNumerical;
  }
}

LpSolution SolveTableau(const LinearProgram& lp, const StandardForm& f,
                        int max_pivots) {
  const int m = f.m;
  const int cols = f.cols;
  const int first_art = f.first_art;
  Tableau t(m, cols);
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (f.neg_col[j] >= 0) t.SetPartners(f.pos_col[j], f.neg_col[j]);
  }
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < cols; ++c) t.at(r, c) = f.a(r, c);
    t.rhs(r) = f.b[r];
    t.SetBasis(r, f.start_basis[r]);
  }

  LpSolution sol;
  std::vector<bool> allowed(cols, true);

  // Phase 1: minimize the sum of artificials.
  if (first_art < cols) {
    for (int r = 0; r < m; ++r) {
      if (f.start_basis[r] < first_art) continue;
      for (int c = 0; c <= cols; ++c) {
        if (c < first_art || c == cols) t.cost(c) -= t.at(r, c);
      }
    }
    const LpStatus st = t.Run(allowed, max_pivots, &sol.pivots);
    if (st == LpStatus::kIterationLimit) {
      sol.status = st;
      return sol;
    }
    if (-t.cost(cols) > 1e-9) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis.
    for (int r = 0; r < m; ++r) {
      if (t.basis()[r] < first_art) continue;
      for (int c = 0; c < first_art; ++c) {
        if (std::abs(t.at(r, c)) > 1e-9) {
          t.Pivot(r, c);
          break;
        }
      }
    }
    for (int c = first_art; c < cols; ++c) allowed[c] = false;
  }

  // Phase 2 cost row.
  const Eigen::VectorXd c2 = Phase2Costs(lp, f);
  for (int c = 0; c <= cols; ++c) t.cost(c) = c < cols ? c2[c] : 0.0;
  for (int r = 0; r < m; ++r) {
    const double cb = t.cost(t.basis()[r]);
    if (cb == 0.0) continue;
    for (int c = 0; c <= cols; ++c) t.cost(c) -= cb * t.at(r, c);
  }
  sol.status = t.Run(allowed, max_pivots, &sol.pivots);
  if (sol.status != LpStatus::kOptimal) return sol;
  std::vector<double> col_value(cols, 0.0);
  for (int r = 0; r < m; ++r) col_value[t.basis()[r]] = t.rhs(r);
  Finish(lp, f, col_value, &sol);
  return sol;
}

// Revised simplex that refactorizes the basis from the original columns at
// every pivot, so no round-off carries over between iterations.
class RevisedSimplex {
 public:
  RevisedSimplex(const StandardForm& f, const LinearProgram& lp)
      : f_(f), basis_(f.start_basis), partner_(f.cols, -1),
        in_basis_(f.cols, false) {
    for (int j = 0; j < lp.num_vars(); ++j) {
      if (f.neg_col[j] >= 0) {
        partner_[f.pos_col[j]] = f.neg_col[j];
        partner_[f.neg_col[j]] = f.pos_col[j];
      }
    }
    for (int c : basis_) in_basis_[c] = true;
  }

  void Factor() {
    Eigen::MatrixXd bm(f_.m, f_.m);
    for (int r = 0; r < f_.m; ++r) bm.col(r) = f_.a.col(basis_[r]);
    binv_ = bm.fullPivLu().inverse();
    xb_ = binv_ * f_.b;
  }

  LpStatus Run(const Eigen::VectorXd& cost, const std::vector<bool>& allowed,
               int max_pivots, int* pivots) {
    std::vector<bool> parked(f_.cols, false);
    while (true) {
      Factor();
      Eigen::VectorXd cb(f_.m);
      for (int r = 0; r < f_.m; ++r) cb[r] = cost[basis_[r]];
      const Eigen::RowVectorXd y = cb.transpose() * binv_;
      const Eigen::RowVectorXd d = cost.transpose() - y * f_.a;
      int pc = -1;
      for (int c = 0; c < f_.cols; ++c) {
        if (in_basis_[c] || parked[c] || !allowed[c]) continue;
        if (partner_[c] >= 0 && in_basis_[partner_[c]]) continue;
        if (d[c] < -kCostTol) {
          pc = c;
          break;
        }
      }
      if (pc < 0) return LpStatus::kOptimal;
      const Eigen::VectorXd alpha = binv_ * f_.a.col(pc);
      const double ptol =
          std::max(kPivotTol, 1e-9 * alpha.cwiseAbs().maxCoeff());
      double step = std::numeric_limits<double>::infinity();
      for (int r = 0; r < f_.m; ++r) {
        if (alpha[r] > ptol) {
          step = std::min(step, (std::max(xb_[r], 0.0) + kFeasTol) / alpha[r]);
        }
      }
      int pr = -1;
      bool degenerate = false;
      for (int r = 0; r < f_.m; ++r) {
        if (alpha[r] <= ptol || std::max(xb_[r], 0.0) / alpha[r] > step) {
          continue;
        }
        if (xb_[r] <= kFeasTol) degenerate = true;
        if (pr < 0 || alpha[r] > alpha[pr]) pr = r;
      }
      if (degenerate) {
        const double floor = 1e-3 * alpha[pr];
        pr = -1;
        for (int r = 0; r < f_.m; ++r) {
          if (alpha[r] < floor || alpha[r] <= ptol ||
              std::max(xb_[r], 0.0) / alpha[r] > step) {
            continue;
          }
          if (pr < 0 || basis_[r] < basis_[pr]) pr = r;
        }
      }
      if (pr < 0) {
        if (d[pc] > -kNoiseCost) {
          parked[pc] = true;
          continue;
        }
        return LpStatus::kUnbounded;
      }
      if (++*pivots > max_pivots) return LpStatus::kIterationLimit;
      in_basis_[basis_[pr]] = false;
      basis_[pr] = pc;
      in_basis_[pc] = true;
      std::fill(parked.begin(), parked.end(), false);
    }
  }

  // Swaps basic artificials at zero level for structural or slack columns.
  void DriveOutArtificials() {
    for (int r = 0; r < f_.m; ++r) {
      if (basis_[r] < f_.first_art) continue;
      const Eigen::RowVectorXd row = binv_.row(r) * f_.a;
      for (int c = 0; c < f_.first_art; ++c) {
        if (!in_basis_[c] && std::abs(row[c]) > 1e-9) {
          in_basis_[basis_[r]] = false;
          basis_[r] = c;
          in_basis_[c] = true;
          Factor();
          break;
        }
      }
    }
  }

  const std::vector<int>& basis() const { return basis_; }
  const Eigen::VectorXd& xb() const { return xb_; }

 private:
  const StandardForm& f_;
  std::vector<int> basis_;
  std::vector<int> partner_;
  std::vector<bool> in_basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
};

}  // namespace

LpSolution SolveLpRevised(const LinearProgram& lp, int max_pivots) {
  Require(static_cast<int>(lp.free.size()) == lp.num_vars(),
          ErrorKind::kShapeMismatch, "LP free-flag width mismatch");
  const StandardForm f = ToStandardForm(lp);
  LpSolution sol;
  if (f.m == 0) {
    sol.status = LpStatus::kOptimal;
    const Eigen::VectorXd c = Phase2Costs(lp, f);
    for (int c_ = 0; c_ < f.cols; ++c_) {
      if (c[c_] < 0.0) {
        sol.status = LpStatus::kUnbounded;
        return sol;
      }
    }
    Finish(lp, f, std::vector<double>(f.cols, 0.0), &sol);
    return sol;
  }
  RevisedSimplex rs(f, lp);
  std::vector<bool> allowed(f.cols, true);
  if (f.first_art < f.cols) {
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(f.cols);
    c1.tail(f.cols - f.first_art).setOnes();
    const LpStatus st = rs.Run(c1, allowed, max_pivots, &sol.pivots);
    if (st == LpStatus::kIterationLimit) {
      sol.status = st;
      return sol;
    }
    double infeas = 0.0;
    for (int r = 0; r < f.m; ++r) {
      if (rs.basis()[r] >= f.first_art) infeas += rs.xb()[r];
    }
    if (infeas > 1e-9) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    rs.DriveOutArtificials();
    for (int c = f.first_art; c < f.cols; ++c) allowed[c] = false;
  }
  sol.status = rs.Run(Phase2Costs(lp, f), allowed, max_pivots, &sol.pivots);
  if (sol.status != LpStatus::kOptimal) return sol;
  std::vector<double> col_value(f.cols, 0.0);
  for (int r = 0; r < f.m; ++r) col_value[rs.basis()[r]] = rs.xb()[r];
  Finish(lp, f, col_value, &sol);
  return sol;
}

LpSolution SolveLp(const LinearProgram& lp, int max_pivots) {
  Require(static_cast<int>(lp.free.size()) == lp.num_vars(),
          ErrorKind::kShapeMismatch, "LP free-flag width mismatch");
  const StandardForm f = ToStandardForm(lp);
  LpSolution sol = SolveTableau(lp, f, max_pivots);
  if (sol.status != LpStatus::kNumerical) return sol;
  LpSolution again = SolveLpRevised(lp, max_pivots);
  again.pivots += sol.pivots;
  return again.status == LpStatus::kNumerical && again.x.empty() ? sol : again;
}

}  // namespace mgspa
