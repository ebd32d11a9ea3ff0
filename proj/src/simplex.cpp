#include "asymcc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asymcc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivTol = 1e-10;
constexpr double kDegenStep = 1e-11;
}  // namespace

int LinearProgram::add_var(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars++;
}

void LinearProgram::add_row(std::vector<std::pair<int, double>> terms,
                            double rhs) {
  rows.push_back(Row{std::move(terms), rhs});
}

namespace {

enum class VarState : unsigned char { basic, at_lower, at_upper };

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& opts)
      : lp_(lp), opts_(opts), m_(static_cast<int>(lp.rows.size())) {
    if (static_cast<int>(lp.cost.size()) != lp.num_vars ||
        static_cast<int>(lp.lower.size()) != lp.num_vars ||
        static_cast<int>(lp.upper.size()) != lp.num_vars)
      throw std::invalid_argument("inconsistent LP vector sizes");

    // Start values for structural variables.
    val_.resize(lp.num_vars);
    state_.assign(lp.num_vars, VarState::at_lower);
    for (int j = 0; j < lp.num_vars; ++j) {
      if (lp.lower[j] > lp.upper[j])
        throw std::invalid_argument("variable with empty bound interval");
      bool at_up = !opts.start_at_lower && lp.cost[j] < 0.0 &&
                   std::isfinite(lp.upper[j]);
      state_[j] = at_up ? VarState::at_upper : VarState::at_lower;
      val_[j] = at_up ? lp.upper[j] : lp.lower[j];
      if (!std::isfinite(val_[j]))
        throw std::invalid_argument("variable with no finite starting bound");
    }

    // Row activities decide how many artificial columns Phase I needs.
    beta_.resize(m_);
    std::vector<int> art_rows;
    for (int r = 0; r < m_; ++r) {
      double act = 0.0;
      for (auto [j, a] : lp.rows[r].terms) act += a * val_[j];
      beta_[r] = lp.rows[r].rhs - act;  // slack value
      if (beta_[r] < -opts.tol) art_rows.push_back(r);
    }

    nart_ = static_cast<int>(art_rows.size());
    ncol_ = lp.num_vars + m_ + nart_;
    lo_.assign(ncol_, 0.0);
    hi_.assign(ncol_, kInf);
    std::copy(lp.lower.begin(), lp.lower.end(), lo_.begin());
    std::copy(lp.upper.begin(), lp.upper.end(), hi_.begin());
    state_.resize(ncol_, VarState::at_lower);
    val_.resize(ncol_, 0.0);

    t_.assign(static_cast<std::size_t>(m_) * ncol_, 0.0);
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      double* row = t_.data() + static_cast<std::size_t>(r) * ncol_;
      for (auto [j, a] : lp.rows[r].terms) row[j] += a;
      row[lp.num_vars + r] = 1.0;
      basis_[r] = lp.num_vars + r;
      state_[lp.num_vars + r] = VarState::basic;
    }

    // Rows whose slack would start negative get an artificial basic column
    // instead; the stored row is negated so the basis column stays +e_r.
    int next_art = lp.num_vars + m_;
    for (int r : art_rows) {
      double* row = t_.data() + static_cast<std::size_t>(r) * ncol_;
      for (int c = 0; c < ncol_; ++c) row[c] = -row[c];
      row[next_art] = 1.0;
      state_[lp.num_vars + r] = VarState::at_lower;  // slack leaves the basis
      val_[lp.num_vars + r] = 0.0;
      basis_[r] = next_art;
      state_[next_art] = VarState::basic;
      beta_[r] = -beta_[r];
      ++next_art;
    }
  }

  LpSolution run() {
    LpSolution sol;
    long cap = opts_.max_pivots > 0
                   ? opts_.max_pivots
                   : 200L * (m_ + ncol_) + 20000;

    if (nart_ > 0) {
      std::vector<double> phase1(ncol_, 0.0);
      for (int c = lp_.num_vars + m_; c < ncol_; ++c) phase1[c] = 1.0;
      LpStatus st = optimize(phase1, cap, &sol.pivots);
      if (st != LpStatus::optimal) {
        sol.status = st == LpStatus::unbounded ? LpStatus::infeasible : st;
        return finish(sol);
      }
      double infeas = 0.0;
      for (int r = 0; r < m_; ++r)
        if (basis_[r] >= lp_.num_vars + m_) infeas += beta_[r];
      if (infeas > 1e-7) {
        sol.status = LpStatus::infeasible;
        return finish(sol);
      }
      drop_artificials();
    }

    std::vector<double> phase2(ncol_, 0.0);
    std::copy(lp_.cost.begin(), lp_.cost.end(), phase2.begin());
    sol.status = optimize(phase2, cap, &sol.pivots);
    return finish(sol);
  }

 private:
  LpSolution finish(LpSolution sol) {
    sol.x.assign(lp_.num_vars, 0.0);
    for (int j = 0; j < lp_.num_vars; ++j) sol.x[j] = val_[j];
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < lp_.num_vars) sol.x[basis_[r]] = beta_[r];
    sol.objective = 0.0;
    for (int j = 0; j < lp_.num_vars; ++j)
      sol.objective += lp_.cost[j] * sol.x[j];
    return sol;
  }

  // Any artificial still basic at zero is pivoted out when possible; rows
  // that admit no pivot are redundant and keep a frozen artificial.
  void drop_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < lp_.num_vars + m_) continue;
      const double* row = t_.data() + static_cast<std::size_t>(r) * ncol_;
      int enter = -1;
      for (int c = 0; c < lp_.num_vars + m_; ++c) {
        if (state_[c] == VarState::basic) continue;
        if (hi_[c] - lo_[c] < kPivTol && c < lp_.num_vars) continue;
        if (std::abs(row[c]) > 1e-8) { enter = c; break; }
      }
      if (enter >= 0) {
        int art = basis_[r];
        pivot(r, enter, val_[enter]);
        state_[art] = VarState::at_lower;
        val_[art] = 0.0;
      }
    }
    for (int c = lp_.num_vars + m_; c < ncol_; ++c) {
      lo_[c] = hi_[c] = 0.0;
      val_[c] = 0.0;
    }
  }

  LpStatus optimize(const std::vector<double>& cost, long cap, long* pivots) {
    compute_zrow(cost);
    bool bland = false;
    int degen = 0;
    while (true) {
      if (*pivots > cap) return LpStatus::iteration_limit;
      int j = pick_entering(bland);
      if (j < 0) return LpStatus::optimal;
      int dir = state_[j] == VarState::at_lower ? 1 : -1;
      double limit = hi_[j] - lo_[j];  // distance to a bound flip

      // Ratio test over the entering column.
      const std::size_t stride = ncol_;
      int leave = -1;
      double best_step = limit;
      double best_piv = 0.0;
      for (int r = 0; r < m_; ++r) {
        double a = t_[static_cast<std::size_t>(r) * stride + j];
        if (std::abs(a) < kPivTol) continue;
        double rate = dir * a;  // beta[r] moves at -rate per unit step
        double step;
        if (rate > 0.0) {
          step = (beta_[r] - lo_[basis_[r]]) / rate;
        } else {
          if (!std::isfinite(hi_[basis_[r]])) continue;
          step = (beta_[r] - hi_[basis_[r]]) / rate;
        }
        if (step < 0.0) step = 0.0;  // degenerate pivot
        bool take = false;
        if (step < best_step - 1e-9) {
          take = true;
        } else if (step < best_step + 1e-9) {
          // Near-tie: pick the numerically safer pivot, or the lowest basis
          // index once Bland's rule is active.
          if (leave < 0) take = true;
          else if (bland) take = basis_[r] < basis_[leave];
          else take = std::abs(a) > std::abs(best_piv) + 1e-12;
        }
        if (take) {
          best_step = std::min(best_step, step);
          leave = r;
          best_piv = a;
        }
      }

      if (leave < 0) {
        if (!std::isfinite(limit)) return LpStatus::unbounded;
        // Bound flip: the entering variable crosses to its other bound.
        apply_step(j, dir, limit);
        state_[j] = dir > 0 ? VarState::at_upper : VarState::at_lower;
        val_[j] = dir > 0 ? hi_[j] : lo_[j];
        ++*pivots;
        continue;
      }

      double step = std::max(best_step, 0.0);
      degen = step < kDegenStep ? degen + 1 : 0;
      if (degen > 2 * (m_ + ncol_) + 100) bland = true;

      apply_step(j, dir, step);
      double enter_val = val_[j] + dir * step;

      // The leaving variable lands on the bound it ran into.
      int lcol = basis_[leave];
      double a = t_[static_cast<std::size_t>(leave) * stride + j];
      if (dir * a > 0.0) {
        state_[lcol] = VarState::at_lower;
        val_[lcol] = lo_[lcol];
        beta_[leave] = lo_[lcol];
      } else {
        state_[lcol] = VarState::at_upper;
        val_[lcol] = hi_[lcol];
        beta_[leave] = hi_[lcol];
      }
      pivot(leave, j, enter_val);
      ++*pivots;
    }
  }

  void compute_zrow(const std::vector<double>& cost) {
    zrow_ = cost;
    for (int r = 0; r < m_; ++r) {
      double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = t_.data() + static_cast<std::size_t>(r) * ncol_;
      for (int c = 0; c < ncol_; ++c) zrow_[c] -= cb * row[c];
    }
  }

  int pick_entering(bool bland) const {
    int best = -1;
    double score = opts_.tol;
    for (int c = 0; c < ncol_; ++c) {
      if (state_[c] == VarState::basic) continue;
      if (hi_[c] - lo_[c] < kPivTol) continue;  // fixed, never enters
      double z = zrow_[c];
      double gain =
          state_[c] == VarState::at_lower ? -z : z;  // improvement per unit
      if (gain <= opts_.tol) continue;
      if (bland) return c;
      if (gain > score) {
        score = gain;
        best = c;
      }
    }
    return best;
  }

  // Moves the entering variable by step without changing the basis.
  void apply_step(int j, int dir, double step) {
    if (step == 0.0) return;
    for (int r = 0; r < m_; ++r) {
      double a = t_[static_cast<std::size_t>(r) * ncol_ + j];
      if (a != 0.0) beta_[r] -= dir * a * step;
    }
  }

  void pivot(int prow, int pcol, double enter_val) {
    double* row = t_.data() + static_cast<std::size_t>(prow) * ncol_;
    double piv = row[pcol];
    double inv = 1.0 / piv;
    for (int c = 0; c < ncol_; ++c) row[c] *= inv;
    row[pcol] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == prow) continue;
      double* other = t_.data() + static_cast<std::size_t>(r) * ncol_;
      double f = other[pcol];
      if (f == 0.0) continue;
      for (int c = 0; c < ncol_; ++c) other[c] -= f * row[c];
      other[pcol] = 0.0;
    }
    double zf = zrow_[pcol];
    if (zf != 0.0) {
      for (int c = 0; c < ncol_; ++c) zrow_[c] -= zf * row[c];
      zrow_[pcol] = 0.0;
    }
    basis_[prow] = pcol;
    state_[pcol] = VarState::basic;
    beta_[prow] = enter_val;
  }

  const LinearProgram& lp_;
  SimplexOptions opts_;
  int m_ = 0;
  int ncol_ = 0;
  int nart_ = 0;
  std::vector<double> t_;      // m x ncol dense tableau
  std::vector<double> beta_;   // value of the basic variable per row
  std::vector<double> zrow_;   // reduced costs
  std::vector<double> val_;    // value of every nonbasic variable
  std::vector<double> lo_, hi_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  Tableau t(lp, opts);
  return t.run();
}

}  // namespace asymcc
