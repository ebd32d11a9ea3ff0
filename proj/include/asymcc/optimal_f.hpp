#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "asymcc/triple_check.hpp"

namespace asymcc {

/// Margin gate for re-certifying a table produced by the factor search.
constexpr double kRecertTol = 1e-6;

struct FeasibilityStats {
  int rounds = 0;        // sweep/solve iterations of the last query
  int rows_final = 0;    // constraint rows held when the query finished
  long pivots = 0;       // simplex pivots across all solves
  bool stuck = false;    // round cap hit; reported as infeasible
};

/// Answer to "does some grid rounding function certify factor a".
/// When feasible, table holds (x, f(x)) for the whole grid.
struct FeasibilityResult {
  bool feasible = false;
  std::vector<std::pair<double, double>> table;
  FeasibilityStats stats;
};

/// Decides feasibility by cutting planes: decision variables are the f values
/// on the grid points inside (0, tau), with f(0) = 0 and f = 1 from tau on.
/// Violated slack constraints are found by sweeping all realizable grid
/// triples under worst-case weights and added until the sweep comes back
/// clean or the row system proves the factor unreachable.
FeasibilityResult feasibility_lp(double alpha, double a, double h);

struct OptFResult {
  double alpha = 0.0;
  double a_opt = 0.0;
  double a_thm = 0.0;
  double h = 0.0;
  std::vector<std::pair<double, double>> table;
  double margin = 0.0;     // certify_grid minimum at rho = a_opt
  bool certified = false;  // margin >= -kRecertTol
  CertReport cert;
  int queries = 0;         // feasibility queries spent by the search
};

/// Binary search for the smallest certifiable factor in [3, the closed-form
/// factor], to within tol. The returned factor is the last feasible query, so
/// its table is a genuine witness, and the table is re-certified by a full
/// grid sweep at that factor. Throws std::runtime_error when the closed-form
/// factor itself is rejected on this grid, since then no bracket exists.
OptFResult compute_a_opt(double alpha, double h, double tol, int threads = 1);

/// Two-column CSV, header "x,f", full precision.
void write_f_table(std::ostream& out,
                   const std::vector<std::pair<double, double>>& table);
std::vector<std::pair<double, double>> read_f_table(std::istream& in);
void write_f_table_file(const std::string& path,
                        const std::vector<std::pair<double, double>>& table);
std::vector<std::pair<double, double>> read_f_table_file(
    const std::string& path);

}  // namespace asymcc
