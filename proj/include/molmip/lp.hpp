#pragma once

// Bounded dual simplex on  min c'x  s.t.  row_lower <= A x <= row_upper,
// col_lower <= x <= col_upper, in the computational form A x - r = 0 where
// the logical r carries the row bounds. The basis is held as a sparse LU
// with product-form eta updates between refactorisations.

#include <chrono>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace molmip {

struct LpProblem {
  Eigen::SparseMatrix<double> a;  // rows x cols, column-major
  Eigen::VectorXd cost;
  Eigen::VectorXd col_lower, col_upper;
  Eigen::VectorXd row_lower, row_upper;

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, Cutoff };
const char* to_string(LpStatus s);

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, AtZero };

struct LpBasis {
  std::vector<VarStatus> status;  // cols + rows entries
  std::vector<int> head;          // variable at each basis position
};

struct LpTolerances {
  double primal = 1e-7;
  double dual = 1e-9;
  double pivot = 1e-9;
};

/// now + seconds; infinite or huge budgets give time_point::max().
inline std::chrono::steady_clock::time_point deadline_after(double seconds) {
  using namespace std::chrono;
  if (!(seconds < 1e9)) return steady_clock::time_point::max();
  return steady_clock::now() + duration_cast<steady_clock::duration>(duration<double>(seconds));
}

class LpSolver {
 public:
  explicit LpSolver(LpProblem problem, LpTolerances tol = {});

  int rows() const { return m_; }
  int cols() const { return n_; }

  void set_col_bounds(int j, double lower, double upper);
  double col_lower(int j) const { return lower_[j]; }
  double col_upper(int j) const { return upper_[j]; }

  void set_cost(const Eigen::VectorXd& cost);

  /// Stops with Cutoff once the dual bound exceeds `cutoff` (minimisation).
  void set_cutoff(double cutoff) { cutoff_ = cutoff; }

  /// Past the deadline solve() stops with IterationLimit.
  void set_deadline(std::chrono::steady_clock::time_point t) { deadline_ = t; }
  LpStatus solve(long max_iterations = 1000000);

  double objective() const;
  /// Structural values.
  Eigen::VectorXd primal() const { return x_.head(n_); }
  Eigen::VectorXd row_activity() const { return x_.tail(m_); }
  Eigen::VectorXd reduced_costs() const { return d_.head(n_); }

  LpBasis basis() const { return {status_, head_}; }
  void set_basis(const LpBasis& basis);
  /// Back to the all-logical basis.
  void reset_basis();

  long iterations() const { return iterations_; }

 private:
  void refactor();
  void repair_basis();
  /// v <- B^-1 v
  void ftran_vec(Eigen::VectorXd& v) const;
  /// v <- B^-T v
  void btran_vec(Eigen::VectorXd& v) const;
  void compute_primal();
  void compute_duals();
  bool make_dual_feasible();
  void perturb();
  double dual_bound() const;
  LpStatus dual_loop(long limit);
  LpStatus primal_loop(long limit);
  void ftran(int j, Eigen::VectorXd& out) const;
  void row_alpha(const Eigen::VectorXd& rho, Eigen::VectorXd& alpha) const;
  void pivot(int p, int q, const Eigen::VectorXd& w);
  double infeasibility(int var) const;
  bool fixed(int j) const { return lower_[j] == upper_[j]; }
  double nonbasic_value(int j) const;
  void place_nonbasic(int j);

  LpProblem prob_;
  LpTolerances tol_;
  int m_ = 0, n_ = 0;
  Eigen::VectorXd lower_, upper_;  // cols then rows
  Eigen::VectorXd cost_, shift_;
  Eigen::VectorXd x_, d_;
  std::vector<VarStatus> status_;
  std::vector<int> head_, pos_;
  struct Eta {
    int p;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  std::chrono::steady_clock::time_point deadline_ = std::chrono::steady_clock::time_point::max();
  bool factored_ = false;
  int since_refactor_ = 0;
  long iterations_ = 0;
  double cutoff_;
  bool bland_ = false;
};

}  // namespace molmip
