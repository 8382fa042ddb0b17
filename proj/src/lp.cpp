#include "molmip/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "molmip/error.hpp"

namespace molmip {

namespace {
constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr int kRefactorEvery = 100;
}  // namespace

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
    case LpStatus::Cutoff: return "cutoff";
  }
  return "unknown";
}

LpSolver::LpSolver(LpProblem problem, LpTolerances tol)
    : prob_(std::move(problem)), tol_(tol), cutoff_(kInfinity) {
  m_ = prob_.rows();
  n_ = prob_.cols();
  if (prob_.cost.size() != n_ || prob_.col_lower.size() != n_ || prob_.col_upper.size() != n_ ||
      prob_.row_lower.size() != m_ || prob_.row_upper.size() != m_)
    throw DimensionError("LP data sizes do not match the constraint matrix");
  prob_.a.makeCompressed();
  lower_.resize(n_ + m_);
  upper_.resize(n_ + m_);
  lower_ << prob_.col_lower, prob_.row_lower;
  upper_ << prob_.col_upper, prob_.row_upper;
  for (int j = 0; j < n_ + m_; ++j)
    if (lower_[j] > upper_[j]) throw InvariantError("LP variable with inverted bounds");
  cost_ = Eigen::VectorXd::Zero(n_ + m_);
  cost_.head(n_) = prob_.cost;
  shift_ = Eigen::VectorXd::Zero(n_ + m_);
  x_ = Eigen::VectorXd::Zero(n_ + m_);
  d_ = Eigen::VectorXd::Zero(n_ + m_);
  status_.assign(static_cast<std::size_t>(n_ + m_), VarStatus::AtLower);
  head_.resize(static_cast<std::size_t>(m_));
  pos_.assign(static_cast<std::size_t>(n_ + m_), -1);
  for (int i = 0; i < m_; ++i) {
    head_[static_cast<std::size_t>(i)] = n_ + i;
    pos_[static_cast<std::size_t>(n_ + i)] = i;
    status_[static_cast<std::size_t>(n_ + i)] = VarStatus::Basic;
  }
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
}

double LpSolver::nonbasic_value(int j) const {
  switch (status_[static_cast<std::size_t>(j)]) {
    case VarStatus::AtLower: return lower_[j];
    case VarStatus::AtUpper: return upper_[j];
    default: return 0.0;
  }
}

// Picks the bound of a nonbasic variable from its cost sign (finite side
// preferred).
void LpSolver::place_nonbasic(int j) {
  const double c = factored_ ? d_[j] : cost_[j];
  const bool lo = std::isfinite(lower_[j]);
  const bool up = std::isfinite(upper_[j]);
  VarStatus s;
  if (lo && up)
    s = c >= 0.0 ? VarStatus::AtLower : VarStatus::AtUpper;
  else if (lo)
    s = VarStatus::AtLower;
  else if (up)
    s = VarStatus::AtUpper;
  else
    s = VarStatus::AtZero;
  status_[static_cast<std::size_t>(j)] = s;
  x_[j] = nonbasic_value(j);
}

void LpSolver::set_col_bounds(int j, double lower, double upper) {
  if (lower > upper) throw InvariantError("LP column with inverted bounds");
  lower_[j] = lower;
  upper_[j] = upper;
  if (status_[static_cast<std::size_t>(j)] != VarStatus::Basic) place_nonbasic(j);
}

void LpSolver::set_cost(const Eigen::VectorXd& cost) {
  if (cost.size() != n_) throw DimensionError("cost vector does not match the LP");
  prob_.cost = cost;
  cost_.head(n_) = cost;
}

void LpSolver::set_basis(const LpBasis& basis) {
  if (basis.status.size() != status_.size() || basis.head.size() != head_.size())
    throw DimensionError("basis does not match the LP");
  status_ = basis.status;
  head_ = basis.head;
  std::fill(pos_.begin(), pos_.end(), -1);
  for (int p = 0; p < m_; ++p) pos_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])] = p;
  for (int j = 0; j < n_ + m_; ++j) {
    auto& s = status_[static_cast<std::size_t>(j)];
    if (s == VarStatus::Basic) continue;
    if ((s == VarStatus::AtLower && !std::isfinite(lower_[j])) || (s == VarStatus::AtUpper && !std::isfinite(upper_[j])))
      place_nonbasic(j);
    x_[j] = nonbasic_value(j);
  }
  factored_ = false;
}

void LpSolver::reset_basis() {
  std::fill(pos_.begin(), pos_.end(), -1);
  for (int i = 0; i < m_; ++i) {
    head_[static_cast<std::size_t>(i)] = n_ + i;
    pos_[static_cast<std::size_t>(n_ + i)] = i;
    status_[static_cast<std::size_t>(n_ + i)] = VarStatus::Basic;
  }
  factored_ = false;
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
}

void LpSolver::ftran_vec(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v).eval();
  for (const Eta& e : etas_) {
    const double t = v[e.p] / e.pivot;
    if (t != 0.0)
      for (std::size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * t;
    v[e.p] = t;
  }
}

void LpSolver::btran_vec(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->p];
    for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
    v[it->p] = s / it->pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

void LpSolver::ftran(int j, Eigen::VectorXd& out) const {
  out.setZero(m_);
  if (j >= n_)
    out[j - n_] = -1.0;
  else
    for (Eigen::SparseMatrix<double>::InnerIterator it(prob_.a, j); it; ++it) out[it.row()] = it.value();
  ftran_vec(out);
}

void LpSolver::row_alpha(const Eigen::VectorXd& rho, Eigen::VectorXd& alpha) const {
  alpha.resize(n_ + m_);
  alpha.head(n_) = prob_.a.transpose() * rho;
  alpha.tail(m_) = -rho;
}

// Swaps structurals that make the basis singular for logicals of the rows
// they leave uncovered, using a rank-revealing LU of the structural block.
void LpSolver::repair_basis() {
  std::vector<int> structural;
  std::vector<char> row_logical(static_cast<std::size_t>(m_), 0);
  for (int p = 0; p < m_; ++p) {
    const int v = head_[static_cast<std::size_t>(p)];
    if (v < n_)
      structural.push_back(v);
    else
      row_logical[static_cast<std::size_t>(v - n_)] = 1;
  }
  std::vector<int> rs;
  for (int i = 0; i < m_; ++i)
    if (!row_logical[static_cast<std::size_t>(i)]) rs.push_back(i);
  const int k = static_cast<int>(structural.size());
  if (k == 0) return;
  std::vector<int> row_slot(static_cast<std::size_t>(m_), -1);
  for (int r = 0; r < k; ++r) row_slot[static_cast<std::size_t>(rs[static_cast<std::size_t>(r)])] = r;
  Eigen::MatrixXd mblock = Eigen::MatrixXd::Zero(k, k);
  for (int c = 0; c < k; ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(prob_.a, structural[static_cast<std::size_t>(c)]); it; ++it)
      if (row_slot[static_cast<std::size_t>(it.row())] >= 0) mblock(row_slot[static_cast<std::size_t>(it.row())], c) = it.value();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(mblock);
  lu.setThreshold(1e-11);
  const int rank = static_cast<int>(lu.rank());
  if (rank == k) return;
  const auto& q = lu.permutationQ().indices();
  const auto& pr = lu.permutationP().indices();
  std::vector<int> drop_cols, free_rows;
  for (int i = rank; i < k; ++i) drop_cols.push_back(structural[static_cast<std::size_t>(q[i])]);
  std::vector<int> inv(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) inv[static_cast<std::size_t>(pr[i])] = i;
  for (int i = 0; i < k; ++i)
    if (inv[static_cast<std::size_t>(i)] >= rank) free_rows.push_back(rs[static_cast<std::size_t>(i)]);
  for (std::size_t i = 0; i < drop_cols.size(); ++i) {
    const int v = drop_cols[i];
    const int p = pos_[static_cast<std::size_t>(v)];
    const int logical = n_ + free_rows[i];
    head_[static_cast<std::size_t>(p)] = logical;
    pos_[static_cast<std::size_t>(logical)] = p;
    pos_[static_cast<std::size_t>(v)] = -1;
    status_[static_cast<std::size_t>(logical)] = VarStatus::Basic;
    place_nonbasic(v);
  }
}

void LpSolver::refactor() {
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int p = 0; p < m_; ++p) {
      const int v = head_[static_cast<std::size_t>(p)];
      if (v >= n_)
        trip.emplace_back(v - n_, p, -1.0);
      else
        for (Eigen::SparseMatrix<double>::InnerIterator it(prob_.a, v); it; ++it) trip.emplace_back(it.row(), p, it.value());
    }
    Eigen::SparseMatrix<double> b(m_, m_);
    b.setFromTriplets(trip.begin(), trip.end());
    b.makeCompressed();
    etas_.clear();
    since_refactor_ = 0;
    if (m_ == 0) break;
    lu_.analyzePattern(b);
    lu_.factorize(b);
    if (lu_.info() == Eigen::Success) break;
    repair_basis();
  }
  if (m_ > 0 && lu_.info() != Eigen::Success) {
    reset_basis();
    refactor();
    return;
  }
  factored_ = true;
}
void LpSolver::compute_primal() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
    x_[j] = nonbasic_value(j);
    if (x_[j] == 0.0) continue;
    if (j < n_)
      for (Eigen::SparseMatrix<double>::InnerIterator it(prob_.a, j); it; ++it) rhs[it.row()] += it.value() * x_[j];
    else
      rhs[j - n_] -= x_[j];
  }
  Eigen::VectorXd xb = -rhs;
  ftran_vec(xb);
  for (int p = 0; p < m_; ++p) x_[head_[static_cast<std::size_t>(p)]] = xb[p];
}

void LpSolver::compute_duals() {
  Eigen::VectorXd cb(m_);
  for (int p = 0; p < m_; ++p) {
    const int v = head_[static_cast<std::size_t>(p)];
    cb[p] = cost_[v] + shift_[v];
  }
  Eigen::VectorXd pi = cb;
  btran_vec(pi);
  d_.head(n_) = cost_.head(n_) + shift_.head(n_) - prob_.a.transpose() * pi;
  d_.tail(m_) = cost_.tail(m_) + shift_.tail(m_) + pi;
  for (int p = 0; p < m_; ++p) d_[head_[static_cast<std::size_t>(p)]] = 0.0;
}

// Flips boxed variables onto the bound matching their reduced cost and
// shifts the cost of the rest. Returns true when any bound moved.
bool LpSolver::make_dual_feasible() {
  bool moved = false;
  for (int j = 0; j < n_ + m_; ++j) {
    auto& s = status_[static_cast<std::size_t>(j)];
    if (s == VarStatus::Basic || fixed(j)) continue;
    const double dj = d_[j];
    if (s == VarStatus::AtLower && dj < -tol_.dual) {
      if (std::isfinite(upper_[j])) {
        s = VarStatus::AtUpper;
        moved = true;
      } else {
        shift_[j] -= dj;
        d_[j] = 0.0;
      }
    } else if (s == VarStatus::AtUpper && dj > tol_.dual) {
      if (std::isfinite(lower_[j])) {
        s = VarStatus::AtLower;
        moved = true;
      } else {
        shift_[j] -= dj;
        d_[j] = 0.0;
      }
    } else if (s == VarStatus::AtZero && std::abs(dj) > tol_.dual) {
      shift_[j] -= dj;
      d_[j] = 0.0;
    }
  }
  return moved;
}

double LpSolver::infeasibility(int var) const {
  const double v = x_[var];
  const double tol = tol_.primal * (1.0 + std::min(std::abs(v), 1e6));
  if (v < lower_[var] - tol) return lower_[var] - v;
  if (v > upper_[var] + tol) return v - upper_[var];
  return 0.0;
}

void LpSolver::pivot(int p, int q, const Eigen::VectorXd& w) {
  const int leaving = head_[static_cast<std::size_t>(p)];
  Eta eta{p, w[p], {}, {}};
  for (int i = 0; i < m_; ++i)
    if (i != p && std::abs(w[i]) > 1e-13) {
      eta.index.push_back(i);
      eta.value.push_back(w[i]);
    }
  etas_.push_back(std::move(eta));
  head_[static_cast<std::size_t>(p)] = q;
  pos_[static_cast<std::size_t>(q)] = p;
  pos_[static_cast<std::size_t>(leaving)] = -1;
  status_[static_cast<std::size_t>(q)] = VarStatus::Basic;
  ++since_refactor_;
  ++iterations_;
}

LpStatus LpSolver::dual_loop(long limit) {
  Eigen::VectorXd rho, alpha, w;
  long degenerate = 0;
  const long bland_after = 10L * (m_ + n_);
  bland_ = false;
  while (true) {
    if (iterations_ >= limit || std::chrono::steady_clock::now() > deadline_) return LpStatus::IterationLimit;
    if (since_refactor_ >= kRefactorEvery) {
      refactor();
      compute_primal();
      compute_duals();
      if (make_dual_feasible()) compute_primal();
    }
    int p = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int v = head_[static_cast<std::size_t>(i)];
      const double inf = infeasibility(v);
      if (inf <= 0.0) continue;
      if (bland_) {
        if (p < 0 || v < head_[static_cast<std::size_t>(p)]) p = i;
      } else if (inf > worst) {
        worst = inf;
        p = i;
      }
    }
    if (p < 0) return LpStatus::Optimal;
    if (std::isfinite(cutoff_) && dual_bound() > cutoff_ + 1e-9 * (1.0 + std::abs(cutoff_))) return LpStatus::Cutoff;

    const int leave = head_[static_cast<std::size_t>(p)];
    const bool to_lower = x_[leave] < lower_[leave];
    const double target = to_lower ? lower_[leave] : upper_[leave];
    const double sgn = to_lower ? 1.0 : -1.0;
    rho = Eigen::VectorXd::Unit(m_, p);
    btran_vec(rho);
    row_alpha(rho, alpha);

    // Harris two-pass ratio test.
    double theta_max = kInfinity;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto s = status_[static_cast<std::size_t>(j)];
      if (s == VarStatus::Basic || fixed(j)) continue;
      const double a = sgn * alpha[j];
      double dj;
      if (s == VarStatus::AtLower && a < -tol_.pivot)
        dj = std::max(d_[j], 0.0);
      else if (s == VarStatus::AtUpper && a > tol_.pivot)
        dj = std::max(-d_[j], 0.0);
      else if (s == VarStatus::AtZero && std::abs(a) > tol_.pivot)
        dj = std::abs(d_[j]);
      else
        continue;
      theta_max = std::min(theta_max, (dj + tol_.dual) / std::abs(a));
    }
    if (!std::isfinite(theta_max)) return LpStatus::Infeasible;
    int q = -1;
    double best = 0.0, best_ratio = kInfinity;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto s = status_[static_cast<std::size_t>(j)];
      if (s == VarStatus::Basic || fixed(j)) continue;
      const double a = sgn * alpha[j];
      double dj;
      if (s == VarStatus::AtLower && a < -tol_.pivot)
        dj = std::max(d_[j], 0.0);
      else if (s == VarStatus::AtUpper && a > tol_.pivot)
        dj = std::max(-d_[j], 0.0);
      else if (s == VarStatus::AtZero && std::abs(a) > tol_.pivot)
        dj = std::abs(d_[j]);
      else
        continue;
      const double ratio = dj / std::abs(a);
      if (ratio > theta_max) continue;
      if (bland_) {
        if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && (q < 0 || j < q))) {
          best_ratio = ratio;
          q = j;
        }
      } else if (std::abs(a) > best) {
        best = std::abs(a);
        q = j;
      }
    }
    if (q < 0) return LpStatus::Infeasible;

    ftran(q, w);
    if (std::abs(w[p] - alpha[q]) > 1e-7 * (1.0 + std::abs(w[p])) && since_refactor_ > 0) {
      since_refactor_ = kRefactorEvery;
      continue;
    }
    const double theta_d = d_[q] / alpha[q];
    for (int j = 0; j < n_ + m_; ++j)
      if (status_[static_cast<std::size_t>(j)] != VarStatus::Basic) d_[j] -= theta_d * alpha[j];
    d_[q] = 0.0;
    d_[leave] = -theta_d;

    const double delta = (x_[leave] - target) / w[p];
    for (int i = 0; i < m_; ++i) x_[head_[static_cast<std::size_t>(i)]] -= w[i] * delta;
    x_[q] += delta;
    pivot(p, q, w);
    status_[static_cast<std::size_t>(leave)] = to_lower ? VarStatus::AtLower : VarStatus::AtUpper;
    x_[leave] = target;

    if (std::abs(theta_d) < 1e-12) {
      if (++degenerate > bland_after) bland_ = true;
    } else {
      degenerate = 0;
      bland_ = false;
    }
  }
}

LpStatus LpSolver::primal_loop(long limit) {
  Eigen::VectorXd rho, alpha, w;
  long degenerate = 0;
  bool bland = false;
  while (true) {
    if (iterations_ >= limit || std::chrono::steady_clock::now() > deadline_) return LpStatus::IterationLimit;
    if (since_refactor_ >= kRefactorEvery) {
      refactor();
      compute_primal();
      compute_duals();
    }
    int q = -1;
    double best = 0.0;
    double dir = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto s = status_[static_cast<std::size_t>(j)];
      if (s == VarStatus::Basic || fixed(j)) continue;
      const double dj = d_[j];
      double gain = 0.0, dj_dir = 0.0;
      if ((s == VarStatus::AtLower || s == VarStatus::AtZero) && dj < -tol_.dual) {
        gain = -dj;
        dj_dir = 1.0;
      } else if ((s == VarStatus::AtUpper || s == VarStatus::AtZero) && dj > tol_.dual) {
        gain = dj;
        dj_dir = -1.0;
      }
      if (gain > 0.0 && (bland ? q < 0 : gain > best)) {
        best = gain;
        q = j;
        dir = dj_dir;
      }
    }
    if (q < 0) return LpStatus::Optimal;
    ftran(q, w);
    double t = upper_[q] - lower_[q];
    int p = -1;
    double pivot_mag = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double wi = w[i] * dir;
      if (std::abs(wi) < tol_.pivot) continue;
      const int v = head_[static_cast<std::size_t>(i)];
      double lim;
      if (wi > 0.0) {
        if (!std::isfinite(lower_[v])) continue;
        lim = std::max(0.0, (x_[v] - lower_[v]) / wi);
      } else {
        if (!std::isfinite(upper_[v])) continue;
        lim = std::max(0.0, (upper_[v] - x_[v]) / -wi);
      }
      const bool tie = lim <= t + 1e-12;
      const bool better_tie = bland ? (p < 0 || v < head_[static_cast<std::size_t>(p)]) : std::abs(wi) > pivot_mag;
      if (lim < t - 1e-12 || (tie && better_tie)) {
        if (lim < t) t = lim;
        p = i;
        pivot_mag = std::abs(wi);
      }
    }
    if (!std::isfinite(t)) return LpStatus::Unbounded;
    if (t < 1e-12) {
      if (++degenerate > 50) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    for (int i = 0; i < m_; ++i) x_[head_[static_cast<std::size_t>(i)]] -= w[i] * dir * t;
    x_[q] += dir * t;
    if (p < 0) {
      status_[static_cast<std::size_t>(q)] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      x_[q] = nonbasic_value(q);
      ++iterations_;
      continue;
    }
    const int leave = head_[static_cast<std::size_t>(p)];
    rho = Eigen::VectorXd::Unit(m_, p);
    btran_vec(rho);
    row_alpha(rho, alpha);
    const double theta_d = d_[q] / alpha[q];
    for (int j = 0; j < n_ + m_; ++j)
      if (status_[static_cast<std::size_t>(j)] != VarStatus::Basic) d_[j] -= theta_d * alpha[j];
    d_[q] = 0.0;
    d_[leave] = -theta_d;
    const bool hit_lower = w[p] * dir > 0.0;
    pivot(p, q, w);
    status_[static_cast<std::size_t>(leave)] = hit_lower ? VarStatus::AtLower : VarStatus::AtUpper;
    x_[leave] = hit_lower ? lower_[leave] : upper_[leave];
  }
}

// Lower bound on the unshifted optimum from the current dual-feasible basis.
double LpSolver::dual_bound() const {
  double b = 0.0;
  for (int j = 0; j < n_ + m_; ++j) {
    b += (cost_[j] + shift_[j]) * x_[j];
    if (shift_[j] == 0.0) continue;
    const double reach = std::max(std::abs(lower_[j]), std::abs(upper_[j]));
    if (!std::isfinite(reach)) return -kInfinity;
    b -= std::abs(shift_[j]) * reach;
  }
  return b;
}

// Small deterministic cost shifts that push reduced costs of nonbasic
// boxed structurals away from zero.
void LpSolver::perturb() {
  for (int j = 0; j < n_; ++j) {
    const auto s = status_[static_cast<std::size_t>(j)];
    if (s == VarStatus::Basic || fixed(j) || !std::isfinite(lower_[j]) || !std::isfinite(upper_[j])) continue;
    std::uint64_t h = static_cast<std::uint64_t>(j) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
    const double u = static_cast<double>(h % 1000003) / 1000003.0;
    const double delta = 1e-7 * (1.0 + std::abs(cost_[j])) * (1.0 + u);
    shift_[j] += s == VarStatus::AtUpper ? -delta : delta;
  }
}

LpStatus LpSolver::solve(long max_iterations) {
  const long limit = iterations_ + max_iterations;
  if (!factored_) refactor();
  compute_primal();
  bool primal_feasible = true;
  for (int p = 0; p < m_ && primal_feasible; ++p) primal_feasible = infeasibility(head_[static_cast<std::size_t>(p)]) == 0.0;
  if (primal_feasible && !std::isfinite(cutoff_)) {
    shift_.setZero();
    compute_duals();
    const LpStatus s = primal_loop(limit);
    if (s != LpStatus::Optimal) return s;
    refactor();
    compute_primal();
    compute_duals();
    bool clean = true;
    for (int p = 0; p < m_; ++p) clean = clean && infeasibility(head_[static_cast<std::size_t>(p)]) == 0.0;
    if (clean) return LpStatus::Optimal;
  }
  perturb();
  compute_duals();
  if (make_dual_feasible()) compute_primal();
  for (int round = 0; round < 4; ++round) {
    LpStatus s = dual_loop(limit);
    if (s != LpStatus::Optimal) {
      shift_.setZero();
      return s;
    }
    if (shift_.isZero(0.0)) return LpStatus::Optimal;
    shift_.setZero();
    compute_duals();
    s = primal_loop(limit);
    if (s != LpStatus::Optimal) return s;
    refactor();
    compute_primal();
    compute_duals();
    bool clean = true;
    for (int p = 0; p < m_; ++p) clean = clean && infeasibility(head_[static_cast<std::size_t>(p)]) == 0.0;
    if (clean) return LpStatus::Optimal;
    if (make_dual_feasible()) compute_primal();
  }
  return LpStatus::IterationLimit;
}

double LpSolver::objective() const { return prob_.cost.dot(x_.head(n_)); }

}  // namespace molmip
