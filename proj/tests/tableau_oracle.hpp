#pragma once

// Textbook two-phase dense tableau simplex with Bland's rule. Written
// independently of the solver library for cross-checking.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle_lp {

struct Result {
  bool feasible = false;
  double objective = 0.0;
};

/// min c'x  s.t. rlo <= A x <= rup, lo <= x <= up (all column bounds finite).
inline Result solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Eigen::VectorXd& lo,
                    const Eigen::VectorXd& up, const Eigen::VectorXd& rlo, const Eigen::VectorXd& rup) {
  const int n = static_cast<int>(a.cols());
  // Rows of the form g'y <= h over y = x - lo >= 0.
  std::vector<Eigen::VectorXd> g;
  std::vector<double> h;
  for (int i = 0; i < a.rows(); ++i) {
    const double shift = a.row(i).dot(lo);
    if (std::isfinite(rup[i])) {
      g.push_back(a.row(i).transpose());
      h.push_back(rup[i] - shift);
    }
    if (std::isfinite(rlo[i])) {
      g.push_back(-a.row(i).transpose());
      h.push_back(shift - rlo[i]);
    }
  }
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    g.push_back(e);
    h.push_back(up[j] - lo[j]);
  }
  const int m = static_cast<int>(g.size());
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (h[i] < 0) art_rows.push_back(i);
  const int na = static_cast<int>(art_rows.size());
  const int cols = n + m + na;  // y, slacks, artificials
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, cols + 1);
  std::vector<int> basis(m);
  int k = 0;
  for (int i = 0; i < m; ++i) {
    double sgn = h[i] < 0 ? -1.0 : 1.0;
    t.row(i).head(n) = sgn * g[i].transpose();
    t(i, n + i) = sgn;
    t(i, cols) = sgn * h[i];
    if (h[i] < 0) {
      t(i, n + m + k) = 1.0;
      basis[i] = n + m + k;
      ++k;
    } else {
      basis[i] = n + i;
    }
  }
  auto run = [&](Eigen::VectorXd cost, int allowed) {
    // reduced costs row
    for (int it = 0; it < 100000; ++it) {
      Eigen::VectorXd cb(m);
      for (int i = 0; i < m; ++i) cb[i] = cost[basis[i]];
      int q = -1;
      for (int j = 0; j < allowed; ++j) {
        double d = cost[j] - cb.dot(t.col(j));
        if (d < -1e-10) {
          q = j;
          break;
        }
      }
      if (q < 0) return true;
      int p = -1;
      double best = 0;
      for (int i = 0; i < m; ++i)
        if (t(i, q) > 1e-9) {
          double r = t(i, cols) / t(i, q);
          if (p < 0 || r < best - 1e-12 || (r <= best + 1e-12 && basis[i] < basis[p])) {
            p = i;
            best = r;
          }
        }
      if (p < 0) return false;
      const double piv = t(p, q);
      t.row(p) /= piv;
      for (int i = 0; i < m; ++i) {
        const double f = t(i, q);
        if (i != p && f != 0.0) t.row(i) -= f * t.row(p);
      }
      basis[p] = q;
    }
    return false;
  };
  Result res;
  if (na > 0) {
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(cols);
    c1.tail(na).setOnes();
    run(c1, cols);
    double infeas = 0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n + m) infeas += t(i, cols);
    if (infeas > 1e-7) return res;
    // drive artificials out when possible
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n + m) {
        t(i, cols) = 0.0;
        for (int j = 0; j < n + m; ++j)
          if (std::abs(t(i, j)) > 1e-7) {
            const double piv = t(i, j);
            t.row(i) /= piv;
            for (int r = 0; r < m; ++r) {
              const double f = t(r, j);
              if (r != i && f != 0.0) t.row(r) -= f * t.row(i);
            }
            basis[i] = j;
            break;
          }
      }
  }
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(cols);
  c2.head(n) = c;
  if (!run(c2, n + m)) return res;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < m; ++i) y[basis[i]] = t(i, cols);
  res.feasible = true;
  res.objective = c.dot(y.head(n) + lo);
  return res;
}

}  // namespace oracle_lp
