#include "molmip/propagate.hpp"

#include <algorithm>
#include <cmath>

namespace molmip {

namespace {
constexpr double kFeasTol = 1e-9;
constexpr double kIntTol = 1e-6;
}  // namespace

Propagator::Propagator(const MipModel& model) : n_(model.num_variables()), m_(model.num_constraints()) {
  row_start_.reserve(static_cast<std::size_t>(m_) + 1);
  row_start_.push_back(0);
  std::vector<int> col_count(static_cast<std::size_t>(n_), 0);
  for (const Constraint& c : model.constraints()) {
    for (const Term& t : c.terms) {
      row_col_.push_back(t.var);
      row_coef_.push_back(t.coef);
      ++col_count[static_cast<std::size_t>(t.var)];
    }
    row_start_.push_back(static_cast<int>(row_col_.size()));
    row_lo_.push_back(c.sense == Sense::LessEqual ? -kInf : c.rhs);
    row_hi_.push_back(c.sense == Sense::GreaterEqual ? kInf : c.rhs);
  }
  col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[static_cast<std::size_t>(j) + 1] = col_start_[static_cast<std::size_t>(j)] + col_count[static_cast<std::size_t>(j)];
  col_row_.resize(row_col_.size());
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i)
    for (int k = row_start_[static_cast<std::size_t>(i)]; k < row_start_[static_cast<std::size_t>(i) + 1]; ++k)
      col_row_[static_cast<std::size_t>(fill[static_cast<std::size_t>(row_col_[static_cast<std::size_t>(k)])]++)] = i;
  for (const Variable& v : model.variables()) {
    integer_.push_back(v.type == VarType::Binary);
    lower0_.push_back(v.lower);
    upper0_.push_back(v.upper);
  }
}

Domain Propagator::initial() const { return {lower0_, upper0_}; }

bool Propagator::propagate(Domain& d) const {
  std::vector<int> queue(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) queue[static_cast<std::size_t>(i)] = i;
  std::vector<char> queued(static_cast<std::size_t>(m_), 1);
  return run(d, std::move(queue), queued);
}

bool Propagator::propagate(Domain& d, const std::vector<int>& changed) const {
  std::vector<int> queue;
  std::vector<char> queued(static_cast<std::size_t>(m_), 0);
  for (int j : changed)
    for (int k = col_start_[static_cast<std::size_t>(j)]; k < col_start_[static_cast<std::size_t>(j) + 1]; ++k) {
      const int i = col_row_[static_cast<std::size_t>(k)];
      if (!queued[static_cast<std::size_t>(i)]) {
        queued[static_cast<std::size_t>(i)] = 1;
        queue.push_back(i);
      }
    }
  return run(d, std::move(queue), queued);
}

bool Propagator::run(Domain& d, std::vector<int> queue, std::vector<char>& queued) const {
  auto& lb = d.lower;
  auto& ub = d.upper;
  long budget = 50L * (m_ + 1);
  std::size_t head = 0;
  auto touch = [&](int j) {
    for (int k = col_start_[static_cast<std::size_t>(j)]; k < col_start_[static_cast<std::size_t>(j) + 1]; ++k) {
      const int r = col_row_[static_cast<std::size_t>(k)];
      if (!queued[static_cast<std::size_t>(r)]) {
        queued[static_cast<std::size_t>(r)] = 1;
        queue.push_back(r);
      }
    }
  };
  // Accepts a new bound when it cuts a meaningful part of the domain.
  auto tighten_upper = [&](int j, double v) {
    if (integer_[static_cast<std::size_t>(j)]) v = std::floor(v + kIntTol);
    else v += 1e-9 * std::max(1.0, std::abs(v));
    const double range = ub[j] - lb[j];
    if (!(v < ub[j] - 1e-6 * std::max(1.0, std::abs(ub[j])))) return true;
    if (!integer_[static_cast<std::size_t>(j)] && std::isfinite(range) && ub[j] - v < 1e-3 * range) return true;
    if (v < lb[j]) {
      if (v < lb[j] - 1e-6 * std::max(1.0, std::abs(lb[j]))) return false;
      v = lb[j];
    }
    ub[j] = v;
    touch(j);
    return true;
  };
  auto tighten_lower = [&](int j, double v) {
    if (integer_[static_cast<std::size_t>(j)]) v = std::ceil(v - kIntTol);
    else v -= 1e-9 * std::max(1.0, std::abs(v));
    const double range = ub[j] - lb[j];
    if (!(v > lb[j] + 1e-6 * std::max(1.0, std::abs(lb[j])))) return true;
    if (!integer_[static_cast<std::size_t>(j)] && std::isfinite(range) && v - lb[j] < 1e-3 * range) return true;
    if (v > ub[j]) {
      if (v > ub[j] + 1e-6 * std::max(1.0, std::abs(ub[j]))) return false;
      v = ub[j];
    }
    lb[j] = v;
    touch(j);
    return true;
  };

  while (head < queue.size()) {
    if (--budget < 0) return true;
    const int i = queue[head++];
    queued[static_cast<std::size_t>(i)] = 0;
    if (head > 4096 && head * 2 > queue.size()) {
      queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(head));
      head = 0;
    }
    const int b = row_start_[static_cast<std::size_t>(i)], e = row_start_[static_cast<std::size_t>(i) + 1];
    double min_fin = 0.0, max_fin = 0.0;
    int min_inf = 0, max_inf = 0;
    for (int k = b; k < e; ++k) {
      const int j = row_col_[static_cast<std::size_t>(k)];
      const double a = row_coef_[static_cast<std::size_t>(k)];
      const double lo = a > 0 ? lb[j] : ub[j];
      const double hi = a > 0 ? ub[j] : lb[j];
      if (std::isfinite(lo)) min_fin += a * lo; else ++min_inf;
      if (std::isfinite(hi)) max_fin += a * hi; else ++max_inf;
    }
    const double rlo = row_lo_[static_cast<std::size_t>(i)], rhi = row_hi_[static_cast<std::size_t>(i)];
    const double scale = 1.0 + std::abs(min_fin) + std::abs(max_fin);
    if (min_inf == 0 && min_fin > rhi + kFeasTol * scale + 1e-7) return false;
    if (max_inf == 0 && max_fin < rlo - kFeasTol * scale - 1e-7) return false;
    for (int k = b; k < e; ++k) {
      const int j = row_col_[static_cast<std::size_t>(k)];
      const double a = row_coef_[static_cast<std::size_t>(k)];
      const double lo = a > 0 ? lb[j] : ub[j];
      const double hi = a > 0 ? ub[j] : lb[j];
      if (std::isfinite(rhi)) {
        double rest;
        bool ok = true;
        if (min_inf == 0) rest = min_fin - a * lo;
        else if (min_inf == 1 && !std::isfinite(lo)) rest = min_fin;
        else ok = false;
        if (ok) {
          const double bound = (rhi - rest) / a;
          if (a > 0 ? !tighten_upper(j, bound) : !tighten_lower(j, bound)) return false;
        }
      }
      if (std::isfinite(rlo)) {
        double rest;
        bool ok = true;
        if (max_inf == 0) rest = max_fin - a * hi;
        else if (max_inf == 1 && !std::isfinite(hi)) rest = max_fin;
        else ok = false;
        if (ok) {
          const double bound = (rlo - rest) / a;
          if (a > 0 ? !tighten_lower(j, bound) : !tighten_upper(j, bound)) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace molmip
