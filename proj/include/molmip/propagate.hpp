#pragma once

// Activity-based bound tightening over the rows of a MipModel.

#include <vector>

#include "molmip/mip_model.hpp"

namespace molmip {

struct Domain {
  std::vector<double> lower;
  std::vector<double> upper;
};

class Propagator {
 public:
  explicit Propagator(const MipModel& model);

  /// Variable bounds as declared in the model.
  Domain initial() const;

  /// Tightens `d` in place until no row implies a tighter bound (or the
  /// work budget runs out). Binary bounds are rounded. Returns false when a
  /// row cannot be satisfied or a domain empties.
  bool propagate(Domain& d) const;
  /// Same, starting only from the rows that touch `changed`.
  bool propagate(Domain& d, const std::vector<int>& changed) const;

 private:
  bool run(Domain& d, std::vector<int> queue, std::vector<char>& queued) const;

  int n_ = 0, m_ = 0;
  std::vector<int> row_start_, row_col_;
  std::vector<double> row_coef_, row_lo_, row_hi_;
  std::vector<int> col_start_, col_row_;
  std::vector<char> integer_;
  std::vector<double> lower0_, upper0_;
};

}  // namespace molmip
