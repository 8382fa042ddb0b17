#pragma once

#include <limits>

#include "molmip/mip_model.hpp"

namespace molmip {

struct StrengthenStats {
  int rounds = 0;
  int bounds_tightened = 0;
  int coefficients_tightened = 0;
  long lp_iterations = 0;
};

/// Root strengthening that keeps every integer-feasible point:
/// LP-based bounds for continuous variables sharing a row with a binary,
/// then coefficient tightening of binaries in inequality rows. Repeats up
/// to `rounds` times or until nothing changes. Stops early (keeping what
/// was tightened so far) once `time_budget` seconds have passed.
MipModel strengthen(const MipModel& model, int rounds = 3, StrengthenStats* stats = nullptr,
                    double time_budget = std::numeric_limits<double>::infinity());

/// Coefficient tightening alone (variable bounds as given).
int tighten_coefficients(MipModel& model);

}  // namespace molmip
