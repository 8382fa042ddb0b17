#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "molmip/mip_model.hpp"

namespace molmip {

/// Free-format MPS. Sections written: NAME, OBJSENSE (maximisation only),
/// ROWS, COLUMNS with INTORG/INTEND markers, RHS, BOUNDS, ENDATA. Integral
/// values are printed as integer literals, everything else with 17
/// significant digits.
void write_mps(const MipModel& model, std::ostream& out);
std::string to_mps(const MipModel& model);
void emit_mps(const MipModel& model, const std::filesystem::path& path);

/// CPLEX-style LP text.
void write_lp(const MipModel& model, std::ostream& out);
std::string to_lp(const MipModel& model);
void emit_lp(const MipModel& model, const std::filesystem::path& path);

/// Reads the subset written by write_mps (plus BV/MI/PL/FR bounds and an
/// inline "OBJSENSE MAX"). Integer columns must end up with bounds in [0,1].
MipModel read_mps(std::istream& in);
MipModel parse_mps(const std::filesystem::path& path);
MipModel mps_from_string(const std::string& text);

/// Shortest exact decimal text for a coefficient.
std::string format_number(double v);

}  // namespace molmip
