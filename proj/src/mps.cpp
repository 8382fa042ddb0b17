#include "molmip/mps.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "molmip/error.hpp"

namespace molmip {

namespace {

constexpr const char* kObjRow = "obj";

char sense_code(Sense s) {
  switch (s) {
    case Sense::LessEqual: return 'L';
    case Sense::GreaterEqual: return 'G';
    case Sense::Equal: return 'E';
  }
  return 'E';
}

struct ColumnEntry {
  int row;  // -1 = objective
  double coef;
};

std::vector<std::vector<ColumnEntry>> column_entries(const MipModel& model) {
  std::vector<std::vector<ColumnEntry>> cols(static_cast<std::size_t>(model.num_variables()));
  for (const Term& t : model.objective().terms) cols[static_cast<std::size_t>(t.var)].push_back({-1, t.coef});
  for (int r = 0; r < model.num_constraints(); ++r)
    for (const Term& t : model.constraints()[static_cast<std::size_t>(r)].terms)
      cols[static_cast<std::size_t>(t.var)].push_back({r, t.coef});
  return cols;
}

void check_names(const MipModel& model) {
  for (const auto& c : model.constraints())
    if (c.name == kObjRow) throw InvariantError("constraint name 'obj' is reserved for the objective row");
  auto bad = [](const std::string& s) {
    return s.empty() || s.find_first_of(" \t\n\r") != std::string::npos;
  };
  for (const auto& v : model.variables())
    if (bad(v.name)) throw InvariantError("variable name '" + v.name + "' cannot be written");
  for (const auto& c : model.constraints())
    if (bad(c.name)) throw InvariantError("constraint name '" + c.name + "' cannot be written");
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (std::nearbyint(v) == v && std::abs(v) < 1e18) return fmt::format("{}", static_cast<long long>(v));
  return fmt::format("{:.17g}", v);
}

void write_mps(const MipModel& model, std::ostream& out) {
  model.validate();
  check_names(model);
  out << "NAME " << model.name() << '\n';
  if (model.objective().sense == ObjSense::Maximize) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  " << kObjRow << '\n';
  for (const auto& c : model.constraints()) out << ' ' << sense_code(c.sense) << "  " << c.name << '\n';

  out << "COLUMNS\n";
  const auto cols = column_entries(model);
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < model.num_variables(); ++j) {
    const auto& var = model.variable(j);
    const bool integer = var.type == VarType::Binary;
    if (integer != in_int) {
      out << "    MARKER" << marker++ << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'") << '\n';
      in_int = integer;
    }
    const auto& entries = cols[static_cast<std::size_t>(j)];
    if (entries.empty()) out << "    " << var.name << ' ' << kObjRow << " 0\n";
    for (const auto& e : entries) {
      const std::string& row = e.row < 0 ? std::string(kObjRow) : model.constraints()[static_cast<std::size_t>(e.row)].name;
      out << "    " << var.name << ' ' << row << ' ' << format_number(e.coef) << '\n';
    }
  }
  if (in_int) out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  if (model.objective().constant != 0.0)
    out << "    RHS " << kObjRow << ' ' << format_number(-model.objective().constant) << '\n';
  for (const auto& c : model.constraints())
    if (c.rhs != 0.0) out << "    RHS " << c.name << ' ' << format_number(c.rhs) << '\n';

  out << "BOUNDS\n";
  for (const auto& v : model.variables()) {
    if (v.lower == v.upper) {
      out << " FX BND " << v.name << ' ' << format_number(v.lower) << '\n';
      continue;
    }
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out << " FR BND " << v.name << '\n';
      continue;
    }
    if (std::isinf(v.lower))
      out << " MI BND " << v.name << '\n';
    else if (v.lower != 0.0)
      out << " LO BND " << v.name << ' ' << format_number(v.lower) << '\n';
    if (!std::isinf(v.upper)) out << " UP BND " << v.name << ' ' << format_number(v.upper) << '\n';
  }
  out << "ENDATA\n";
}

std::string to_mps(const MipModel& model) {
  std::ostringstream out;
  write_mps(model, out);
  return out.str();
}

void emit_mps(const MipModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_mps(model, out);
  if (!out) throw Error("I/O failure writing " + path.string());
}

namespace {

void write_lp_terms(std::ostream& out, const MipModel& model, const std::vector<Term>& terms) {
  int on_line = 0;
  bool first = true;
  for (const Term& t : terms) {
    if (on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
    const double c = t.coef;
    out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + ")) << format_number(std::abs(c)) << ' '
        << model.variable(t.var).name;
    first = false;
    ++on_line;
  }
  if (first) out << "0 " << model.variable(0).name;
}

}  // namespace

void write_lp(const MipModel& model, std::ostream& out) {
  model.validate();
  check_names(model);
  out << "\\ " << model.name() << '\n';
  out << (model.objective().sense == ObjSense::Maximize ? "Maximize\n" : "Minimize\n") << " obj: ";
  if (model.num_variables() > 0) write_lp_terms(out, model, model.objective().terms);
  const double k = model.objective().constant;
  if (k != 0.0) out << (k < 0 ? " - " : " + ") << format_number(std::abs(k));
  out << "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    out << ' ' << c.name << ": ";
    write_lp_terms(out, model, c.terms);
    out << (c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::GreaterEqual ? " >= " : " = ")
        << format_number(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.lower == v.upper) {
      out << ' ' << v.name << " = " << format_number(v.lower) << '\n';
    } else if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out << ' ' << v.name << " free\n";
    } else {
      out << ' ' << (std::isinf(v.lower) ? std::string("-inf") : format_number(v.lower)) << " <= " << v.name << " <= "
          << (std::isinf(v.upper) ? std::string("+inf") : format_number(v.upper)) << '\n';
    }
  }
  bool any = false;
  for (const auto& v : model.variables())
    if (v.type == VarType::Binary) {
      if (!any) out << "Binaries\n";
      any = true;
      out << ' ' << v.name << '\n';
    }
  out << "End\n";
}

std::string to_lp(const MipModel& model) {
  std::ostringstream out;
  write_lp(model, out);
  return out.str();
}

void emit_lp(const MipModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_lp(model, out);
  if (!out) throw Error("I/O failure writing " + path.string());
}

namespace {

double parse_value(const std::string& token, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError(fmt::format("MPS line {}: bad number '{}'", line, token));
  }
}

}  // namespace

MipModel read_mps(std::istream& in) {
  enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };
  Section section = Section::None;
  std::string model_name = "molmip";
  ObjSense obj_sense = ObjSense::Minimize;
  std::string obj_row;
  double obj_constant = 0.0;

  struct RowData {
    std::string name;
    Sense sense;
    std::vector<Term> terms;
    double rhs = 0.0;
  };
  std::vector<RowData> rows;
  std::unordered_map<std::string, int> row_index;
  std::vector<Term> obj_terms;

  struct ColData {
    std::string name;
    bool integer = false;
    double lower = 0.0;
    double upper = kInf;
  };
  std::vector<ColData> cols;
  std::unordered_map<std::string, int> col_index;
  bool in_int = false;

  auto column = [&](const std::string& name, int line) -> int {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    if (section != Section::Columns) throw ParseError(fmt::format("MPS line {}: unknown column '{}'", line, name));
    cols.push_back({name, in_int, 0.0, kInf});
    col_index.emplace(name, static_cast<int>(cols.size()) - 1);
    return static_cast<int>(cols.size()) - 1;
  };
  auto add_entry = [&](int col, const std::string& row, double value, int line) {
    if (row == obj_row) {
      if (value != 0.0) obj_terms.push_back({col, value});
      return;
    }
    auto it = row_index.find(row);
    if (it == row_index.end()) throw ParseError(fmt::format("MPS line {}: unknown row '{}'", line, row));
    if (value != 0.0) rows[static_cast<std::size_t>(it->second)].terms.push_back({col, value});
  };
  auto set_rhs = [&](const std::string& row, double value, int line) {
    if (row == obj_row) {
      obj_constant = -value;
      return;
    }
    auto it = row_index.find(row);
    if (it == row_index.end()) throw ParseError(fmt::format("MPS line {}: unknown row '{}'", line, row));
    rows[static_cast<std::size_t>(it->second)].rhs = value;
  };

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '*') continue;
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const bool header = raw[0] != ' ' && raw[0] != '\t';
    if (header) {
      const std::string& h = tok[0];
      if (h == "NAME") {
        section = Section::Name;
        if (tok.size() > 1) model_name = tok[1];
      } else if (h == "OBJSENSE") {
        section = Section::ObjSense;
        if (tok.size() > 1) obj_sense = (tok[1] == "MAX" || tok[1] == "MAXIMIZE") ? ObjSense::Maximize : ObjSense::Minimize;
      } else if (h == "ROWS") {
        section = Section::Rows;
      } else if (h == "COLUMNS") {
        section = Section::Columns;
      } else if (h == "RHS") {
        section = Section::Rhs;
      } else if (h == "BOUNDS") {
        section = Section::Bounds;
      } else if (h == "ENDATA") {
        section = Section::End;
        break;
      } else {
        throw ParseError(fmt::format("MPS line {}: unsupported section '{}'", line, h));
      }
      continue;
    }
    switch (section) {
      case Section::ObjSense:
        obj_sense = (tok[0] == "MAX" || tok[0] == "MAXIMIZE") ? ObjSense::Maximize : ObjSense::Minimize;
        break;
      case Section::Rows: {
        if (tok.size() != 2) throw ParseError(fmt::format("MPS line {}: expected '<type> <name>'", line));
        const std::string& type = tok[0];
        if (type == "N") {
          if (obj_row.empty()) obj_row = tok[1];
          break;
        }
        Sense s;
        if (type == "L")
          s = Sense::LessEqual;
        else if (type == "G")
          s = Sense::GreaterEqual;
        else if (type == "E")
          s = Sense::Equal;
        else
          throw ParseError(fmt::format("MPS line {}: bad row type '{}'", line, type));
        if (row_index.count(tok[1])) throw ParseError(fmt::format("MPS line {}: duplicate row '{}'", line, tok[1]));
        row_index.emplace(tok[1], static_cast<int>(rows.size()));
        rows.push_back({tok[1], s, {}, 0.0});
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'")
            in_int = true;
          else if (tok[2] == "'INTEND'")
            in_int = false;
          else
            throw ParseError(fmt::format("MPS line {}: bad marker", line));
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) throw ParseError(fmt::format("MPS line {}: bad COLUMNS entry", line));
        const int c = column(tok[0], line);
        for (std::size_t i = 1; i + 1 < tok.size(); i += 2) add_entry(c, tok[i], parse_value(tok[i + 1], line), line);
        break;
      }
      case Section::Rhs: {
        if (tok.size() != 3 && tok.size() != 5) throw ParseError(fmt::format("MPS line {}: bad RHS entry", line));
        for (std::size_t i = 1; i + 1 < tok.size(); i += 2) set_rhs(tok[i], parse_value(tok[i + 1], line), line);
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 3) throw ParseError(fmt::format("MPS line {}: bad BOUNDS entry", line));
        const std::string& type = tok[0];
        auto it = col_index.find(tok[2]);
        if (it == col_index.end()) throw ParseError(fmt::format("MPS line {}: unknown column '{}'", line, tok[2]));
        ColData& col = cols[static_cast<std::size_t>(it->second)];
        const bool needs_value = type == "UP" || type == "LO" || type == "FX";
        if (needs_value && tok.size() != 4) throw ParseError(fmt::format("MPS line {}: bound needs a value", line));
        if (type == "UP")
          col.upper = parse_value(tok[3], line);
        else if (type == "LO")
          col.lower = parse_value(tok[3], line);
        else if (type == "FX")
          col.lower = col.upper = parse_value(tok[3], line);
        else if (type == "FR")
          col.lower = -kInf, col.upper = kInf;
        else if (type == "MI")
          col.lower = -kInf;
        else if (type == "PL")
          col.upper = kInf;
        else if (type == "BV")
          col.integer = true, col.lower = 0.0, col.upper = 1.0;
        else
          throw ParseError(fmt::format("MPS line {}: unsupported bound type '{}'", line, type));
        break;
      }
      default: throw ParseError(fmt::format("MPS line {}: data outside of a section", line));
    }
  }
  if (section != Section::End) throw ParseError("MPS: missing ENDATA");

  MipModel model(model_name);
  for (const auto& c : cols) {
    if (c.integer && (c.lower < 0.0 || c.upper > 1.0))
      throw ParseError("MPS: integer column '" + c.name + "' is not binary");
    model.add_variable(c.name, c.lower, c.upper, c.integer ? VarType::Binary : VarType::Continuous);
  }
  for (auto& r : rows) model.add_constraint(r.name, std::move(r.terms), r.sense, r.rhs);
  model.set_objective(obj_sense, std::move(obj_terms), obj_constant);
  return model;
}

MipModel parse_mps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_mps(in);
}

MipModel mps_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_mps(in);
}

}  // namespace molmip
