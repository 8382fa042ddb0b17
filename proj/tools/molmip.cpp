#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "molmip/camd.hpp"
#include "molmip/gnn_io.hpp"
#include "molmip/mps.hpp"
#include "molmip/oracle.hpp"
#include "molmip/pipeline.hpp"
#include "molmip/solver.hpp"

using namespace molmip;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 0 quiet, 1 info, 2 debug
int log_level() {
  const char* env = std::getenv("MOLMIP_LOG");
  if (!env) return 0;
  const std::string v = env;
  if (v == "debug" || v == "2") return 2;
  if (v == "info" || v == "1") return 1;
  if (v.empty() || v == "quiet" || v == "error" || v == "0") return 0;
  throw UsageError(fmt::format("MOLMIP_LOG must be quiet|info|debug, got '{}'", v));
}

template <typename... Args>
void info(fmt::format_string<Args...> f, Args&&... args) {
  if (log_level() >= 1) fmt::print(stderr, "{}\n", fmt::format(f, std::forward<Args>(args)...));
}

DesignSpace resolve_space(const std::string& arg) {
  if (fs::exists(arg)) return load_space(arg);
  static const std::regex preset(R"((atom|banana|garlic):(\d+))");
  std::smatch m;
  if (std::regex_match(arg, m, preset)) return preset_space(m[1], std::stoi(m[2]));
  throw UsageError(fmt::format("--space '{}' is neither a file nor preset:N", arg));
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvariantError(fmt::format("cannot write {}", path.string()));
  out << text;
}

NodeSelection selection_from_string(const std::string& s) {
  if (s == "best_bound") return NodeSelection::BestBound;
  if (s == "depth_first") return NodeSelection::DepthFirst;
  throw UsageError(fmt::format("unknown node_selection '{}'", s));
}

std::string to_string(NodeSelection s) { return s == NodeSelection::BestBound ? "best_bound" : "depth_first"; }

struct SolveFlags {
  double gap = SolveConfig{}.rel_gap;
  double time_limit = SolveConfig{}.time_limit;
  std::string emphasis = "optimality";
  std::uint64_t seed = 0;
  int workers = 1;
  std::string config;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--gap", f.gap, "relative MIP gap");
  cmd->add_option("--time-limit", f.time_limit, "seconds");
  cmd->add_option("--emphasis", f.emphasis)->check(CLI::IsMember({"optimality", "feasibility"}));
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--workers", f.workers);
  cmd->add_option("--config", f.config, "JSON file with SolveConfig fields; overrides flags");
}

// defaults < flags < config file
SolveConfig make_config(const SolveFlags& f) {
  SolveConfig c;
  c.rel_gap = f.gap;
  c.time_limit = f.time_limit;
  c.emphasis = emphasis_from_string(f.emphasis);
  c.seed = f.seed;
  c.workers = f.workers;
  if (log_level() >= 2) c.log_every = 1000;
  if (!f.config.empty()) {
    const json doc = read_json(f.config);
    for (const auto& [key, v] : doc.items()) {
      if (key == "rel_gap") c.rel_gap = v.get<double>();
      else if (key == "time_limit") c.time_limit = v.is_null() ? kInf : v.get<double>();
      else if (key == "feasibility_tol") c.feasibility_tol = v.get<double>();
      else if (key == "integrality_tol") c.integrality_tol = v.get<double>();
      else if (key == "node_selection") c.node_selection = selection_from_string(v.get<std::string>());
      else if (key == "emphasis") c.emphasis = emphasis_from_string(v.get<std::string>());
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "workers") c.workers = v.get<int>();
      else if (key == "strengthen_rounds") c.strengthen_rounds = v.get<int>();
      else if (key == "log_every") c.log_every = v.get<long>();
      else throw UsageError(fmt::format("unknown config key '{}'", key));
    }
  }
  c.validate();
  return c;
}

json config_json(const SolveConfig& c) {
  return {{"rel_gap", c.rel_gap},
          {"time_limit", std::isfinite(c.time_limit) ? json(c.time_limit) : json(nullptr)},
          {"feasibility_tol", c.feasibility_tol},
          {"integrality_tol", c.integrality_tol},
          {"node_selection", to_string(c.node_selection)},
          {"emphasis", to_string(c.emphasis)},
          {"seed", c.seed},
          {"workers", c.workers},
          {"strengthen_rounds", c.strengthen_rounds}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Problem {
  std::string model, space, study = "none";
};

void add_problem_flags(CLI::App* cmd, Problem& p, bool model_required = true) {
  auto* m = cmd->add_option("--model", p.model, "network weight file");
  if (model_required) m->required();
  cmd->add_option("--space", p.space, "space document or preset:N")->required();
  cmd->add_option("--case", p.study)->check(CLI::IsMember({"none", "banana", "garlic"}));
}

DesignProblem load_problem(const Problem& p) {
  const GnnNetworkd net = load_network(p.model);
  const DesignSpace space = resolve_space(p.space);
  return build_design_problem(net, space, case_options(case_from_string(p.study)));
}

void write_model(const MipModel& model, const std::string& format, const fs::path& out) {
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  if (format == "lp") emit_lp(model, out);
  else emit_mps(model, out);
}

int cmd_encode(const Problem& p, const std::string& out, const std::string& format) {
  const auto prob = load_problem(p);
  write_model(prob.model, format, out);
  fmt::print("wrote {} ({} variables, {} binaries, {} rows)\n", out, prob.model.num_variables(),
             prob.model.num_binaries(), prob.model.num_constraints());
  return 0;
}

json result_json(const SolveResult& r, const SolveConfig& c, const std::vector<std::string>& violations) {
  return {{"status", to_string(r.status)},
          {"objective", finite_or_null(r.objective)},
          {"best_bound", finite_or_null(r.best_bound)},
          {"gap", finite_or_null(r.gap)},
          {"nodes_explored", r.nodes_explored},
          {"lp_iterations", r.lp_iterations},
          {"time_to_incumbent", r.time_to_incumbent},
          {"time_total", r.time_total},
          {"workers", r.workers},
          {"violations", violations},
          {"config", config_json(c)}};
}

int cmd_solve(const Problem& p, const std::string& mps, const std::string& out, const SolveFlags& flags) {
  if (p.model.empty() == mps.empty()) throw UsageError("solve needs exactly one of --model or --mps");
  const SolveConfig config = make_config(flags);
  const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);

  std::optional<DesignProblem> prob;
  MipModel model;
  if (!mps.empty()) {
    model = parse_mps(mps);
  } else {
    prob = load_problem(p);
    model = prob->model;
  }
  info("solving {} variables, {} binaries, {} rows", model.num_variables(), model.num_binaries(),
       model.num_constraints());
  const SolveResult r = solve_mip(model, config);
  const auto violations = r.has_incumbent() ? verify(model, r, config) : std::vector<std::string>{};
  json doc = result_json(r, config, violations);

  if (r.has_incumbent() && prob) {
    const MolecularGraph g = decode(r.incumbent, prob->map, prob->space);
    doc["molecule_violations"] = validate(g, prob->space, prob->options);
    write_text(dir / "molecule.json", molecule_to_json(g, prob->space).dump(2) + "\n");
    write_text(dir / "molecule.dot", molecule_to_dot(g, prob->space));
  } else if (r.has_incumbent()) {
    json values = json::object();
    for (int j = 0; j < model.num_variables(); ++j)
      values[model.variable(j).name] = r.incumbent[static_cast<std::size_t>(j)];
    doc["values"] = std::move(values);
  }
  write_text(dir / "result.json", doc.dump(2) + "\n");
  fmt::print("{} objective {} bound {} gap {} nodes {} time {:.2f}s\n", to_string(r.status),
             format_number(r.objective), format_number(r.best_bound), format_number(r.gap), r.nodes_explored,
             r.time_total);
  return 0;
}

int cmd_enumerate(const Problem& p, const std::string& out) {
  const DesignSpace space = resolve_space(p.space);
  const auto options = case_options(case_from_string(p.study));
  json molecules = json::array();
  long long count = 0;
  enumerate_feasible(space, options, [&](const MolecularGraph& g) {
    ++count;
    if (!out.empty()) molecules.push_back(molecule_to_json(g, space));
    return true;
  });
  fmt::print("{} feasible labelled molecules\n", count);
  if (!p.model.empty()) {
    const auto best = brute_optimum(load_network(p.model), space, options);
    if (best) fmt::print("best objective {}\n", format_number(best->objective));
  }
  if (!out.empty()) write_text(out, molecules.dump(1) + "\n");
  return 0;
}

int cmd_check_symmetry(int n, const std::string& out) {
  const auto r = check_symmetry_existence(n);
  fmt::print("{}", r.text());
  if (!out.empty()) write_text(out, r.to_json().dump(2) + "\n");
  return r.all_pass() ? 0 : 1;
}

int cmd_eval(const Problem& p, const std::string& molecule) {
  const GnnNetworkd net = load_network(p.model);
  const DesignSpace space = resolve_space(p.space);
  const MolecularGraph g = molecule_from_json(read_json(molecule), space);
  const Eigen::VectorXd y = forward(net, g.assignment());
  json doc{{"outputs", std::vector<double>(y.data(), y.data() + y.size())},
           {"violations", validate(g, space, case_options(case_from_string(p.study)))}};
  if (y.size() == 2) doc["objective"] = y(1) - y(0);
  fmt::print("{}\n", doc.dump());
  return 0;
}

int cmd_bounds(const Problem& p, const std::string& out) {
  const auto prob = load_problem(p);
  json layers = json::array();
  for (std::size_t l = 0; l < prob.bounds.size(); ++l) {
    const auto& b = prob.bounds[l];
    fmt::print("layer {}: {} entries\n", l, b.pre.lower.size());
    for (Eigen::Index i = 0; i < b.pre.lower.size(); ++i)
      fmt::print("  [{:>3}] pre [{}, {}]  post [{}, {}]\n", i, format_number(b.pre.lower(i)),
                 format_number(b.pre.upper(i)), format_number(b.post.lower(i)), format_number(b.post.upper(i)));
    auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    layers.push_back({{"pre_lower", vec(b.pre.lower)},
                      {"pre_upper", vec(b.pre.upper)},
                      {"post_lower", vec(b.post.lower)},
                      {"post_upper", vec(b.post.upper)}});
  }
  if (!out.empty()) write_text(out, layers.dump(1) + "\n");
  return 0;
}

int cmd_fixture(std::uint64_t seed, int nodes, int features, int hidden, int outputs, const std::string& out) {
  save_network(fixture_network(seed, nodes, features, hidden, outputs), out);
  fmt::print("wrote {}\n", out);
  return 0;
}

int cmd_space(const std::string& arg, const std::string& out) {
  const std::string doc = space_to_json(resolve_space(arg)).dump(2) + "\n";
  if (out.empty()) fmt::print("{}", doc);
  else write_text(out, doc);
  return 0;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

const char* kind(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return "usage";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
  if (dynamic_cast<const InvariantError*>(&e)) return "invariant";
  if (dynamic_cast<const UnsupportedOperation*>(&e)) return "unsupported";
  if (dynamic_cast<const InfeasibleDesign*>(&e)) return "infeasible";
  return "internal";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Molecular design by optimising over trained graph neural networks"};
  app.require_subcommand(1);

  Problem prob;
  SolveFlags flags;
  std::string out, format = "mps", mps, molecule;
  int n = 0;
  std::uint64_t seed = 0;
  int nodes = 4, features = 0, hidden = 4, outputs = 2;

  auto* encode = app.add_subcommand("encode", "write the design MIP as MPS or LP");
  add_problem_flags(encode, prob);
  encode->add_option("--out", out)->required();
  encode->add_option("--format", format)->check(CLI::IsMember({"mps", "lp"}));

  auto* solve = app.add_subcommand("solve", "solve a design problem or an MPS file");
  add_problem_flags(solve, prob, false);
  solve->get_option("--space")->required(false);
  solve->add_option("--mps", mps);
  solve->add_option("--out", out, "output directory");
  add_solve_flags(solve, flags);

  auto* enumerate = app.add_subcommand("enumerate", "list every feasible molecule (N <= 5)");
  add_problem_flags(enumerate, prob, false);
  enumerate->add_option("--out", out, "JSON array of molecules");

  auto* symmetry = app.add_subcommand("check-symmetry", "symmetry-breaking indexing for every connected graph");
  symmetry->add_option("n", n)->required()->check(CLI::Range(1, 6));
  symmetry->add_option("--out", out);

  auto* eval = app.add_subcommand("eval", "run the network on a molecule document");
  add_problem_flags(eval, prob);
  eval->add_option("--molecule", molecule)->required();

  auto* bounds = app.add_subcommand("bounds", "per-layer interval bounds");
  add_problem_flags(bounds, prob);
  bounds->add_option("--out", out);

  auto* fixture = app.add_subcommand("fixture", "random network of the case-study shape");
  fixture->add_option("--seed", seed);
  fixture->add_option("--nodes", nodes);
  fixture->add_option("--features", features)->required();
  fixture->add_option("--hidden", hidden);
  fixture->add_option("--outputs", outputs);
  fixture->add_option("--out", out)->required();

  std::string space_arg;
  auto* space = app.add_subcommand("space", "print or write a design space document");
  space->add_option("space", space_arg, "space document or preset:N")->required();
  space->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fmt::print(stderr, "error: usage: {}\n", one_line(e.what()));
    return 2;
  }

  try {
    log_level();
    if (*encode) return cmd_encode(prob, out, format);
    if (*solve) {
      if (!prob.model.empty() && prob.space.empty()) throw UsageError("solve --model needs --space");
      return cmd_solve(prob, mps, out, flags);
    }
    if (*enumerate) return cmd_enumerate(prob, out);
    if (*symmetry) return cmd_check_symmetry(n, out);
    if (*eval) return cmd_eval(prob, molecule);
    if (*bounds) return cmd_bounds(prob, out);
    if (*space) return cmd_space(space_arg, out);
    if (*fixture) return cmd_fixture(seed, nodes, features, hidden, outputs, out);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}: {}\n", kind(e), one_line(e.what()));
    return kind(e) == std::string("usage") ? 2 : 1;
  }
  return 0;
}
