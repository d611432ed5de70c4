#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "feec/parallel.hpp"

using feec::cli::CommandResult;
using feec::cli::ConfigError;
using feec::cli::ExperimentConfig;
using nlohmann::json;

namespace {

struct Flags {
  std::string config, output, csv, mesh_output;
  std::string mesh, patch, rhs;
  int dim = 2, divisions = 8, k = 0, max_halvings = 8, levels = 4, quadrature_degree = 6, ball_radial = 16,
      ball_angular = 16;
  double grading = 0.0, epsilon = 0.3, delta = 0.1, tolerance = 1e-8;
  std::uint64_t seed = 7;
  std::vector<std::string> checks;
  std::vector<double> density_epsilons;
};

/// Registers the experiment flags on a subcommand; `given` reports later
/// which of them were set on the command line.
void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--output", f.output, "write the JSON report here instead of stdout");
  sub->add_option("--mesh", f.mesh, "mesh JSON file (default: generated box)");
  sub->add_option("--dim", f.dim, "box dimension, 1 or 2");
  sub->add_option("--divisions", f.divisions, "box cells per axis");
  sub->add_option("--grading", f.grading, "x -> x + a sin(pi x) grading amplitude");
  sub->add_option("--patch", f.patch, "Gamma_T: none, all, or faces like left,right[0:1]");
  sub->add_option("--k", f.k, "form degree");
  sub->add_option("--epsilon", f.epsilon, "initial smoothing scale");
  sub->add_option("--delta", f.delta, "inner mollification factor");
  sub->add_option("--max-halvings", f.max_halvings, "epsilon halvings before giving up");
  sub->add_option("--levels", f.levels, "refinement levels");
  sub->add_option("--rhs", f.rhs, "sine, harmonic, dx or random");
  sub->add_option("--quadrature-degree", f.quadrature_degree, "simplex quadrature degree");
  sub->add_option("--ball-radial", f.ball_radial, "radial Gauss points of the ball rule");
  sub->add_option("--ball-angular", f.ball_angular, "angular points of the ball rule");
  sub->add_option("--tolerance", f.tolerance, "relative tolerance of pass/fail checks");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--checks", f.checks, "distortion, mollify, extension, projection, density")->delimiter(',');
  sub->add_option("--density-epsilons", f.density_epsilons, "decreasing epsilons of the density table")->delimiter(',');
}

bool given(const CLI::App* sub, const std::string& name) { return sub->count(name) > 0; }

ExperimentConfig make_config(const CLI::App* sub, const Flags& f) {
  ExperimentConfig c;
  if (given(sub, "--config")) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot open config file " + f.config);
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw ConfigError("config file " + f.config + " is not valid JSON: " + e.what());
    }
    c = ExperimentConfig::from_json(doc);
  }
  if (given(sub, "--mesh")) {
    c.mesh.file = f.mesh;
    c.patch.reset();
  }
  if (given(sub, "--dim")) c.mesh.dim = f.dim;
  if (given(sub, "--divisions")) c.mesh.divisions = f.divisions;
  if (given(sub, "--grading")) c.mesh.grading = f.grading;
  if (given(sub, "--patch")) c.patch = f.patch;
  if (given(sub, "--k")) c.k = f.k;
  if (given(sub, "--epsilon")) c.epsilon = f.epsilon;
  if (given(sub, "--delta")) c.delta = f.delta;
  if (given(sub, "--max-halvings")) c.max_halvings = f.max_halvings;
  if (given(sub, "--levels")) c.levels = f.levels;
  if (given(sub, "--rhs")) c.rhs = f.rhs;
  if (given(sub, "--quadrature-degree")) c.quadrature_degree = f.quadrature_degree;
  if (given(sub, "--ball-radial")) c.ball_radial = f.ball_radial;
  if (given(sub, "--ball-angular")) c.ball_angular = f.ball_angular;
  if (given(sub, "--tolerance")) c.tolerance = f.tolerance;
  if (given(sub, "--seed")) c.seed = f.seed;
  if (given(sub, "--checks")) c.checks = f.checks;
  if (given(sub, "--density-epsilons")) c.density_epsilons = f.density_epsilons;
  c.validate();
  return c;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void check_thread_env() {
  const char* env = std::getenv("FEEC_THREADS");
  if (!env) return;
  try {
    std::size_t pos = 0;
    const int n = std::stoi(env, &pos);
    if (n >= 1 && pos == std::string(env).size()) return;
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string("FEEC_THREADS must be a positive integer, got '") + env + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whitney forms, Hodge-Laplace solver and smoothed projection with partial boundary conditions"};
  app.require_subcommand(1);
  Flags f;
  auto* betti = app.add_subcommand("betti", "relative Betti numbers and the duality check");
  auto* harmonic = app.add_subcommand("harmonic", "discrete harmonic forms of degree k");
  auto* solve = app.add_subcommand("solve", "mixed Hodge-Laplace solve");
  auto* converge = app.add_subcommand("converge", "convergence table of the manufactured solution");
  auto* project = app.add_subcommand("project-verify", "build the smoothed projection and run the check batteries");
  auto* mesh = app.add_subcommand("mesh", "mesh generation and inspection");
  mesh->require_subcommand(1);
  auto* generate = mesh->add_subcommand("generate", "write a box mesh");
  auto* inspect = mesh->add_subcommand("inspect", "counts, quality and topology of a mesh");
  for (auto* s : {betti, harmonic, solve, converge, project, generate, inspect}) add_flags(s, f);
  converge->add_option("--csv", f.csv, "write the convergence table here as CSV");
  generate->add_option("--mesh-output", f.mesh_output, "mesh JSON file to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = nullptr;
  std::string name;
  for (auto* s : {betti, harmonic, solve, converge, project}) {
    if (s->parsed()) {
      sub = s;
      name = s->get_name();
    }
  }
  if (generate->parsed()) {
    sub = generate;
    name = "mesh generate";
  }
  if (inspect->parsed()) {
    sub = inspect;
    name = "mesh inspect";
  }

  const auto start = std::chrono::steady_clock::now();
  const std::string stamp = utc_now();
  CommandResult result;
  ExperimentConfig config;
  try {
    check_thread_env();
    config = make_config(sub, f);
  } catch (const ConfigError& e) {
    result.report = {{"schema", 1}, {"command", name}, {"error", {{"kind", "config"}, {"message", e.what()}}}};
    result.exit_code = 2;
    std::cerr << "error: " << e.what() << "\n";
  }
  if (result.exit_code == 0) {
    std::function<CommandResult(const ExperimentConfig&)> fn;
    if (sub == betti) fn = feec::cli::cmd_betti;
    if (sub == harmonic) fn = feec::cli::cmd_harmonic;
    if (sub == solve) fn = feec::cli::cmd_solve;
    if (sub == converge) fn = feec::cli::cmd_converge;
    if (sub == project) fn = feec::cli::cmd_project_verify;
    if (sub == inspect) fn = feec::cli::cmd_mesh_inspect;
    if (sub == generate) {
      const std::string out = f.mesh_output;
      fn = [out](const ExperimentConfig& c) { return feec::cli::cmd_mesh_generate(c, out); };
    }
    result = feec::cli::run_guarded(name, config, fn);
    if (result.report.contains("error")) std::cerr << "error: " << result.report["error"]["message"].get<std::string>() << "\n";
  }

  result.report["metadata"] = {
      {"timestamp_utc", stamp},
      {"elapsed_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
      {"threads", feec::thread_count()}};
  try {
    write_text(f.output, result.report.dump(2) + "\n");
    if (!result.csv.empty() && !f.csv.empty()) write_text(f.csv, result.csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return result.exit_code;
}
