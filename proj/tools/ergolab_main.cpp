// ergolab: run averaging, tiling and Markov experiments from the command line.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "ergolab/catalog.hpp"
#include "ergolab/error.hpp"
#include "ergolab/harness.hpp"

namespace {

struct Overrides {
  ergolab::ExperimentConfig config;
  std::string tree = "complete";
  double budget = -1.0;
};

void add_common(CLI::App* sub, Overrides& o) {
  auto& c = o.config;
  sub->add_option("--system", c.system, "system id (see `catalog`)")->capture_default_str();
  sub->add_option("--observable", c.observable, "observable spec")->capture_default_str();
  sub->add_option("--points", c.points, "number of sampled points")->capture_default_str();
  sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sub->add_option("--out", c.output, "CSV output path")->capture_default_str();
  sub->add_option("--workers", c.workers, "worker threads (0 = all cores)")->capture_default_str();
  sub->add_option("--gauss-m", c.truncation.gauss_cap, "branch cap for the bare `gauss` id");
  sub->add_option("--finfty-budget", c.truncation.finfty_budget, "explicit F_infinity generators");
}

void add_tree_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("--n-max", o.config.trees.n_max, "largest complete-tree height")->capture_default_str();
  sub->add_option("--tree", o.tree, "complete | ball | random")
      ->check(CLI::IsMember({"complete", "ball", "random"}))
      ->capture_default_str();
  sub->add_option("--tree-count", o.config.trees.count, "random trees");
  sub->add_option("--tree-height", o.config.trees.max_height, "random tree height bound");
  sub->add_option("--tree-words", o.config.trees.words, "words per random tree");
  sub->add_option("--tree-seed", o.config.trees.seed, "seed of the random tree family");
}

void finish(Overrides& o) {
  using Type = ergolab::TreeSpec::Type;
  if (o.tree == "ball") o.config.trees.type = Type::kBall;
  if (o.tree == "random") o.config.trees.type = Type::kRandom;
  if (o.budget >= 0.0) o.config.walk_budget = o.budget;
}

int execute(const ergolab::ExperimentConfig& config) {
  const ergolab::RunManifest m = ergolab::run(config);
  std::cerr << "wrote " << m.rows << " rows to " << config.output << " in " << m.wall_clock_seconds << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: backward and forward ergodic averages on countable-to-one systems"};
  app.require_subcommand(1);

  auto* catalog = app.add_subcommand("catalog", "list systems, chains and observables");

  std::string config_path;
  Overrides run_over;
  auto* run = app.add_subcommand("run", "run an experiment described by a config file");
  run->add_option("config", config_path, "YAML config file")->required();
  std::string run_out;
  std::size_t run_workers = 0;
  run->add_option("--out", run_out, "override the output path");
  run->add_option("--workers", run_workers, "override the worker count");

  Overrides backward;
  backward.config.kind = ergolab::ExperimentKind::kBackward;
  auto* backward_cmd = app.add_subcommand("backward", "Cesaro averages over complete trees, or tree sweeps");
  add_common(backward_cmd, backward);
  add_tree_flags(backward_cmd, backward);
  backward_cmd->add_option("--budget", backward.budget, "per-node walk budget (0 = exact)");

  Overrides forward;
  forward.config.kind = ergolab::ExperimentKind::kForward;
  forward.config.system = "skew:rotation:r=2";
  forward.config.observable = "cos2pi";
  auto* forward_cmd = app.add_subcommand("forward", "free-group ball averages on the circle");
  add_common(forward_cmd, forward);
  add_tree_flags(forward_cmd, forward);

  Overrides boundary;
  boundary.config.kind = ergolab::ExperimentKind::kBoundary;
  boundary.config.system = "boundary:r=2:uniform";
  auto* boundary_cmd = app.add_subcommand("boundary", "forward averages on the free-group boundary");
  add_common(boundary_cmd, boundary);
  add_tree_flags(boundary_cmd, boundary);

  Overrides tiling;
  tiling.config.kind = ergolab::ExperimentKind::kTiling;
  double epsilon = 0.0;
  auto* tiling_cmd = app.add_subcommand("tiling", "greedy tiling coverage");
  add_common(tiling_cmd, tiling);
  tiling_cmd->add_option("--assignment", tiling.config.assignment, "constant:<h> | two_height | singleton")
      ->capture_default_str();
  tiling_cmd->add_option("--N", tiling.config.tiling_N, "triangle heights")->capture_default_str();
  auto* epsilon_opt = tiling_cmd->add_option("--epsilon", epsilon, "choose L and N from epsilon");

  Overrides markov;
  markov.config.kind = ergolab::ExperimentKind::kMarkov;
  auto* markov_cmd = app.add_subcommand("markov", "return-time statistics of a chain");
  markov_cmd->add_option("--chain", markov.config.chain, "chain id")->capture_default_str();
  markov_cmd->add_option("--states", markov.config.states, "states to analyse")->capture_default_str();
  markov_cmd->add_option("--samples", markov.config.samples, "excursions per state")->capture_default_str();
  markov_cmd->add_option("--horizon", markov.config.horizon, "censoring horizon")->capture_default_str();
  markov_cmd->add_option("--survival", markov.config.survival, "survival columns")->capture_default_str();
  markov_cmd->add_option("--seed", markov.config.seed, "master seed")->capture_default_str();
  markov_cmd->add_option("--out", markov.config.output, "CSV output path")->capture_default_str();
  markov_cmd->add_option("--workers", markov.config.workers, "worker threads")->capture_default_str();
  markov_cmd->add_option("--finfty-budget", markov.config.truncation.finfty_budget,
                         "explicit F_infinity generators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (catalog->parsed()) {
      std::cout << "systems:\n";
      for (const auto& e : ergolab::catalog_systems()) std::cout << "  " << e.id << "  " << e.description << "\n";
      std::cout << "chains:\n";
      for (const auto& e : ergolab::catalog_chains()) std::cout << "  " << e.id << "  " << e.description << "\n";
      std::cout << "observables:\n";
      for (const auto& e : ergolab::catalog_observables()) {
        std::cout << "  " << e.id << "  " << e.description << "\n";
      }
      return 0;
    }
    if (run->parsed()) {
      ergolab::ExperimentConfig config = ergolab::load_config(config_path);
      if (!run_out.empty()) config.output = run_out;
      if (run->count("--workers")) config.workers = run_workers;
      return execute(config);
    }
    for (Overrides* o : {&backward, &forward, &boundary, &tiling, &markov}) {
      finish(*o);
    }
    if (*epsilon_opt) tiling.config.epsilon = epsilon;
    if (backward_cmd->parsed()) return execute(backward.config);
    if (forward_cmd->parsed()) return execute(forward.config);
    if (boundary_cmd->parsed()) return execute(boundary.config);
    if (tiling_cmd->parsed()) return execute(tiling.config);
    if (markov_cmd->parsed()) return execute(markov.config);
  } catch (const ergolab::Error& e) {
    std::cerr << "error (" << ergolab::to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ergolab::ErrorKind::kConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
