#pragma once

// Config-driven experiments: sample points, run averaging/tiling/Markov
// analyses in parallel, and emit deterministic CSV reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/catalog.hpp"

namespace ergolab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchema = 1;

enum class ExperimentKind { kBackward, kForward, kBoundary, kTiling, kMarkov };

ExperimentKind parse_kind(const std::string& s);
std::string to_string(ExperimentKind kind);

struct TreeSpec {
  enum class Type { kComplete, kBall, kRandom, kExplicit };
  Type type = Type::kComplete;
  std::size_t n_max = 10;  // complete / ball height
  // random family
  std::size_t count = 10;
  std::size_t max_height = 6;
  std::size_t words = 32;
  std::uint64_t seed = 1;
  // explicit word list (symbols root-outward)
  std::vector<Word> words_list;

  std::size_t height() const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kBackward;
  std::string system = "bernoulli:2";
  std::string observable = "indicator:0";
  TreeSpec trees;
  std::size_t points = 10;
  std::uint64_t seed = 0;
  Truncation truncation;
  // Per-node branch budget for the backward level engine; 0 = exact.
  // Unset: exact for finite branching, 20000 otherwise.
  std::optional<double> walk_budget;
  std::string output = "ergolab.csv";
  std::size_t workers = 0;  // 0 = hardware concurrency

  // tiling
  std::string assignment = "constant:2";
  std::vector<std::size_t> tiling_N{8};
  std::optional<double> epsilon;

  // markov
  std::string chain = "finfty_chain";
  std::vector<Symbol> states{0};
  std::size_t samples = 100000;
  std::size_t horizon = 100000;
  std::size_t survival = 8;
};

// Throws ConfigError on malformed documents or unresolved ids.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_yaml(const ExperimentConfig& config);

struct RunManifest {
  std::string config_yaml;
  std::string version;
  std::vector<std::uint64_t> sub_seeds;  // indexed by point_id (or state order)
  std::vector<double> max_tail;          // truncation tail incurred per point
  double wall_clock_seconds = 0.0;
  std::size_t rows = 0;
};

struct RunResult {
  std::string csv;
  RunManifest manifest;
};

// Pure with respect to the filesystem.
RunResult run_experiment(const ExperimentConfig& config);
// Runs and writes the CSV to config.output and the manifest next to it.
RunManifest run(const ExperimentConfig& config);
std::string manifest_to_yaml(const RunManifest& manifest);

// %.17g
std::string format_double(double v);

}  // namespace ergolab
