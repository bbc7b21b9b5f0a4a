#include "ergolab/harness.hpp"

#include <yaml-cpp/yaml.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "ergolab/averaging.hpp"
#include "ergolab/error.hpp"
#include "ergolab/random.hpp"
#include "ergolab/tiling.hpp"

namespace ergolab {

ExperimentKind parse_kind(const std::string& s) {
  if (s == "backward") return ExperimentKind::kBackward;
  if (s == "forward") return ExperimentKind::kForward;
  if (s == "boundary") return ExperimentKind::kBoundary;
  if (s == "tiling") return ExperimentKind::kTiling;
  if (s == "markov" || s == "markov-analyze") return ExperimentKind::kMarkov;
  throw Error(ErrorKind::kConfigError, "unknown experiment kind '" + s + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kBackward: return "backward";
    case ExperimentKind::kForward: return "forward";
    case ExperimentKind::kBoundary: return "boundary";
    case ExperimentKind::kTiling: return "tiling";
    case ExperimentKind::kMarkov: return "markov";
  }
  return "?";
}

std::size_t TreeSpec::height() const {
  switch (type) {
    case Type::kComplete:
    case Type::kBall: return n_max;
    case Type::kRandom: return max_height;
    case Type::kExplicit: {
      std::size_t h = 0;
      for (const auto& w : words_list) h = std::max(h, w.size());
      return h;
    }
  }
  return 0;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- Config -------------------------------------------------------------------

namespace {

template <typename T>
T read(const YAML::Node& node, const std::string& key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorKind::kConfigError, "field '" + key + "' has the wrong type");
  }
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) throw Error(ErrorKind::kConfigError, where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw Error(ErrorKind::kConfigError, "unknown key '" + key + "' in " + where);
  }
}

TreeSpec::Type parse_tree_type(const std::string& s) {
  if (s == "complete") return TreeSpec::Type::kComplete;
  if (s == "ball") return TreeSpec::Type::kBall;
  if (s == "random") return TreeSpec::Type::kRandom;
  if (s == "explicit") return TreeSpec::Type::kExplicit;
  throw Error(ErrorKind::kConfigError, "unknown tree type '" + s + "'");
}

std::string tree_type_name(TreeSpec::Type t) {
  switch (t) {
    case TreeSpec::Type::kComplete: return "complete";
    case TreeSpec::Type::kBall: return "ball";
    case TreeSpec::Type::kRandom: return "random";
    case TreeSpec::Type::kExplicit: return "explicit";
  }
  return "?";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::kConfigError, std::string("malformed config: ") + e.what());
  }
  if (!root || root.IsNull()) throw Error(ErrorKind::kConfigError, "empty config");
  check_keys(root, {"kind", "system", "observable", "trees", "points", "seed", "truncation", "output",
                    "workers", "tiling", "markov"},
             "config");
  ExperimentConfig c;
  if (!root["kind"]) throw Error(ErrorKind::kConfigError, "missing 'kind'");
  if (!root["seed"]) throw Error(ErrorKind::kConfigError, "missing 'seed'");
  c.kind = parse_kind(read<std::string>(root, "kind", ""));
  c.system = read(root, "system", c.system);
  c.observable = read(root, "observable", c.observable);
  c.points = read(root, "points", c.points);
  c.seed = read<std::uint64_t>(root, "seed", 0);
  c.output = read(root, "output", c.output);
  c.workers = read(root, "workers", c.workers);

  if (const YAML::Node t = root["trees"]) {
    check_keys(t, {"type", "n_max", "count", "max_height", "words", "seed", "list"}, "trees");
    c.trees.type = parse_tree_type(read<std::string>(t, "type", "complete"));
    c.trees.n_max = read(t, "n_max", c.trees.n_max);
    c.trees.count = read(t, "count", c.trees.count);
    c.trees.max_height = read(t, "max_height", c.trees.max_height);
    c.trees.words = read(t, "words", c.trees.words);
    c.trees.seed = read<std::uint64_t>(t, "seed", c.trees.seed);
    if (const YAML::Node list = t["list"]) {
      for (const auto& w : list) {
        Word word;
        for (const auto& s : w) word.push_back(s.as<Symbol>());
        c.trees.words_list.push_back(std::move(word));
      }
    }
    if (c.trees.type == TreeSpec::Type::kExplicit && c.trees.words_list.empty()) {
      throw Error(ErrorKind::kConfigError, "explicit trees need a 'list' of words");
    }
  }
  if (const YAML::Node t = root["truncation"]) {
    check_keys(t, {"gauss_M", "finfty_budget", "walk_budget"}, "truncation");
    c.truncation.gauss_cap = read(t, "gauss_M", c.truncation.gauss_cap);
    c.truncation.finfty_budget = read(t, "finfty_budget", c.truncation.finfty_budget);
    if (t["walk_budget"]) c.walk_budget = read<double>(t, "walk_budget", 0.0);
  }
  if (const YAML::Node t = root["tiling"]) {
    check_keys(t, {"assignment", "N", "epsilon"}, "tiling");
    c.assignment = read(t, "assignment", c.assignment);
    if (const YAML::Node n = t["N"]) {
      c.tiling_N.clear();
      if (n.IsSequence()) {
        for (const auto& v : n) c.tiling_N.push_back(v.as<std::size_t>());
      } else {
        c.tiling_N.push_back(n.as<std::size_t>());
      }
    }
    if (t["epsilon"]) c.epsilon = read<double>(t, "epsilon", 0.0);
  }
  if (const YAML::Node t = root["markov"]) {
    check_keys(t, {"chain", "states", "samples", "horizon", "survival"}, "markov");
    c.chain = read(t, "chain", c.chain);
    if (const YAML::Node s = t["states"]) {
      c.states.clear();
      for (const auto& v : s) c.states.push_back(v.as<Symbol>());
    }
    c.samples = read(t, "samples", c.samples);
    c.horizon = read(t, "horizon", c.horizon);
    c.survival = read(t, "survival", c.survival);
  }
  if (c.epsilon && !(*c.epsilon > 0.0 && *c.epsilon < 1.0)) {
    throw Error(ErrorKind::kConfigError, "epsilon must lie in (0, 1)");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfigError, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(c.kind);
  out << YAML::Key << "system" << YAML::Value << c.system;
  out << YAML::Key << "observable" << YAML::Value << c.observable;
  out << YAML::Key << "points" << YAML::Value << c.points;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "output" << YAML::Value << c.output;
  out << YAML::Key << "workers" << YAML::Value << c.workers;
  out << YAML::Key << "trees" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "type" << YAML::Value << tree_type_name(c.trees.type);
  out << YAML::Key << "n_max" << YAML::Value << c.trees.n_max;
  out << YAML::Key << "count" << YAML::Value << c.trees.count;
  out << YAML::Key << "max_height" << YAML::Value << c.trees.max_height;
  out << YAML::Key << "words" << YAML::Value << c.trees.words;
  out << YAML::Key << "seed" << YAML::Value << c.trees.seed;
  if (!c.trees.words_list.empty()) {
    out << YAML::Key << "list" << YAML::Value << YAML::BeginSeq;
    for (const auto& w : c.trees.words_list) out << YAML::Flow << w;
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::Key << "truncation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gauss_M" << YAML::Value << c.truncation.gauss_cap;
  out << YAML::Key << "finfty_budget" << YAML::Value << c.truncation.finfty_budget;
  if (c.walk_budget) out << YAML::Key << "walk_budget" << YAML::Value << *c.walk_budget;
  out << YAML::EndMap;
  out << YAML::Key << "tiling" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "assignment" << YAML::Value << c.assignment;
  out << YAML::Key << "N" << YAML::Value << YAML::Flow << c.tiling_N;
  if (c.epsilon) out << YAML::Key << "epsilon" << YAML::Value << *c.epsilon;
  out << YAML::EndMap;
  out << YAML::Key << "markov" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "chain" << YAML::Value << c.chain;
  out << YAML::Key << "states" << YAML::Value << YAML::Flow << c.states;
  out << YAML::Key << "samples" << YAML::Value << c.samples;
  out << YAML::Key << "horizon" << YAML::Value << c.horizon;
  out << YAML::Key << "survival" << YAML::Value << c.survival;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return out.c_str();
}

std::string manifest_to_yaml(const RunManifest& m) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << m.version;
  out << YAML::Key << "csv_schema" << YAML::Value << kCsvSchema;
  out << YAML::Key << "wall_clock_seconds" << YAML::Value << m.wall_clock_seconds;
  out << YAML::Key << "rows" << YAML::Value << m.rows;
  out << YAML::Key << "sub_seeds" << YAML::Value << YAML::Flow << m.sub_seeds;
  out << YAML::Key << "max_tail" << YAML::Value << YAML::Flow << m.max_tail;
  out << YAML::Key << "config" << YAML::Value << YAML::Load(m.config_yaml);
  out << YAML::EndMap;
  return out.c_str();
}

// --- Execution ------------------------------------------------------------------

namespace {

struct TaskOutput {
  std::string lines;
  double max_tail = 0.0;
};

// Runs fn(i) for i < count on a pool; results stay indexed by i.
template <typename Fn>
std::vector<TaskOutput> parallel_map(std::size_t count, std::size_t workers, Fn fn) {
  std::vector<TaskOutput> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, count));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.kind(), "task " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string report_lines(std::size_t point_id, const AveragingReport& r) {
  std::string s;
  for (const auto& row : r.rows) {
    s += std::to_string(point_id) + "," + row.key + "," + format_double(row.total_weight) + "," +
         format_double(row.average) + "," + optional_cell(row.target) + "," + optional_cell(row.abs_error) +
         "\n";
  }
  return s;
}

void add_row(AveragingReport& r, std::string key, std::size_t n, double weight, double sum,
             const std::optional<double>& target, double tail = 0.0) {
  ReportRow row;
  row.key = std::move(key);
  row.n = n;
  row.total_weight = weight;
  row.average = sum / weight;
  row.tail = tail;
  if (target) {
    row.target = *target;
    row.abs_error = std::abs(row.average - *target);
  }
  r.rows.push_back(std::move(row));
}

std::vector<NamedTree> build_trees(const TreeSpec& spec, const Alphabet& alphabet, bool reduced) {
  std::vector<NamedTree> trees;
  switch (spec.type) {
    case TreeSpec::Type::kComplete:
      trees.push_back({"complete:" + std::to_string(spec.n_max), complete_tree(alphabet, spec.n_max)});
      break;
    case TreeSpec::Type::kBall:
      trees.push_back({"ball:" + std::to_string(spec.n_max),
                       complete_tree(alphabet, spec.n_max, alphabet.has_involution())});
      break;
    case TreeSpec::Type::kRandom:
      for (std::size_t j = 0; j < spec.count; ++j) {
        trees.push_back({"random:" + std::to_string(j),
                         random_tree(alphabet, spec.max_height, spec.words, derive_seed(spec.seed, j),
                                     reduced && alphabet.has_involution())});
      }
      break;
    case TreeSpec::Type::kExplicit: {
      std::set<Word> closed;
      for (const auto& w : spec.words_list) {
        for (std::size_t k = 0; k <= w.size(); ++k) closed.insert(Word(w.begin() + k, w.end()));
      }
      std::vector<Word> words(closed.begin(), closed.end());
      trees.push_back({"explicit", RightRootedTree::from_words(alphabet, words)});
      break;
    }
  }
  return trees;
}

std::string csv_preamble(const ExperimentConfig& c, const std::string& subject) {
  return "# ergolab v" + std::to_string(kCsvSchema) + " kind=" + to_string(c.kind) + " " + subject +
         " master_seed=" + std::to_string(c.seed) + " seed_rule=splitmix64(master,point_id)\n";
}

RunResult run_backward(const ExperimentConfig& c) {
  SystemPtr system = make_system(c.system, c.truncation);
  const Observable f = make_observable(c.observable, *system);
  const bool complete = c.trees.type == TreeSpec::Type::kComplete;
  std::vector<NamedTree> trees;
  if (!complete) trees = build_trees(c.trees, system->alphabet(), false);
  const double budget = c.walk_budget.value_or(system->finite_branching() ? 0.0 : 20000.0);
  const std::size_t depth = c.trees.height() + std::max<std::size_t>(f.depth(), 1);

  RunResult result;
  result.csv = csv_preamble(c, "system=" + system->id() + " observable=" + f.id());
  result.csv += complete ? "point_id,n,total_weight,average,target,abs_error\n"
                         : "point_id,tree,total_weight,average,target,abs_error\n";
  for (std::size_t i = 0; i < c.points; ++i) result.manifest.sub_seeds.push_back(derive_seed(c.seed, i));

  auto outputs = parallel_map(c.points, c.workers, [&](std::size_t i) {
    const std::uint64_t seed = result.manifest.sub_seeds[i];
    const Point x = system->sample_point(seed, depth);
    AveragingReport r = complete ? cesaro_backward(*system, f, c.trees.n_max, x, {budget, mix_seed(seed)})
                                 : tree_sweep_backward(*system, f, trees, x);
    return TaskOutput{report_lines(i, r), r.truncation_bound};
  });
  for (auto& o : outputs) {
    result.csv += o.lines;
    result.manifest.max_tail.push_back(o.max_tail);
  }
  return result;
}

RunResult run_forward(const ExperimentConfig& c) {
  SystemPtr system = make_system(c.system, c.truncation);
  const auto* skew = dynamic_cast<const SkewProductSystem*>(system.get());
  if (skew == nullptr) throw Error(ErrorKind::kConfigError, "forward experiments need a skew:* system");
  const Observable f = make_observable(c.observable, *system);
  const MarkovChain& chain = skew->boundary().chain();
  const bool ball = c.trees.type == TreeSpec::Type::kComplete || c.trees.type == TreeSpec::Type::kBall;
  std::vector<NamedTree> trees;
  if (!ball) trees = build_trees(c.trees, system->alphabet(), true);
  std::optional<double> target;
  if (const auto* b = std::get_if<Observable::BaseLift>(&f.kind())) target = b->mean;
  if (const auto* k = std::get_if<Observable::Constant>(&f.kind())) target = k->value;

  RunResult result;
  result.csv = csv_preamble(c, "system=" + system->id() + " observable=" + f.id());
  result.csv += ball ? "point_id,n,total_weight,average,target,abs_error\n"
                     : "point_id,tree,total_weight,average,target,abs_error\n";
  for (std::size_t i = 0; i < c.points; ++i) result.manifest.sub_seeds.push_back(derive_seed(c.seed, i));

  auto outputs = parallel_map(c.points, c.workers, [&](std::size_t i) {
    Rng rng(result.manifest.sub_seeds[i]);
    const double x = uniform01(rng);
    AveragingReport r;
    if (ball) {
      LevelSums s = forward_sphere_sums(skew->action(), chain, f, c.trees.n_max, x);
      double mass = 0.0;
      double sum = 0.0;
      for (std::size_t n = 0; n <= c.trees.n_max; ++n) {
        mass += s.weight[n];
        sum += s.weighted_sum[n];
        add_row(r, std::to_string(n), n, mass, sum, target);
      }
    } else {
      for (const auto& t : trees) {
        ForwardEvaluation e = forward_group_average(skew->action(), chain, f, t.tree, x);
        add_row(r, t.id, t.tree.height(), e.mass, e.weighted_sum, target);
      }
    }
    return TaskOutput{report_lines(i, r), 0.0};
  });
  for (auto& o : outputs) {
    result.csv += o.lines;
    result.manifest.max_tail.push_back(o.max_tail);
  }
  return result;
}

RunResult run_boundary(const ExperimentConfig& c) {
  SystemPtr system = make_system(c.system, c.truncation);
  const auto* boundary = dynamic_cast<const BoundarySystem*>(system.get());
  if (boundary == nullptr) throw Error(ErrorKind::kConfigError, "boundary experiments need a boundary:* system");
  const Observable f = make_observable(c.observable, *system);
  const bool complete = c.trees.type == TreeSpec::Type::kComplete;
  std::vector<NamedTree> trees;
  if (!complete) trees = build_trees(c.trees, system->alphabet(), true);
  // Cancelling words consume one more symbol than their length.
  const std::size_t depth = c.trees.height() + std::max<std::size_t>(f.depth(), 1) + (complete ? 0 : 1);

  RunResult result;
  result.csv = csv_preamble(c, "system=" + system->id() + " observable=" + f.id());
  result.csv += complete ? "point_id,n,total_weight,average,target,abs_error\n"
                         : "point_id,tree,total_weight,average,target,abs_error\n";
  for (std::size_t i = 0; i < c.points; ++i) result.manifest.sub_seeds.push_back(derive_seed(c.seed, i));

  auto outputs = parallel_map(c.points, c.workers, [&](std::size_t i) {
    const auto x = std::get<SymbolicPoint>(boundary->sample_point(result.manifest.sub_seeds[i], depth));
    const std::optional<double> target = boundary->invariant_target(f, x);
    AveragingReport r;
    if (complete) {
      const RightRootedTree ball =
          complete_tree(boundary->alphabet(), c.trees.n_max, true, boundary->alphabet().inverse(x.prefix.at(0)));
      LevelSums s = boundary_forward_levels(*boundary, f, ball, x);
      double weight = 0.0;
      double sum = 0.0;
      for (std::size_t n = 0; n <= c.trees.n_max; ++n) {
        weight += s.weight[n];
        sum += s.weighted_sum[n];
        add_row(r, std::to_string(n), n, weight, sum, target);
      }
    } else {
      for (const auto& t : trees) {
        TreeEvaluation e = boundary_forward_average(*boundary, f, t.tree, x);
        add_row(r, t.id, t.tree.height(), e.total_weight, e.weighted_sum, target);
      }
    }
    return TaskOutput{report_lines(i, r), 0.0};
  });
  for (auto& o : outputs) {
    result.csv += o.lines;
    result.manifest.max_tail.push_back(o.max_tail);
  }
  return result;
}

RunResult run_tiling(const ExperimentConfig& c) {
  SystemPtr system = make_system(c.system, c.truncation);
  const TileAssignment assignment = make_assignment(c.assignment, *system);
  const std::size_t depth = std::max<std::size_t>(assignment.locality, 1);

  RunResult result;
  std::vector<Point> points;
  for (std::size_t i = 0; i < c.points; ++i) {
    result.manifest.sub_seeds.push_back(derive_seed(c.seed, i));
    points.push_back(system->sample_point(result.manifest.sub_seeds.back(), depth));
  }
  std::vector<std::size_t> Ns = c.tiling_N;
  TilingOptions options;
  std::string subject = "system=" + system->id() + " assignment=" + assignment.id;
  if (c.epsilon) {
    const std::size_t L = select_band_height(assignment, *c.epsilon, points);
    options.band = L;
    Ns = {static_cast<std::size_t>(std::ceil(2.0 * static_cast<double>(L) / *c.epsilon - 1e-12))};
    subject += " epsilon=" + format_double(*c.epsilon) + " L=" + std::to_string(L);
  }
  result.csv = csv_preamble(c, subject);
  result.csv += "point_id,N,coverage,untiled_band,untiled_overflow\n";

  auto outputs = parallel_map(c.points, c.workers, [&](std::size_t i) {
    TaskOutput o;
    for (std::size_t N : Ns) {
      TilingResult t = greedy_tile(*system, assignment, N, points[i], options);
      o.lines += std::to_string(i) + "," + std::to_string(N) + "," + format_double(t.coverage()) + "," +
                 format_double(t.untiled_band / t.total_weight) + "," +
                 format_double(t.untiled_overflow / t.total_weight) + "\n";
    }
    return o;
  });
  for (auto& o : outputs) {
    result.csv += o.lines;
    result.manifest.max_tail.push_back(o.max_tail);
  }
  return result;
}

RunResult run_markov(const ExperimentConfig& c) {
  const MarkovChain chain = make_chain(c.chain, c.truncation);
  RunResult result;
  result.csv = csv_preamble(c, "chain=" + c.chain);
  result.csv += "state,samples,mean_return,censored_fraction";
  for (std::size_t k = 1; k <= c.survival; ++k) result.csv += ",survival_" + std::to_string(k);
  result.csv += "\n";
  for (Symbol s : c.states) result.manifest.sub_seeds.push_back(derive_seed(c.seed, s));

  auto outputs = parallel_map(c.states.size(), c.workers, [&](std::size_t i) {
    const Symbol state = c.states[i];
    ReturnTimeStats st =
        expected_return_time(chain, state, c.horizon, c.samples, result.manifest.sub_seeds[i], c.survival);
    std::string line = std::to_string(state) + "," + std::to_string(st.samples) + "," +
                       format_double(st.mean_return) + "," + format_double(st.censored_fraction());
    for (std::size_t k = 1; k <= c.survival; ++k) line += "," + format_double(st.survival[k]);
    return TaskOutput{line + "\n", 0.0};
  });
  for (auto& o : outputs) result.csv += o.lines;
  return result;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  switch (config.kind) {
    case ExperimentKind::kBackward: result = run_backward(config); break;
    case ExperimentKind::kForward: result = run_forward(config); break;
    case ExperimentKind::kBoundary: result = run_boundary(config); break;
    case ExperimentKind::kTiling: result = run_tiling(config); break;
    case ExperimentKind::kMarkov: result = run_markov(config); break;
  }
  result.manifest.version = kVersion;
  result.manifest.config_yaml = config_to_yaml(config);
  std::size_t lines = 0;
  for (char ch : result.csv) lines += ch == '\n';
  result.manifest.rows = lines >= 2 ? lines - 2 : 0;
  result.manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunManifest run(const ExperimentConfig& config) {
  RunResult r = run_experiment(config);
  std::ofstream csv(config.output, std::ios::binary);
  if (!csv) throw Error(ErrorKind::kConfigError, "cannot write '" + config.output + "'");
  csv << r.csv;
  std::ofstream manifest(config.output + ".manifest.yaml", std::ios::binary);
  manifest << manifest_to_yaml(r.manifest);
  return r.manifest;
}

}  // namespace ergolab
