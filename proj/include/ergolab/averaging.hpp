#pragma once

// rho-weighted averages over right-rooted trees applied to a point: tree
// weights, transfer-operator iterates, Cesaro backward averages over the
// complete triangles, and the forward free-group averages.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/systems.hpp"
#include "ergolab/words.hpp"

namespace ergolab {

struct TreeEvaluation {
  double total_weight = 0.0;  // |S.x|_rho^x
  double weighted_sum = 0.0;  // sum of f(y) rho(y, x)
  // Weight of preimages of tree nodes that lie beyond the enumerated branches.
  double truncation_tail = 0.0;

  double average() const { return weighted_sum / total_weight; }
};

struct ReportRow {
  std::string key;  // "n" value for complete sweeps, tree id otherwise
  std::size_t n = 0;
  double total_weight = 0.0;
  double average = 0.0;
  std::optional<double> target;
  std::optional<double> abs_error;
  double tail = 0.0;
};

struct AveragingReport {
  std::string system_id;
  std::string observable_id;
  std::uint64_t point_seed = 0;
  Word point_prefix;
  std::vector<ReportRow> rows;
  double truncation_bound = 0.0;  // largest tail seen over the rows
};

// Level-by-level enumeration of the backward orbit.
//
// budget == 0 enumerates every branch. Otherwise a node carrying budget b
// expands exactly when b >= |alphabet| (children get b * weight) and is
// replaced by max(1, round(b)) weighted random backward walks otherwise.
struct LevelOptions {
  double budget = 0.0;
  std::uint64_t seed = 0;
};

// Index k holds level k: weight = |T^-k(x)|, weighted_sum = (L^k f)(x), and
// tail = cumulative weight lost to unenumerated branches up to level k. The
// walk estimator keeps weight[k] + tail[k] equal to the exact level mass.
struct LevelSums {
  std::vector<double> weight;
  std::vector<double> weighted_sum;
  std::vector<double> tail;
};

// f may be null (weights only).
LevelSums level_sums(const System& system, const Observable* f, std::size_t n, const Point& x,
                     const LevelOptions& options = {});

double tree_weight(const System& system, const RightRootedTree& tree, const Point& x);
// Throws EmptyTreeAtPoint when no word of the tree is realizable at x.
TreeEvaluation weighted_average(const System& system, const Observable& f,
                                const RightRootedTree& tree, const Point& x);

// (L^n f)(x).
double transfer_iterate(const System& system, const Observable& f, std::size_t n, const Point& x,
                        const LevelOptions& options = {});

// Rows n = 0..n_max of A_f[tri^n . x], from one enumeration of level n_max.
AveragingReport cesaro_backward(const System& system, const Observable& f, std::size_t n_max,
                                const Point& x, const LevelOptions& options = {});

struct NamedTree {
  std::string id;
  RightRootedTree tree;
};

// One row per tree, sorted by total weight (stable).
AveragingReport tree_sweep_backward(const System& system, const Observable& f,
                                    const std::vector<NamedTree>& trees, const Point& x);

// --- Forward averages ---------------------------------------------------------

// Average of f(w . x) rho(w . x, x) over w in S, with the free group acting
// on the boundary point by reduced concatenation. Non-reduced words are
// skipped together with their extensions.
TreeEvaluation boundary_forward_average(const BoundarySystem& boundary, const Observable& f,
                                        const RightRootedTree& tree, const SymbolicPoint& x);

// Per-length sums of the same quantity; index k collects words of length k.
LevelSums boundary_forward_levels(const BoundarySystem& boundary, const Observable& f,
                                  const RightRootedTree& tree, const SymbolicPoint& x);

struct ForwardEvaluation {
  double mass = 0.0;  // P(S)
  double weighted_sum = 0.0;
  double average() const { return weighted_sum / mass; }
};

// (1/P(S)) sum over reduced w in S of f(w . x) P(w), P the Markov measure of
// the chain on words (P(w) = pi(w_0) P(w_0, w_1) ...).
ForwardEvaluation forward_group_average(const GroupAction& action, const MarkovChain& chain,
                                        const Observable& f, const RightRootedTree& tree, double x);

// Index k: mass and weighted sum of the reduced words of length exactly k.
LevelSums forward_sphere_sums(const GroupAction& action, const MarkovChain& chain,
                              const Observable& f, std::size_t n, double x);

// (1/(n+1)) sum over reduced w of length <= n of f(w . x) P(w).
double bufetov_ball_average(const GroupAction& action, const MarkovChain& chain,
                            const Observable& f, std::size_t n, double x);

}  // namespace ergolab
