#pragma once

// Greedy tiling of the triangle tri^N . x by disjoint tiles S_y . y.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/systems.hpp"
#include "ergolab/words.hpp"

namespace ergolab {

// Point -> tree rule reading only the first `locality` symbols of the point.
struct TileAssignment {
  std::string id;
  std::size_t locality = 0;
  std::vector<RightRootedTree> trees;
  // Index into trees for a prefix of length >= locality.
  std::function<std::size_t(std::span<const Symbol>)> rule;

  std::size_t max_height() const;
  const RightRootedTree& tree_for(std::span<const Symbol> prefix) const;

  // S_y = tri^height for every y.
  static TileAssignment constant(const Alphabet& alphabet, std::size_t height);
  // S_y = tri^high if y_0 == symbol, else tri^low.
  static TileAssignment two_height(const Alphabet& alphabet, Symbol symbol, std::size_t high,
                                   std::size_t low);
  // S_y = {empty word}.
  static TileAssignment singleton(const Alphabet& alphabet);
};

struct PlacedTile {
  Word root;  // relative to x
  std::size_t tree = 0;
};

struct TilingResult {
  std::size_t N = 0;
  std::vector<PlacedTile> tiles;  // only when recorded
  double covered_weight = 0.0;
  double total_weight = 0.0;
  double untiled_band = 0.0;      // untiled roots above level N - L
  double untiled_overflow = 0.0;  // untiled roots whose tile is taller than the room left
  double coverage() const { return total_weight > 0.0 ? covered_weight / total_weight : 0.0; }
};

struct TilingOptions {
  // Width of the top band; defaults to the assignment's maximum height.
  std::optional<std::size_t> band;
  // Record every tile and assert pairwise disjointness of the tiles' words.
  bool record_tiles = false;
};

// Ascending level scan from the root: an uncovered y at level m receives its
// tile when m + h(S_y) <= N. Weights are rho(., x).
TilingResult greedy_tile(const System& system, const TileAssignment& assignment, std::size_t N,
                         const Point& x, const TilingOptions& options = {});

struct TilingSweep {
  double epsilon = 0.0;
  std::size_t L = 0;
  std::size_t N = 0;
  std::vector<double> coverage;  // per sample point
  double success_fraction = 0.0;  // fraction with coverage >= 1 - epsilon
};

// Smallest L with sampled fraction of {h(S_y) > L} below epsilon^2 / 2.
std::size_t select_band_height(const TileAssignment& assignment, double epsilon,
                               const std::vector<Point>& sample_points);

// L: smallest height with sampled fraction of {h(S_y) > L} below epsilon^2/2;
// N = ceil(2L / epsilon).
TilingSweep tiling_parameter_sweep(const System& system, const TileAssignment& assignment,
                                   double epsilon, const std::vector<Point>& sample_points);

}  // namespace ergolab
