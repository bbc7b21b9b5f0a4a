#include "ergolab/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ergolab/error.hpp"

namespace ergolab {

std::size_t TileAssignment::max_height() const {
  std::size_t h = 0;
  for (const auto& t : trees) h = std::max(h, t.height());
  return h;
}

const RightRootedTree& TileAssignment::tree_for(std::span<const Symbol> prefix) const {
  if (prefix.size() < locality) {
    throw Error(ErrorKind::kInsufficientDepth, "tile rule " + id + " reads " +
                                                   std::to_string(locality) + " symbols");
  }
  return trees.at(rule(prefix));
}

TileAssignment TileAssignment::constant(const Alphabet& alphabet, std::size_t height) {
  TileAssignment a;
  a.id = "constant:" + std::to_string(height);
  a.trees.push_back(complete_tree(alphabet, height));
  a.rule = [](std::span<const Symbol>) -> std::size_t { return 0; };
  return a;
}

TileAssignment TileAssignment::two_height(const Alphabet& alphabet, Symbol symbol, std::size_t high,
                                          std::size_t low) {
  TileAssignment a;
  a.id = "two_height:" + std::to_string(symbol) + ":" + std::to_string(high) + ":" + std::to_string(low);
  a.locality = 1;
  a.trees.push_back(complete_tree(alphabet, high));
  a.trees.push_back(complete_tree(alphabet, low));
  a.rule = [symbol](std::span<const Symbol> p) -> std::size_t { return p[0] == symbol ? 0 : 1; };
  return a;
}

TileAssignment TileAssignment::singleton(const Alphabet& alphabet) {
  TileAssignment a;
  a.id = "singleton";
  a.trees.push_back(complete_tree(alphabet, 0));
  a.rule = [](std::span<const Symbol>) -> std::size_t { return 0; };
  return a;
}

namespace {

struct Mass {
  double covered = 0.0;
  double band = 0.0;
  double overflow = 0.0;

  void add(const Mass& m, double scale) {
    covered += scale * m.covered;
    band += scale * m.band;
    overflow += scale * m.overflow;
  }
};

// Masses are relative to the root of each subproblem, so a subproblem can be
// memoised on (level, leading symbols) for shifts with local weights.
class GreedyTiler {
 public:
  GreedyTiler(const System& system, const TileAssignment& assignment, std::size_t N,
              std::size_t band, bool record)
      : system_(system), assignment_(assignment), N_(N), band_(band), record_(record) {
    if (!record_ && system_.weight_locality()) {
      key_length_ = std::max(assignment_.locality, *system_.weight_locality());
      memo_ = true;
    }
  }

  Mass process(const Point& y, std::size_t m, const Word& word) {
    std::pair<std::size_t, Word> key;
    if (memo_) {
      const Word& p = prefix_of(y);
      if (p.size() < key_length_) {
        throw Error(ErrorKind::kInsufficientDepth, "tiling needs " + std::to_string(key_length_) +
                                                       " symbols at every node");
      }
      key = {m, Word(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(key_length_))};
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }

    std::span<const Symbol> prefix;
    if (assignment_.locality > 0) prefix = prefix_of(y);
    if (prefix.size() < assignment_.locality) {
      throw Error(ErrorKind::kInsufficientDepth, "point prefix shorter than the tile rule's locality");
    }
    const std::size_t tree_index = assignment_.rule(prefix);
    const RightRootedTree& tile = assignment_.trees.at(tree_index);

    Mass out;
    if (m + tile.height() <= N_) {
      if (record_) tiles.push_back({word, tree_index});
      place(tile, RightRootedTree::kRoot, y, m, 1.0, word, out);
    } else {
      (m + band_ > N_ ? out.band : out.overflow) += 1.0;
      if (m < N_) {
        for (const auto& b : system_.preimages(y).branches) {
          out.add(process(b.point, m + 1, child_word(word, b.index)), b.weight);
        }
      }
    }
    if (memo_) cache_.emplace(std::move(key), out);
    return out;
  }

  std::vector<PlacedTile> tiles;

 private:
  Word child_word(const Word& word, Symbol s) const {
    if (!record_) return {};
    Word w;
    w.reserve(word.size() + 1);
    w.push_back(s);
    w.insert(w.end(), word.begin(), word.end());
    return w;
  }

  void place(const RightRootedTree& tile, RightRootedTree::Index node, const Point& y, std::size_t m,
             double weight, const Word& word, Mass& out) {
    out.covered += weight;
    if (record_ && !covered_.insert(word).second) {
      throw Error(ErrorKind::kInvalidTree, "greedy tiles overlap");
    }
    if (m == N_) return;
    for (const auto& b : system_.preimages(y).branches) {
      const auto c = tile.child(node, b.index);
      const double w = weight * b.weight;
      if (c != RightRootedTree::kNone) {
        place(tile, c, b.point, m + 1, w, child_word(word, b.index), out);
      } else {
        out.add(process(b.point, m + 1, child_word(word, b.index)), w);
      }
    }
  }

  const System& system_;
  const TileAssignment& assignment_;
  std::size_t N_;
  std::size_t band_;
  bool record_;
  bool memo_ = false;
  std::size_t key_length_ = 0;
  std::map<std::pair<std::size_t, Word>, Mass> cache_;
  std::set<Word> covered_;
};

}  // namespace

TilingResult greedy_tile(const System& system, const TileAssignment& assignment, std::size_t N,
                         const Point& x, const TilingOptions& options) {
  for (const auto& t : assignment.trees) {
    if (!(t.alphabet() == system.alphabet())) {
      throw Error(ErrorKind::kInvalidTree, "tile alphabet does not match " + system.id());
    }
  }
  GreedyTiler tiler(system, assignment, N, options.band.value_or(assignment.max_height()),
                    options.record_tiles);
  const Mass mass = tiler.process(x, 0, Word{});
  TilingResult out;
  out.N = N;
  out.tiles = std::move(tiler.tiles);
  out.covered_weight = mass.covered;
  out.untiled_band = mass.band;
  out.untiled_overflow = mass.overflow;
  out.total_weight = mass.covered + mass.band + mass.overflow;
  return out;
}

std::size_t select_band_height(const TileAssignment& assignment, double epsilon,
                               const std::vector<Point>& sample_points) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::kDomainError, "epsilon must lie in (0, 1)");
  }
  std::vector<std::size_t> heights;
  heights.reserve(sample_points.size());
  for (const auto& p : sample_points) {
    std::span<const Symbol> prefix;
    if (assignment.locality > 0) prefix = prefix_of(p);
    heights.push_back(assignment.tree_for(prefix).height());
  }
  const double threshold = epsilon * epsilon / 2.0;
  const double count = static_cast<double>(std::max<std::size_t>(1, heights.size()));
  std::size_t L = 0;
  while (true) {
    const auto above = std::count_if(heights.begin(), heights.end(), [&](std::size_t h) { return h > L; });
    if (static_cast<double>(above) / count < threshold) return L;
    ++L;
  }
}

TilingSweep tiling_parameter_sweep(const System& system, const TileAssignment& assignment,
                                   double epsilon, const std::vector<Point>& sample_points) {
  TilingSweep sweep;
  sweep.epsilon = epsilon;
  const std::size_t L = select_band_height(assignment, epsilon, sample_points);
  sweep.L = L;
  sweep.N = static_cast<std::size_t>(std::ceil(2.0 * static_cast<double>(L) / epsilon - 1e-12));

  std::size_t successes = 0;
  TilingOptions options;
  options.band = L;
  for (const auto& p : sample_points) {
    const double c = greedy_tile(system, assignment, sweep.N, p, options).coverage();
    sweep.coverage.push_back(c);
    if (c >= 1.0 - epsilon) ++successes;
  }
  sweep.success_fraction = sample_points.empty()
                               ? 0.0
                               : static_cast<double>(successes) / static_cast<double>(sample_points.size());
  return sweep;
}

}  // namespace ergolab
