#include <doctest.h>

#include <cmath>
#include <set>

#include "ergolab/catalog.hpp"
#include "ergolab/error.hpp"
#include "ergolab/tiling.hpp"

using namespace ergolab;

namespace {

SymbolicPoint sym(Word prefix) { return SymbolicPoint{std::move(prefix), 0}; }

std::vector<Point> sample_points(const System& s, std::size_t count, std::uint64_t seed, std::size_t depth) {
  std::vector<Point> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(s.sample_point(derive_seed(seed, k), depth));
  return out;
}

}  // namespace

TEST_CASE("stacked triangles") {
  auto bern = bernoulli_system(2);
  const TileAssignment tri2 = TileAssignment::constant(bern->alphabet(), 2);
  TilingOptions record;
  record.record_tiles = true;

  const TilingResult r8 = greedy_tile(*bern, tri2, 8, sym({0, 1}), record);
  CHECK(r8.coverage() == 1.0);
  CHECK(r8.total_weight == 9.0);
  std::multiset<std::size_t> levels;
  for (const auto& t : r8.tiles) levels.insert(t.root.size());
  CHECK(levels.count(0) == 1);
  CHECK(levels.count(3) == 8);
  CHECK(levels.count(6) == 64);
  CHECK(levels.size() == 73);

  const TilingResult r9 = greedy_tile(*bern, tri2, 9, sym({0, 1}));
  CHECK(r9.coverage() == 0.9);
  CHECK(r9.untiled_band == 1.0);
  CHECK(r9.untiled_overflow == 0.0);
}

TEST_CASE("singleton tiles cover everything") {
  for (const char* id : {"bernoulli:3", "markov:two_state", "boundary:r=2:skewed"}) {
    SystemPtr s = make_system(id);
    const TileAssignment one = TileAssignment::singleton(s->alphabet());
    for (std::size_t N : {0U, 1U, 5U}) {
      const TilingResult r = greedy_tile(*s, one, N, s->sample_point(N, 4));
      CHECK(std::abs(r.coverage() - 1.0) <= 1e-12);
      CHECK(std::abs(r.total_weight - (N + 1.0)) <= 1e-12);
    }
  }
}

TEST_CASE("recorded tiles are disjoint and account for the covered weight") {
  auto bern = bernoulli_system(2);
  const TileAssignment two = TileAssignment::two_height(bern->alphabet(), 0, 4, 1);
  TilingOptions record;
  record.record_tiles = true;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Point x = bern->sample_point(seed, 4);
    const std::size_t N = 7 + seed;
    const TilingResult r = greedy_tile(*bern, two, N, x, record);

    // Expand every tile into absolute words; uniform weights are 2^-length.
    std::set<Word> covered;
    double weight = 0.0;
    for (const auto& tile : r.tiles) {
      for (const Word& w : two.trees[tile.tree].words()) {
        Word abs = w;
        abs.insert(abs.end(), tile.root.begin(), tile.root.end());
        CHECK(abs.size() <= N);
        CHECK(covered.insert(abs).second);
        weight += std::ldexp(1.0, -static_cast<int>(abs.size()));
      }
    }
    CHECK(std::abs(weight - r.covered_weight) <= 1e-12);
    CHECK(std::abs(r.total_weight - (N + 1.0)) <= 1e-12);
    CHECK(r.coverage() >= 0.0);
    CHECK(r.coverage() <= 1.0);
  }
}

TEST_CASE("untiled words fall in the top band or under a tall tile") {
  auto bern = bernoulli_system(2);
  const TileAssignment two = TileAssignment::two_height(bern->alphabet(), 0, 4, 1);
  for (std::size_t N = 0; N <= 12; ++N) {
    const Point x = bern->sample_point(N, 4);
    const TilingResult r = greedy_tile(*bern, two, N, x);
    CHECK(std::abs(r.covered_weight + r.untiled_band + r.untiled_overflow - (N + 1.0)) <= 1e-12);
    // The band holds at most the top L = 4 levels.
    CHECK(r.untiled_band <= std::min<double>(4.0, N + 1.0) + 1e-12);
  }
}

TEST_CASE("memoised and recorded runs agree") {
  for (const char* id : {"bernoulli:2", "markov:two_state", "blocks", "boundary:r=2:skewed"}) {
    CAPTURE(id);
    SystemPtr s = make_system(id);
    const TileAssignment two = make_assignment("two_height:1:3:1", *s);
    TilingOptions record;
    record.record_tiles = true;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Point x = s->sample_point(seed, 6);
      const TilingResult fast = greedy_tile(*s, two, 9, x);
      const TilingResult slow = greedy_tile(*s, two, 9, x, record);
      CHECK(std::abs(fast.covered_weight - slow.covered_weight) <= 1e-12);
      CHECK(std::abs(fast.untiled_band - slow.untiled_band) <= 1e-12);
      CHECK(std::abs(fast.untiled_overflow - slow.untiled_overflow) <= 1e-12);
    }
  }
}

TEST_CASE("constant tiles leave at most the top band uncovered") {
  auto s = make_system("markov:two_state");
  for (std::size_t h = 1; h <= 3; ++h) {
    const TileAssignment tri = TileAssignment::constant(s->alphabet(), h);
    double previous = 0.0;
    for (std::size_t N = 0; N <= 20; ++N) {
      const double c = greedy_tile(*s, tri, N, s->sample_point(1, 2)).coverage();
      CHECK(c >= 1.0 - static_cast<double>(h) / (N + 1.0) - 1e-12);
      // Complete stacks (N = h mod h+1) cover everything.
      if (N % (h + 1) == h) {
        CHECK(std::abs(c - 1.0) <= 1e-12);
        CHECK(c >= previous - 1e-12);
        previous = c;
      }
    }
  }
}

TEST_CASE("band height selection") {
  auto bern = bernoulli_system(2);
  const auto points = sample_points(*bern, 200, 3, 4);
  CHECK(select_band_height(TileAssignment::constant(bern->alphabet(), 3), 0.25, points) == 3);
  CHECK(select_band_height(TileAssignment::singleton(bern->alphabet()), 0.5, points) == 0);
  CHECK(select_band_height(TileAssignment::two_height(bern->alphabet(), 0, 4, 1), 0.2, points) == 4);
  CHECK_THROWS_AS(select_band_height(TileAssignment::singleton(bern->alphabet()), 1.0, points), Error);
}

TEST_CASE("parameter sweeps") {
  auto bern = bernoulli_system(2);
  const auto points = sample_points(*bern, 40, 11, 4);
  for (std::size_t L = 1; L <= 3; ++L) {
    const TilingSweep sweep = tiling_parameter_sweep(*bern, TileAssignment::constant(bern->alphabet(), L), 0.25, points);
    CHECK(sweep.L == L);
    CHECK(sweep.N == 8 * L);
    for (double c : sweep.coverage) CHECK(c >= 1.0 - L / (sweep.N + 1.0) - 1e-12);
    CHECK(sweep.success_fraction == 1.0);
  }

  const TilingSweep one = tiling_parameter_sweep(*bern, TileAssignment::singleton(bern->alphabet()), 0.3, points);
  CHECK(one.success_fraction == 1.0);

  const auto many = sample_points(*bern, 200, 2024, 4);
  const TilingSweep two =
      tiling_parameter_sweep(*bern, TileAssignment::two_height(bern->alphabet(), 0, 4, 1), 0.2, many);
  CHECK(two.L == 4);
  CHECK(two.N == 40);
  MESSAGE("two-height success fraction " << two.success_fraction);
  CHECK(two.success_fraction >= 0.8);
}

TEST_CASE("tiling errors") {
  auto bern = bernoulli_system(2);
  const TileAssignment two = TileAssignment::two_height(bern->alphabet(), 0, 2, 1);
  CHECK_THROWS_AS(greedy_tile(*bern, two, 4, sym({})), Error);
  auto three = bernoulli_system(3);
  CHECK_THROWS_AS(greedy_tile(*three, two, 4, sym({0})), Error);
}
