#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ergolab/averaging.hpp"
#include "ergolab/catalog.hpp"
#include "ergolab/error.hpp"

using namespace ergolab;

namespace {

SymbolicPoint sym(Word prefix) { return SymbolicPoint{std::move(prefix), 0}; }

void add_word(TreeBuilder& b, const Word& w) {
  TreeBuilder::Index node = RightRootedTree::kRoot;
  for (auto it = w.rbegin(); it != w.rend(); ++it) node = b.extend(node, *it);
}

// tri^m together with the words of a random tree.
RightRootedTree triangle_plus(const Alphabet& alphabet, std::size_t m, const RightRootedTree& extra) {
  TreeBuilder b(alphabet);
  std::vector<TreeBuilder::Index> frontier{RightRootedTree::kRoot};
  for (std::size_t level = 0; level < m; ++level) {
    std::vector<TreeBuilder::Index> next;
    for (auto node : frontier) {
      for (Symbol s = 0; s < alphabet.size(); ++s) next.push_back(b.extend(node, s));
    }
    frontier = std::move(next);
  }
  for (const Word& w : extra.words()) add_word(b, w);
  return b.build();
}

}  // namespace

TEST_CASE("tree weight examples") {
  auto bern = bernoulli_system(2);
  const Alphabet two = Alphabet::plain(2);
  CHECK(tree_weight(*bern, complete_tree(two, 2), sym({1, 0, 1})) == 3.0);

  const std::vector<Word> root{Word{}};
  for (const auto& entry : catalog_systems()) {
    SystemPtr s = make_system(entry.id);
    const Point x = s->sample_point(1, 4);
    CHECK(tree_weight(*s, RightRootedTree::from_words(s->alphabet(), root), x) == 1.0);
  }

  // Unreduced I^{<=1}: the inverse of x_0 is not a preimage.
  auto b = make_system("boundary:r=2:uniform");
  CHECK(std::abs(tree_weight(*b, complete_tree(b->alphabet(), 1), sym({0, 2})) - 2.0) <= 1e-15);
}

TEST_CASE("weighted average examples") {
  auto bern = bernoulli_system(2);
  const Observable f = Observable::indicator(2, 0);
  const TreeEvaluation e = weighted_average(*bern, f, complete_tree(Alphabet::plain(2), 1), sym({0, 1}));
  CHECK(e.total_weight == 2.0);
  CHECK(e.average() == 0.75);

  auto g = gauss_system(50);
  const Point x = GaussSystem::make_point(std::numbers::sqrt2 - 1.0);
  const TreeEvaluation one = weighted_average(*g, Observable::constant(1.0), complete_tree(g->alphabet(), 1), x);
  CHECK(std::abs(one.average() - 1.0) <= 1e-15);
  CHECK(one.truncation_tail <= 2.0 / 51);
  CHECK(std::abs(one.total_weight + one.truncation_tail - 2.0) <= 1e-14);

  auto b = make_system("boundary:r=2:uniform");
  const Observable c = Observable::constant(3.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Point p = b->sample_point(seed, 6);
    CHECK(std::abs(weighted_average(*b, c, complete_tree(b->alphabet(), 4), p).average() - 3.0) <= 1e-12);
  }
}

TEST_CASE("transfer iterates") {
  auto bern = bernoulli_system(2);
  const Observable f = Observable::indicator(2, 0);
  CHECK(transfer_iterate(*bern, f, 0, sym({0})) == 1.0);
  CHECK(transfer_iterate(*bern, f, 0, sym({1})) == 0.0);
  CHECK(transfer_iterate(*bern, f, 1, sym({1, 1})) == 0.5);
}

TEST_CASE("unit column weight on every catalog system") {
  for (const auto& entry : catalog_systems()) {
    CAPTURE(entry.id);
    SystemPtr s = make_system(entry.id);
    const LevelOptions options{s->finite_branching() ? 0.0 : 2000.0, 7};
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const LevelSums levels = level_sums(*s, nullptr, 5, s->sample_point(seed, 8), options);
      for (std::size_t k = 0; k <= 5; ++k) {
        CHECK(std::abs(levels.weight[k] + levels.tail[k] - 1.0) <= 1e-9);
        if (s->finite_branching()) CHECK(levels.tail[k] == 0.0);
      }
    }
  }
}

TEST_CASE("budgeted level engine is unbiased on a finite system") {
  auto s = make_system("markov:two_state");
  const Observable f = Observable::cylinder(2, 2, {1, 2, 3, 4});
  const Point x = s->sample_point(4, 20);
  const LevelSums exact = level_sums(*s, &f, 14, x);
  const int runs = 20;
  double mean = 0.0;
  double sq = 0.0;
  for (int r = 0; r < runs; ++r) {
    const LevelSums walked = level_sums(*s, &f, 14, x, {200.0, static_cast<std::uint64_t>(r)});
    for (std::size_t k = 0; k <= 14; ++k) {
      CHECK(std::abs(walked.weight[k] - 1.0) <= 1e-12);
      CHECK(walked.tail[k] == 0.0);
    }
    mean += walked.weighted_sum[14];
    sq += walked.weighted_sum[14] * walked.weighted_sum[14];
  }
  mean /= runs;
  const double se = std::sqrt((sq / runs - mean * mean) / (runs - 1));
  CHECK(se > 0.0);
  CHECK(std::abs(mean - exact.weighted_sum[14]) <= 4.0 * se);
}

TEST_CASE("Cesaro rows") {
  auto bern = bernoulli_system(2);
  const Observable f = Observable::indicator(2, 0);
  const AveragingReport r = cesaro_backward(*bern, f, 6, sym({0, 1, 1, 0, 1, 0, 0}));
  REQUIRE(r.rows.size() == 7);
  CHECK(r.rows[3].average == 0.625);
  for (std::size_t n = 0; n <= 6; ++n) {
    CHECK(std::abs(r.rows[n].average - (1.0 + n / 2.0) / (n + 1.0)) <= 1e-15);
    CHECK(r.rows[n].total_weight == n + 1.0);
    CHECK(*r.rows[n].target == 0.5);
  }

  const Observable c = Observable::constant(-2.5);
  for (const auto& row : cesaro_backward(*bern, c, 5, sym({1, 1, 0, 1, 0, 1})).rows) {
    CHECK(std::abs(row.average + 2.5) <= 1e-15);
  }

  auto blocks = block_chain_system();
  const Observable block_a = Observable::cylinder(4, 1, {1, 1, 0, 0});
  const Point xa = blocks->sample_point(3, 12);
  const Symbol x0 = std::get<SymbolicPoint>(xa).prefix[0];
  for (const auto& row : cesaro_backward(*blocks, block_a, 10, xa).rows) {
    CHECK(std::abs(row.average - (x0 < 2 ? 1.0 : 0.0)) <= 1e-15);
  }
}

TEST_CASE("Cesaro rows are running means of transfer iterates") {
  for (const char* id : {"markov:two_state", "boundary:r=2:skewed", "bernoulli:3"}) {
    CAPTURE(id);
    SystemPtr s = make_system(id);
    const Observable f = make_observable("indicator:1", *s);
    const Point x = s->sample_point(21, 10);
    const AveragingReport r = cesaro_backward(*s, f, 8, x);
    double running = 0.0;
    for (std::size_t n = 0; n <= 8; ++n) {
      running += transfer_iterate(*s, f, n, x);
      CHECK(std::abs(r.rows[n].average - running / (n + 1.0)) <= 1e-12);
      CHECK(std::abs(r.rows[n].total_weight - (n + 1.0)) <= 1e-12);
      CHECK(r.rows[n].average >= 0.0);
      CHECK(r.rows[n].average <= 1.0);
    }
  }
}

TEST_CASE("level integral identity by Monte Carlo") {
  auto s = make_system("markov:two_state");
  const auto* m = dynamic_cast<const MarkovShiftSystem*>(s.get());
  const MarkovChain& c = m->chain();
  const std::vector<double> values{1, 2, 3, 4};
  const Observable f = Observable::cylinder(2, 2, values);
  double integral = 0.0;
  for (Symbol a = 0; a < 2; ++a) {
    for (Symbol b = 0; b < 2; ++b) integral += c.initial(a) * c.transition(a, b) * values[2 * a + b];
  }
  for (std::size_t n = 1; n <= 4; ++n) {
    const int count = 20000;
    double mean = 0.0;
    double sq = 0.0;
    for (int k = 0; k < count; ++k) {
      const double v = transfer_iterate(*s, f, n, s->sample_point(1000 * n + k, 2));
      mean += v;
      sq += v * v;
    }
    mean /= count;
    const double se = std::sqrt((sq / count - mean * mean) / count);
    CAPTURE(n);
    CHECK(std::abs(mean - integral) <= 3.0 * se);
  }
}

TEST_CASE("tree sweep") {
  auto bern = bernoulli_system(2);
  const Alphabet two = Alphabet::plain(2);
  const Observable f = Observable::indicator(2, 0);
  const Point x = sym({0, 1, 1, 0});
  std::vector<NamedTree> triangles;
  for (std::size_t n = 0; n <= 2; ++n) triangles.push_back({"tri" + std::to_string(n), complete_tree(two, n)});
  const AveragingReport sweep = tree_sweep_backward(*bern, f, triangles, x);
  const AveragingReport ces = cesaro_backward(*bern, f, 2, x);
  for (std::size_t n = 0; n <= 2; ++n) {
    CHECK(sweep.rows[n].key == "tri" + std::to_string(n));
    CHECK(std::abs(sweep.rows[n].average - ces.rows[n].average) <= 1e-15);
    CHECK(sweep.rows[n].total_weight == ces.rows[n].total_weight);
  }

  std::vector<NamedTree> random;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    random.push_back({"r" + std::to_string(seed), random_tree(two, 8, 1 + seed * 3, seed)});
  }
  const AveragingReport r = tree_sweep_backward(*bern, f, random, sym({1, 0, 0, 1, 1, 0, 1, 0, 1}));
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    CHECK(r.rows[k].average >= 0.0);
    CHECK(r.rows[k].average <= 1.0);
    if (k > 0) CHECK(r.rows[k - 1].total_weight <= r.rows[k].total_weight);
  }
}

TEST_CASE("heavy random trees stay inside the complete-tree error envelope") {
  auto s = make_system("markov:two_state");
  const Alphabet two = Alphabet::plain(2);
  const Observable f = Observable::indicator(2, 0);
  const Point x = s->sample_point(5, 40);
  const std::size_t m = 19;
  const AveragingReport base = cesaro_backward(*s, f, m, x);
  const double base_weight = base.rows[m].total_weight;
  const double base_sum = base.rows[m].average * base_weight;

  // Each tree is tri^m united with a random tree R; its sums are those of
  // tri^m plus R minus R cut at height m.
  double hi = 0.0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RightRootedTree r = random_tree(two, 30, 4000, seed);
    std::vector<Word> low;
    for (const Word& w : r.words()) {
      if (w.size() <= m) low.push_back(w);
    }
    const TreeEvaluation full = weighted_average(*s, f, r, x);
    const TreeEvaluation cut = weighted_average(*s, f, RightRootedTree::from_words(two, low), x);
    const double weight = base_weight + full.total_weight - cut.total_weight;
    const double sum = base_sum + full.weighted_sum - cut.weighted_sum;
    if (seed == 0) {
      const TreeEvaluation direct = weighted_average(*s, f, triangle_plus(two, m, r), x);
      CHECK(std::abs(direct.total_weight - weight) <= 1e-9);
      CHECK(std::abs(direct.weighted_sum - sum) <= 1e-9);
    }
    CHECK(weight >= 20.0);
    hi = std::max(hi, weight);
    worst = std::max(worst, std::abs(sum / weight - 0.8));
  }
  REQUIRE(hi < 32.0);
  // Complete trees in the same dyadic weight bucket [16, 32), up to the
  // heaviest random tree.
  const auto n_max = static_cast<std::size_t>(std::ceil(hi)) - 1;
  const AveragingReport ces = cesaro_backward(*s, f, n_max, x);
  double envelope = 0.0;
  for (const auto& row : ces.rows) {
    if (row.total_weight >= 16.0) envelope = std::max(envelope, *row.abs_error);
  }
  MESSAGE("random-tree error " << worst << ", triangle envelope " << envelope);
  CHECK(worst <= envelope);
}

TEST_CASE("backward averages over many trees form a bounded set") {
  auto s = make_system("boundary:r=2:skewed");
  const Observable f = Observable::cylinder(4, 1, {-1.0, 0.5, 2.0, 0.0});
  const Point x = s->sample_point(8, 10);
  double lo = 1e300;
  double hi = -1e300;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const RightRootedTree t = random_tree(s->alphabet(), 6, 1 + seed % 120, seed, true);
    const double a = weighted_average(*s, f, t, x).average();
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  MESSAGE("spread of averages over 200 trees: " << hi - lo);
  CHECK(lo >= -1.0);
  CHECK(hi <= 2.0);
}

TEST_CASE("unrealizable words are skipped") {
  auto s = make_system("boundary:r=2:uniform");
  // a^-1 is not a preimage of a point starting with a.
  const std::vector<Word> words{Word{}, Word{1}};
  const RightRootedTree t = RightRootedTree::from_words(s->alphabet(), words);
  const TreeEvaluation e = weighted_average(*s, Observable::constant(1.0), t, sym({0, 2}));
  CHECK(e.total_weight == 1.0);
}

TEST_CASE("boundary balls agree with complete trees of the shift") {
  auto b = boundary_system(2, skewed_boundary_chain(), "skewed");
  const Observable f = Observable::cylinder(4, 2, std::vector<double>{
      0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SymbolicPoint x = std::get<SymbolicPoint>(b->sample_point(seed, 10));
    const Symbol x0 = x.prefix[0];
    for (std::size_t n : {0U, 1U, 3U, 6U}) {
      const RightRootedTree ball = complete_tree(b->alphabet(), n, true, b->alphabet().inverse(x0));
      const TreeEvaluation fwd = boundary_forward_average(*b, f, ball, x);
      const ReportRow back = cesaro_backward(*b, f, n, x).rows[n];
      CHECK(std::abs(fwd.average() - back.average) <= 1e-12);
      CHECK(std::abs(fwd.total_weight - back.total_weight) <= 1e-12);
    }
  }
  const SymbolicPoint x = std::get<SymbolicPoint>(b->sample_point(3, 8));
  CHECK(boundary_forward_average(*b, Observable::constant(1.0), complete_tree(b->alphabet(), 4), x).average() ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("forward free-group averages") {
  auto action = default_rotation_action();
  const MarkovChain uniform = uniform_boundary_chain(2);
  const Alphabet f2 = Alphabet::free_group(2);
  const Observable cos2pi = make_observable("cos2pi", *make_system("skew:rotation:r=2"));
  const std::vector<Word> root{Word{}};
  const ForwardEvaluation at_root =
      forward_group_average(*action, uniform, cos2pi, RightRootedTree::from_words(f2, root), 0.3);
  CHECK(std::abs(at_root.average() - std::cos(2.0 * std::numbers::pi * 0.3)) <= 1e-15);
  CHECK(at_root.mass == 1.0);

  for (const MarkovChain& chain : {uniform, skewed_boundary_chain()}) {
    for (std::size_t n = 0; n <= 8; ++n) {
      const ForwardEvaluation e = forward_group_average(*action, chain, cos2pi, complete_tree(f2, n), 0.1);
      CHECK(std::abs(e.mass - (n + 1.0)) <= 1e-12);
    }
  }

  // Brute force at n = 1, x = 0: four reduced words of probability 1/4.
  const double alpha = std::numbers::sqrt2 - 1.0;
  const double beta = std::sqrt(3.0) - 1.0;
  const double expect =
      0.5 * (1.0 + 0.5 * (std::cos(2.0 * std::numbers::pi * alpha) + std::cos(2.0 * std::numbers::pi * beta)));
  CHECK(std::abs(bufetov_ball_average(*action, uniform, cos2pi, 1, 0.0) - expect) <= 1e-15);

  // Sphere sums against the tree path.
  const LevelSums spheres = forward_sphere_sums(*action, uniform, cos2pi, 5, 0.2);
  const ForwardEvaluation ball = forward_group_average(*action, uniform, cos2pi, complete_tree(f2, 5), 0.2);
  double total = 0.0;
  for (double v : spheres.weighted_sum) total += v;
  CHECK(std::abs(total - ball.weighted_sum) <= 1e-12);
}

TEST_CASE("skew-product bridge identity on random trees") {
  auto skew = std::dynamic_pointer_cast<const SkewProductSystem>(make_system("skew:rotation:r=2"));
  REQUIRE(skew);
  const GroupAction& action = skew->action();
  const MarkovChain& chain = skew->boundary().chain();
  const Observable f = make_observable("cos2pi", *skew);
  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RightRootedTree t = random_tree(skew->alphabet(), 5, 2 + seed * 2, seed, seed % 3 != 0);
    const double x = uniform01(rng);
    const ForwardEvaluation fwd = forward_group_average(action, chain, f, t, x);
    double mass = 0.0;
    double sum = 0.0;
    for (Symbol i = 0; i < 4; ++i) {
      const Point y = ProductPoint{x, sym({i})};
      const TreeEvaluation e = weighted_average(*skew, f, t, y);
      mass += chain.initial(i) * e.total_weight;
      sum += chain.initial(i) * e.weighted_sum;
    }
    CHECK(std::abs(fwd.mass - mass) <= 1e-10);
    CHECK(std::abs(fwd.weighted_sum - sum) <= 1e-10);
  }
}
