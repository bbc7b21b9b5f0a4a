#include <doctest.h>

#include <cmath>
#include <set>

#include "ergolab/error.hpp"
#include "ergolab/words.hpp"

using namespace ergolab;

namespace {

// All words of length <= n over k symbols, by counting in base k.
std::vector<Word> brute_words(std::size_t k, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t len = 1; len <= n; ++len) {
    const auto total = static_cast<std::size_t>(std::pow(k, len));
    for (std::size_t code = 0; code < total; ++code) {
      Word w(len);
      std::size_t c = code;
      for (std::size_t j = 0; j < len; ++j) {
        w[j] = static_cast<Symbol>(c % k);
        c /= k;
      }
      out.push_back(std::move(w));
    }
  }
  return out;
}

bool brute_reduced(const Word& w) {
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    if ((w[j] ^ 1U) == w[j + 1]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("alphabet inverse and reduction") {
  const Alphabet f2 = Alphabet::free_group(2);
  CHECK(f2.size() == 4);
  CHECK(f2.inverse(0) == 1);
  CHECK(f2.inverse(3) == 2);
  CHECK_THROWS_AS(Alphabet::plain(3).inverse(0), Error);

  CHECK(is_reduced(f2, Word{0, 2, 1}));
  CHECK_FALSE(is_reduced(f2, Word{0, 1}));
  CHECK(is_reduced(Alphabet::plain(2), Word{0, 1, 0}));
  CHECK(free_reduce(f2, Word{2, 0, 1, 3}).empty());
  CHECK(free_reduce(f2, Word{2, 0, 1, 0}) == Word{2, 0});
}

TEST_CASE("complete tree examples") {
  const Alphabet two = Alphabet::plain(2);
  CHECK(complete_tree(two, 0).size() == 1);
  CHECK(complete_tree(two, 2).size() == 7);
  const Alphabet f2 = Alphabet::free_group(2);
  const Symbol a = 0;
  CHECK(complete_tree(f2, 2, true, f2.inverse(a)).size() == 13);

  try {
    complete_tree(two, 2, false, Symbol{0});
    FAIL("expected InvalidAlphabet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidAlphabet);
  }
}

TEST_CASE("complete tree counts match brute force") {
  for (std::size_t r = 1; r <= 3; ++r) {
    const Alphabet alphabet = Alphabet::free_group(r);
    for (std::size_t n = 0; n <= 5; ++n) {
      std::set<Word> expect_full;
      std::set<Word> expect_ball;
      for (const Word& w : brute_words(2 * r, n)) {
        expect_full.insert(w);
        if (brute_reduced(w) && (w.empty() || w.back() != 1U)) expect_ball.insert(w);
      }
      const RightRootedTree full = complete_tree(alphabet, n);
      const RightRootedTree ball = complete_tree(alphabet, n, true, Symbol{1});
      auto full_words = full.words();
      auto ball_words = ball.words();
      CHECK(std::set<Word>(full_words.begin(), full_words.end()) == expect_full);
      CHECK(std::set<Word>(ball_words.begin(), ball_words.end()) == expect_ball);

      std::size_t geometric = 0;
      for (std::size_t k = 0; k <= n; ++k) geometric += static_cast<std::size_t>(std::pow(2 * r - 1, k));
      CHECK(ball.size() == geometric);
    }
  }
}

TEST_CASE("is_right_rooted examples") {
  CHECK(is_right_rooted(std::set<Word>{Word{}}));
  CHECK(is_right_rooted(std::set<Word>{Word{}, Word{0}, Word{1, 0}}));
  CHECK_FALSE(is_right_rooted(std::set<Word>{Word{}, Word{1, 0}}));
  CHECK_FALSE(is_right_rooted(std::set<Word>{Word{0}}));

  const std::vector<Word> bad{Word{}, Word{1, 0}};
  try {
    RightRootedTree::from_words(Alphabet::plain(2), bad);
    FAIL("expected InvalidTree");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidTree);
  }
}

TEST_CASE("tree lookup follows parent links") {
  const std::vector<Word> words{Word{}, Word{0}, Word{1}, Word{1, 0}, Word{0, 1, 0}};
  const RightRootedTree t = RightRootedTree::from_words(Alphabet::plain(2), words);
  CHECK(t.size() == 5);
  CHECK(t.height() == 3);
  for (const Word& w : words) {
    auto i = t.find(w);
    REQUIRE(i.has_value());
    CHECK(t.word(*i) == w);
    CHECK(t.length(*i) == w.size());
    if (!w.empty()) {
      CHECK(t.word(t.parent(*i)) == Word(w.begin() + 1, w.end()));
      CHECK(t.head(*i) == w[0]);
    }
  }
  CHECK_FALSE(t.contains(Word{1, 1}));
}

TEST_CASE("random tree examples") {
  const RightRootedTree t0 = random_tree(Alphabet::plain(3), 0, 1, 7);
  CHECK(t0.size() == 1);

  const RightRootedTree t1 = random_tree(Alphabet::plain(2), 3, 5, 1);
  CHECK(t1.size() == 5);
  CHECK(t1.height() <= 3);
  auto w1 = t1.words();
  CHECK(is_right_rooted(w1));

  const Alphabet f2 = Alphabet::free_group(2);
  const RightRootedTree t2 = random_tree(f2, 4, 20, 3, true);
  CHECK(t2.size() == 20);
  auto w2 = t2.words();
  CHECK(is_right_rooted(w2));
  for (const Word& w : w2) CHECK(is_reduced(f2, w));

  auto again = random_tree(f2, 4, 20, 3, true).words();
  CHECK(again == w2);
}

TEST_CASE("random trees stay right-rooted under leaf deletion") {
  const Alphabet f2 = Alphabet::free_group(2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RightRootedTree t = random_tree(f2, 6, 1 + seed % 40, seed, seed % 2 == 0);
    auto words = t.words();
    CHECK(words.size() == t.size());
    CHECK(is_right_rooted(words));
    CHECK(t.height() <= 6);
    // Drop every word of maximal length.
    std::set<Word> trimmed;
    for (const Word& w : words) {
      if (w.size() < t.height() || t.height() == 0) trimmed.insert(w);
    }
    CHECK(is_right_rooted(trimmed));
  }
}
