#pragma once

// Alphabets, finite words and right-rooted (suffix-closed) word trees.
//
// Words are stored root-outward: symbols[0] is the symbol prepended last, so
// the word w acts on a point x as w.x = w[0] . (w[1] . ( ... w[k-1] . x)).
// Dropping symbols[0] yields the parent word; a set of words is right-rooted
// when it contains the empty word and is closed under that operation.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace ergolab {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

class Alphabet {
 public:
  // Symbols 0..size-1 with no inverse structure.
  static Alphabet plain(std::size_t size);
  // Standard symmetric generators of the free group of the given rank:
  // symbol 2i is b_i and 2i+1 is b_i^-1.
  static Alphabet free_group(std::size_t rank);

  std::size_t size() const { return size_; }
  bool has_involution() const { return involution_; }
  bool contains(Symbol s) const { return s < size_; }

  // Throws InvalidAlphabet on alphabets without an involution.
  Symbol inverse(Symbol s) const;

  bool operator==(const Alphabet&) const = default;

 private:
  Alphabet(std::size_t size, bool involution) : size_(size), involution_(involution) {}

  std::size_t size_;
  bool involution_;
};

// No position j with w[j+1] == inverse(w[j]). Plain alphabets: always true.
bool is_reduced(const Alphabet& alphabet, std::span<const Symbol> word);

// Free reduction of an arbitrary word over an involution alphabet.
Word free_reduce(const Alphabet& alphabet, std::span<const Symbol> word);

class RightRootedTree {
 public:
  using Index = std::uint32_t;
  static constexpr Index kRoot = 0;
  static constexpr Index kNone = std::numeric_limits<Index>::max();

  // Throws InvalidTree if the set is not right-rooted or uses foreign symbols.
  static RightRootedTree from_words(const Alphabet& alphabet, std::span<const Word> words);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t height() const { return height_; }

  Index parent(Index i) const { return nodes_[i].parent; }
  Symbol head(Index i) const { return nodes_[i].head; }
  std::size_t length(Index i) const { return nodes_[i].length; }
  std::span<const Index> children(Index i) const;
  Index child(Index i, Symbol s) const;

  Word word(Index i) const;
  std::vector<Word> words() const;
  std::optional<Index> find(std::span<const Symbol> word) const;
  bool contains(std::span<const Symbol> word) const { return find(word).has_value(); }

  // Nodes are numbered breadth-first, children in increasing symbol order,
  // so node order is (length, reversed-word lexicographic).
  bool is_leaf(Index i) const { return children(i).empty(); }

 private:
  friend class TreeBuilder;

  struct Node {
    Index parent;
    Symbol head;
    std::uint32_t length;
  };

  explicit RightRootedTree(Alphabet alphabet) : alphabet_(alphabet) {}

  Alphabet alphabet_;
  std::vector<Node> nodes_;
  std::vector<Index> child_offsets_;
  std::vector<Index> child_list_;
  std::size_t height_ = 0;
};

// Incremental construction by prepending symbols to existing words; the result
// is suffix-closed by construction.
class TreeBuilder {
 public:
  using Index = RightRootedTree::Index;

  explicit TreeBuilder(const Alphabet& alphabet);

  // Index of s^word(parent), created if absent.
  Index extend(Index parent, Symbol s);
  Index find_child(Index parent, Symbol s) const;

  std::size_t size() const { return nodes_.size(); }
  std::size_t length(Index i) const { return nodes_[i].length; }
  Symbol head(Index i) const { return nodes_[i].head; }
  bool is_root(Index i) const { return i == RightRootedTree::kRoot; }

  RightRootedTree build() const;

 private:
  struct Node {
    Index parent;
    Symbol head;
    std::uint32_t length;
    std::vector<std::pair<Symbol, Index>> children;
  };

  Alphabet alphabet_;
  std::vector<Node> nodes_;
};

bool is_right_rooted(std::span<const Word> words);
bool is_right_rooted(const std::set<Word>& words);

// All words of length <= n. With `reduced`, only reduced words; with
// `forbid_root_adjacent`, words whose last symbol (the one adjacent to the
// root) equals it are excluded, which yields the ball B_n^a for
// forbid_root_adjacent = inverse(a).
RightRootedTree complete_tree(const Alphabet& alphabet, std::size_t n, bool reduced = false,
                              std::optional<Symbol> forbid_root_adjacent = std::nullopt);

// Seeded random growth: repeatedly prepend a random admissible symbol to a
// random extendable word until target_word_count words exist (or no word can
// be extended within max_height).
RightRootedTree random_tree(const Alphabet& alphabet, std::size_t max_height,
                            std::size_t target_word_count, std::uint64_t seed,
                            bool reduced = false);

}  // namespace ergolab
