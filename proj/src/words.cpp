#include "ergolab/words.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "ergolab/error.hpp"
#include "ergolab/random.hpp"

namespace ergolab {

Alphabet Alphabet::plain(std::size_t size) {
  if (size == 0) throw Error(ErrorKind::kInvalidAlphabet, "alphabet must be nonempty");
  return Alphabet(size, false);
}

Alphabet Alphabet::free_group(std::size_t rank) {
  if (rank == 0) throw Error(ErrorKind::kInvalidAlphabet, "free group rank must be positive");
  return Alphabet(2 * rank, true);
}

Symbol Alphabet::inverse(Symbol s) const {
  if (!involution_) throw Error(ErrorKind::kInvalidAlphabet, "alphabet has no involution");
  return s ^ 1U;
}

bool is_reduced(const Alphabet& alphabet, std::span<const Symbol> word) {
  if (!alphabet.has_involution()) return true;
  for (std::size_t j = 0; j + 1 < word.size(); ++j) {
    if (word[j + 1] == alphabet.inverse(word[j])) return false;
  }
  return true;
}

Word free_reduce(const Alphabet& alphabet, std::span<const Symbol> word) {
  Word out;
  out.reserve(word.size());
  for (Symbol s : word) {
    if (!out.empty() && out.back() == alphabet.inverse(s)) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  return out;
}

std::span<const RightRootedTree::Index> RightRootedTree::children(Index i) const {
  return std::span<const Index>(child_list_).subspan(child_offsets_[i],
                                                     child_offsets_[i + 1] - child_offsets_[i]);
}

RightRootedTree::Index RightRootedTree::child(Index i, Symbol s) const {
  auto kids = children(i);
  auto it = std::lower_bound(kids.begin(), kids.end(), s,
                             [this](Index k, Symbol sym) { return nodes_[k].head < sym; });
  if (it != kids.end() && nodes_[*it].head == s) return *it;
  return kNone;
}

Word RightRootedTree::word(Index i) const {
  Word w;
  w.reserve(nodes_[i].length);
  for (Index k = i; k != kRoot; k = nodes_[k].parent) w.push_back(nodes_[k].head);
  return w;
}

std::vector<Word> RightRootedTree::words() const {
  std::vector<Word> out;
  out.reserve(nodes_.size());
  for (Index i = 0; i < nodes_.size(); ++i) out.push_back(word(i));
  return out;
}

std::optional<RightRootedTree::Index> RightRootedTree::find(std::span<const Symbol> w) const {
  Index node = kRoot;
  for (std::size_t k = w.size(); k-- > 0;) {
    node = child(node, w[k]);
    if (node == kNone) return std::nullopt;
  }
  return node;
}

RightRootedTree RightRootedTree::from_words(const Alphabet& alphabet, std::span<const Word> words) {
  if (!is_right_rooted(words)) {
    throw Error(ErrorKind::kInvalidTree, "word set is not right-rooted");
  }
  TreeBuilder builder(alphabet);
  std::vector<const Word*> sorted;
  sorted.reserve(words.size());
  for (const Word& w : words) {
    for (Symbol s : w) {
      if (!alphabet.contains(s)) {
        throw Error(ErrorKind::kInvalidTree, "symbol " + std::to_string(s) + " outside alphabet");
      }
    }
    sorted.push_back(&w);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Word* a, const Word* b) { return a->size() < b->size(); });
  for (const Word* w : sorted) {
    TreeBuilder::Index node = RightRootedTree::kRoot;
    for (std::size_t k = w->size(); k-- > 0;) node = builder.extend(node, (*w)[k]);
  }
  return builder.build();
}

TreeBuilder::TreeBuilder(const Alphabet& alphabet) : alphabet_(alphabet) {
  nodes_.push_back(Node{RightRootedTree::kNone, 0, 0, {}});
}

TreeBuilder::Index TreeBuilder::find_child(Index parent, Symbol s) const {
  for (const auto& [sym, idx] : nodes_[parent].children) {
    if (sym == s) return idx;
  }
  return RightRootedTree::kNone;
}

TreeBuilder::Index TreeBuilder::extend(Index parent, Symbol s) {
  if (!alphabet_.contains(s)) {
    throw Error(ErrorKind::kInvalidTree, "symbol " + std::to_string(s) + " outside alphabet");
  }
  if (Index existing = find_child(parent, s); existing != RightRootedTree::kNone) return existing;
  auto idx = static_cast<Index>(nodes_.size());
  nodes_.push_back(Node{parent, s, nodes_[parent].length + 1, {}});
  nodes_[parent].children.emplace_back(s, idx);
  return idx;
}

RightRootedTree TreeBuilder::build() const {
  RightRootedTree tree(alphabet_);
  tree.nodes_.reserve(nodes_.size());
  tree.child_offsets_.reserve(nodes_.size() + 1);
  tree.child_list_.reserve(nodes_.size());

  // Breadth-first renumbering with children in increasing symbol order.
  std::vector<Index> order;
  order.reserve(nodes_.size());
  std::vector<Index> new_index(nodes_.size(), RightRootedTree::kNone);
  order.push_back(RightRootedTree::kRoot);
  new_index[RightRootedTree::kRoot] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    auto kids = nodes_[order[head]].children;
    std::sort(kids.begin(), kids.end());
    for (const auto& kid : kids) {
      new_index[kid.second] = static_cast<Index>(order.size());
      order.push_back(kid.second);
    }
  }

  Index next_child = 1;
  for (Index old : order) {
    const Node& n = nodes_[old];
    Index parent = old == RightRootedTree::kRoot ? RightRootedTree::kNone : new_index[n.parent];
    tree.nodes_.push_back({parent, n.head, n.length});
    tree.height_ = std::max<std::size_t>(tree.height_, n.length);
    tree.child_offsets_.push_back(static_cast<Index>(tree.child_list_.size()));
    for (std::size_t k = 0; k < n.children.size(); ++k) tree.child_list_.push_back(next_child++);
  }
  tree.child_offsets_.push_back(static_cast<Index>(tree.child_list_.size()));
  return tree;
}

namespace {

template <typename Range>
bool suffix_closed(const Range& words, const std::set<Word>& lookup) {
  if (!lookup.contains(Word{})) return false;
  for (const Word& w : words) {
    if (w.empty()) continue;
    // Closure under one-step suffixes implies closure under all suffixes.
    if (!lookup.contains(Word(w.begin() + 1, w.end()))) return false;
  }
  return true;
}

}  // namespace

bool is_right_rooted(std::span<const Word> words) {
  std::set<Word> lookup(words.begin(), words.end());
  return suffix_closed(words, lookup);
}

bool is_right_rooted(const std::set<Word>& words) { return suffix_closed(words, words); }

RightRootedTree complete_tree(const Alphabet& alphabet, std::size_t n, bool reduced,
                              std::optional<Symbol> forbid_root_adjacent) {
  if ((reduced || forbid_root_adjacent) && !alphabet.has_involution()) {
    throw Error(ErrorKind::kInvalidAlphabet,
                "reduced words and forbidden root symbols need a free-group alphabet");
  }
  if (forbid_root_adjacent && !alphabet.contains(*forbid_root_adjacent)) {
    throw Error(ErrorKind::kInvalidAlphabet, "forbidden symbol outside alphabet");
  }
  TreeBuilder builder(alphabet);
  std::vector<TreeBuilder::Index> frontier{RightRootedTree::kRoot};
  for (std::size_t level = 0; level < n; ++level) {
    std::vector<TreeBuilder::Index> next;
    for (auto node : frontier) {
      for (Symbol s = 0; s < alphabet.size(); ++s) {
        if (builder.is_root(node)) {
          if (forbid_root_adjacent && s == *forbid_root_adjacent) continue;
        } else if (reduced && builder.head(node) == alphabet.inverse(s)) {
          continue;
        }
        next.push_back(builder.extend(node, s));
      }
    }
    frontier = std::move(next);
  }
  return builder.build();
}

RightRootedTree random_tree(const Alphabet& alphabet, std::size_t max_height,
                            std::size_t target_word_count, std::uint64_t seed, bool reduced) {
  if (reduced && !alphabet.has_involution()) {
    throw Error(ErrorKind::kInvalidAlphabet, "reduced trees need a free-group alphabet");
  }
  Rng rng(seed);
  TreeBuilder builder(alphabet);
  std::vector<TreeBuilder::Index> extendable;
  if (max_height > 0) extendable.push_back(RightRootedTree::kRoot);

  std::vector<Symbol> options;
  while (builder.size() < target_word_count && !extendable.empty()) {
    std::size_t pick = uniform_index(rng, extendable.size());
    TreeBuilder::Index node = extendable[pick];
    options.clear();
    for (Symbol s = 0; s < alphabet.size(); ++s) {
      if (builder.find_child(node, s) != RightRootedTree::kNone) continue;
      if (reduced && !builder.is_root(node) && builder.head(node) == alphabet.inverse(s)) continue;
      options.push_back(s);
    }
    if (options.empty()) {
      extendable[pick] = extendable.back();
      extendable.pop_back();
      continue;
    }
    auto child = builder.extend(node, options[uniform_index(rng, options.size())]);
    if (builder.length(child) < max_height) extendable.push_back(child);
  }
  return builder.build();
}

}  // namespace ergolab
