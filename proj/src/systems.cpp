#include "ergolab/systems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergolab/error.hpp"
#include "ergolab/random.hpp"

namespace ergolab {

const Word& prefix_of(const Point& p) {
  if (const auto* s = std::get_if<SymbolicPoint>(&p)) return s->prefix;
  if (const auto* q = std::get_if<ProductPoint>(&p)) return q->fiber.prefix;
  throw Error(ErrorKind::kDomainError, "point has no symbolic prefix");
}

Preimages System::preimages(const Point& y) const {
  Preimages out;
  out.branches.reserve(alphabet().size());
  for (Symbol s = 0; s < alphabet().size(); ++s) {
    if (auto b = branch(y, s)) out.branches.push_back(std::move(*b));
  }
  out.tail = branch_tail(y);
  return out;
}

SampledBranch System::sample_preimage(const Point& y, double u) const {
  Preimages pre = preimages(y);
  if (pre.branches.empty()) throw Error(ErrorKind::kDomainError, "point has no preimages");
  double total = 0.0;
  for (const auto& b : pre.branches) total += b.weight;
  const double target = u * total;
  double acc = 0.0;
  for (auto& b : pre.branches) {
    acc += b.weight;
    if (target < acc) return {std::move(b), pre.tail};
  }
  return {std::move(pre.branches.back()), pre.tail};
}

// --- Markov shifts -------------------------------------------------------------

MarkovShiftSystem::MarkovShiftSystem(std::string id, MarkovChain chain, Alphabet alphabet)
    : id_(std::move(id)), chain_(std::move(chain)), alphabet_(alphabet) {
  if (alphabet_.size() != chain_.support_size()) {
    throw Error(ErrorKind::kInvalidAlphabet, "alphabet size does not match the chain's states");
  }
  const double residual = chain_.stationarity_residual();
  if (residual > 1e-10) {
    throw Error(ErrorKind::kNotMeasurePreserving,
                "initial distribution is not stationary (residual " + std::to_string(residual) + ")");
  }
  if (chain_.matrix().is_finite() && !is_irreducible(chain_.matrix())) {
    classes_ = closed_classes(chain_.matrix());
    class_of_.assign(chain_.support_size(), classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      for (Symbol s : classes_[c]) class_of_[s] = c;
    }
  }
}

const SymbolicPoint& MarkovShiftSystem::symbolic(const Point& p) const {
  if (const auto* s = std::get_if<SymbolicPoint>(&p)) return *s;
  throw Error(ErrorKind::kDomainError, id_ + " expects a symbolic point");
}

double MarkovShiftSystem::step_weight(Symbol s, Symbol y0) const {
  if (s >= chain_.support_size() || y0 >= chain_.support_size()) return 0.0;
  const double p = chain_.transition(s, y0);
  if (p <= 0.0) return 0.0;
  return chain_.initial(s) * p / chain_.initial(y0);
}

Point MarkovShiftSystem::apply(const Point& x) const {
  const SymbolicPoint& p = symbolic(x);
  if (p.prefix.empty()) throw Error(ErrorKind::kInsufficientDepth, "cannot shift an empty prefix");
  return SymbolicPoint{Word(p.prefix.begin() + 1, p.prefix.end()), p.seed};
}

std::optional<PreimageBranch> MarkovShiftSystem::branch(const Point& y, Symbol index) const {
  const SymbolicPoint& p = symbolic(y);
  if (p.prefix.empty()) {
    throw Error(ErrorKind::kInsufficientDepth, "branch weights need the first symbol of the point");
  }
  const double w = step_weight(index, p.prefix[0]);
  if (w <= 0.0) return std::nullopt;
  SymbolicPoint q;
  q.seed = p.seed;
  q.prefix.reserve(p.prefix.size() + 1);
  q.prefix.push_back(index);
  q.prefix.insert(q.prefix.end(), p.prefix.begin(), p.prefix.end());
  return PreimageBranch{index, std::move(q), w};
}

double MarkovShiftSystem::branch_tail(const Point& y) const {
  if (chain_.initial_tail() == 0.0) return 0.0;
  const SymbolicPoint& p = symbolic(y);
  if (p.prefix.empty()) throw Error(ErrorKind::kInsufficientDepth, "tail needs the first symbol");
  const Symbol y0 = p.prefix[0];
  const auto& rule = chain_.matrix().row_rule();
  // Every state beyond the support shares P(i, y0) = far_entry.
  return chain_.initial_tail() * rule.far_entry(chain_.support_size(), y0) / chain_.initial(y0);
}

Point MarkovShiftSystem::sample_point(std::uint64_t seed, std::size_t depth) const {
  if (depth == 0) return SymbolicPoint{{}, seed};
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, attempt);
    Word w = sample_path(chain_, depth, s);
    bool inside = std::all_of(w.begin(), w.end(), [&](Symbol c) { return c < alphabet_.size(); });
    if (inside) return SymbolicPoint{std::move(w), s};
  }
  throw Error(ErrorKind::kDomainError, "could not sample a prefix inside the support");
}

double MarkovShiftSystem::evaluate(const Observable& f, const Point& y) const {
  if (const auto* c = std::get_if<Observable::Constant>(&f.kind())) return c->value;
  if (std::holds_alternative<Observable::Cylinder>(f.kind())) {
    return f.cylinder_value(symbolic(y).prefix);
  }
  throw Error(ErrorKind::kUnsupportedObservable, f.id() + " cannot be evaluated on " + id_);
}

double MarkovShiftSystem::cylinder_mean(const Observable::Cylinder& f,
                                        std::optional<Symbol> state) const {
  std::vector<Symbol> states;
  if (state && !classes_.empty()) {
    states = classes_.at(class_of_.at(*state));
  } else {
    states.resize(chain_.support_size());
    for (Symbol s = 0; s < states.size(); ++s) states[s] = s;
  }
  double mass = 0.0;
  for (Symbol s : states) mass += chain_.initial(s);

  // Depth-first enumeration of positive-probability words of length depth.
  double total = 0.0;
  Word w(f.depth);
  auto visit = [&](auto&& self, std::size_t k, double prob) -> void {
    if (k == f.depth) {
      std::size_t index = 0;
      for (Symbol s : w) {
        if (s >= f.base) return;
        index = index * f.base + s;
      }
      total += prob * f.table[index];
      return;
    }
    for (Symbol s : states) {
      const double p = k == 0 ? chain_.initial(s) : prob * chain_.transition(w[k - 1], s);
      if (p <= 0.0) continue;
      w[k] = s;
      self(self, k + 1, p);
    }
  };
  visit(visit, 0, 1.0);
  return total / mass;
}

std::optional<double> MarkovShiftSystem::invariant_target(const Observable& f, const Point& x) const {
  if (const auto* c = std::get_if<Observable::Constant>(&f.kind())) return c->value;
  const auto* cyl = std::get_if<Observable::Cylinder>(&f.kind());
  if (cyl == nullptr) return std::nullopt;
  std::optional<Symbol> state;
  if (!classes_.empty()) {
    const SymbolicPoint& p = symbolic(x);
    if (p.prefix.empty()) throw Error(ErrorKind::kInsufficientDepth, "block target needs x_0");
    state = p.prefix[0];
  }
  return cylinder_mean(*cyl, state);
}

// --- Free-group boundary -------------------------------------------------------

namespace {

Alphabet boundary_alphabet(std::optional<std::size_t> rank, const MarkovChain& chain) {
  const std::size_t n = chain.support_size();
  if (n % 2 != 0) throw Error(ErrorKind::kInvalidAlphabet, "boundary chains need an even alphabet");
  if (rank && 2 * *rank != n) {
    throw Error(ErrorKind::kInvalidAlphabet, "chain has " + std::to_string(n) +
                                                 " states, rank " + std::to_string(*rank) +
                                                 " needs " + std::to_string(2 * *rank));
  }
  if (!rank && chain.matrix().is_finite()) {
    throw Error(ErrorKind::kInvalidAlphabet, "countable rank needs a row-rule chain");
  }
  return Alphabet::free_group(n / 2);
}

}  // namespace

BoundarySystem::BoundarySystem(std::string id, std::optional<std::size_t> rank, MarkovChain chain)
    : MarkovShiftSystem(std::move(id), chain, boundary_alphabet(rank, chain)), rank_(rank) {
  for (Symbol a = 0; a < chain.support_size(); ++a) {
    if (chain.transition(a, a ^ 1U) != 0.0) {
      throw Error(ErrorKind::kNotBoundarySupported,
                  "P(a, a^-1) must vanish; violated at symbol " + std::to_string(a));
    }
  }
}

SymbolicPoint BoundarySystem::act(std::span<const Symbol> word, const SymbolicPoint& x) const {
  SymbolicPoint y = x;
  for (std::size_t k = word.size(); k-- > 0;) {
    const Symbol a = word[k];
    if (!alphabet().contains(a)) throw Error(ErrorKind::kInvalidAlphabet, "letter outside alphabet");
    if (y.prefix.empty()) {
      throw Error(ErrorKind::kInsufficientDepth, "group action needs the first symbol of the point");
    }
    if (y.prefix[0] == alphabet().inverse(a)) {
      y.prefix.erase(y.prefix.begin());
    } else {
      y.prefix.insert(y.prefix.begin(), a);
    }
  }
  return y;
}

double BoundarySystem::act_weight(Symbol a, const SymbolicPoint& y) const {
  if (y.prefix.empty()) throw Error(ErrorKind::kInsufficientDepth, "weight needs y_0");
  const Symbol y0 = y.prefix[0];
  if (y0 != alphabet().inverse(a)) return step_weight(a, y0);
  // a . y = s(y): rho(s(y), y) = 1 / rho(y, s(y)).
  if (y.prefix.size() < 2) throw Error(ErrorKind::kInsufficientDepth, "cancelling weight needs y_1");
  return 1.0 / step_weight(y0, y.prefix[1]);
}

// --- Group actions ---------------------------------------------------------------

double GroupAction::act_word(std::span<const Symbol> word, double x) const {
  for (std::size_t k = word.size(); k-- > 0;) x = act(word[k], x);
  return x;
}

CircleRotationAction::CircleRotationAction(std::vector<double> angles)
    : angles_(std::move(angles)), alphabet_(Alphabet::free_group(angles_.empty() ? 1 : angles_.size())) {
  if (angles_.empty()) throw Error(ErrorKind::kInvalidAlphabet, "rotation action needs angles");
  for (double a : angles_) {
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::kDomainError, "rotation angles must lie in (0, 1)");
  }
}

double CircleRotationAction::act(Symbol a, double x) const {
  const double alpha = angles_.at(a / 2);
  double y = (a % 2 == 0) ? x + alpha : x - alpha;
  y -= std::floor(y);
  return y >= 1.0 ? 0.0 : y;
}

std::string CircleRotationAction::id() const { return "rotation:r=" + std::to_string(angles_.size()); }

// --- Catalog -----------------------------------------------------------------------

std::shared_ptr<const MarkovShiftSystem> bernoulli_system(std::size_t symbol_count) {
  if (symbol_count < 2) throw Error(ErrorKind::kInvalidAlphabet, "Bernoulli shift needs >= 2 symbols");
  return std::make_shared<MarkovShiftSystem>("bernoulli:" + std::to_string(symbol_count),
                                             bernoulli_chain(symbol_count),
                                             Alphabet::plain(symbol_count));
}

std::shared_ptr<const MarkovShiftSystem> markov_shift_system(const MarkovChain& chain, std::string id) {
  return std::make_shared<MarkovShiftSystem>(std::move(id), chain,
                                             Alphabet::plain(chain.support_size()));
}

std::shared_ptr<const BoundarySystem> boundary_system(std::optional<std::size_t> rank,
                                                      const MarkovChain& chain, std::string id) {
  if (id.empty()) {
    id = "boundary:r=" + (rank ? std::to_string(*rank) : std::string("inf")) + ":custom";
  }
  return std::make_shared<BoundarySystem>(std::move(id), rank, chain);
}

std::shared_ptr<const CircleRotationAction> circle_rotation_action(std::size_t rank,
                                                                   std::vector<double> angles) {
  if (angles.size() != rank) throw Error(ErrorKind::kInvalidAlphabet, "need one angle per generator");
  return std::make_shared<CircleRotationAction>(std::move(angles));
}

MarkovChain block_chain() {
  const std::vector<std::vector<double>> block_a{{0.3, 0.7}, {0.7, 0.3}};
  const std::vector<std::vector<double>> block_b{{0.4, 0.6}, {0.9, 0.1}};
  std::vector<double> pi_a = stationary_distribution(StochasticMatrix::finite(block_a));
  std::vector<double> pi_b = stationary_distribution(StochasticMatrix::finite(block_b));
  std::vector<std::vector<double>> p(4, std::vector<double>(4, 0.0));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      p[i][j] = block_a[i][j];
      p[i + 2][j + 2] = block_b[i][j];
    }
  }
  std::vector<double> pi{0.5 * pi_a[0], 0.5 * pi_a[1], 0.5 * pi_b[0], 0.5 * pi_b[1]};
  return MarkovChain(StochasticMatrix::finite(p), std::move(pi));
}

std::shared_ptr<const MarkovShiftSystem> block_chain_system() {
  return markov_shift_system(block_chain(), "blocks");
}

}  // namespace ergolab
