#include <cmath>

#include "ergolab/averaging.hpp"
#include "ergolab/error.hpp"

namespace ergolab {

namespace {

double circle_value(const Observable& f, double theta) {
  if (const auto* c = std::get_if<Observable::Constant>(&f.kind())) return c->value;
  if (const auto* c = std::get_if<Observable::BaseLift>(&f.kind())) return c->fn(theta);
  throw Error(ErrorKind::kUnsupportedObservable, f.id() + " is not a function on the circle");
}

void check_chain(const GroupAction& action, const MarkovChain& chain) {
  if (chain.support_size() != action.alphabet().size() || chain.initial_tail() != 0.0) {
    throw Error(ErrorKind::kInvalidAlphabet, "chain and action use different generators");
  }
}

// P(a u) / P(u) for a non-empty reduced u with first letter u0.
double extend_factor(const MarkovChain& chain, Symbol a, Symbol u0) {
  return chain.initial(a) * chain.transition(a, u0) / chain.initial(u0);
}

struct ForwardTreeWalk {
  const GroupAction& action;
  const MarkovChain& chain;
  const Observable& f;
  const RightRootedTree& tree;
  double mass = 0.0;
  double sum = 0.0;
  double comp_mass = 0.0;
  double comp_sum = 0.0;

  static void add(double& s, double& c, double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }

  void visit(RightRootedTree::Index node, double theta, double p) {
    add(mass, comp_mass, p);
    add(sum, comp_sum, p * circle_value(f, theta));
    const bool root = node == RightRootedTree::kRoot;
    for (auto c : tree.children(node)) {
      const Symbol a = tree.head(c);
      const double q = root ? chain.initial(a) : p * extend_factor(chain, a, tree.head(node));
      if (!(q > 0.0)) continue;  // non-reduced or forbidden
      visit(c, action.act(a, theta), q);
    }
  }
};

}  // namespace

ForwardEvaluation forward_group_average(const GroupAction& action, const MarkovChain& chain,
                                        const Observable& f, const RightRootedTree& tree, double x) {
  check_chain(action, chain);
  if (!(tree.alphabet() == action.alphabet())) {
    throw Error(ErrorKind::kInvalidTree, "tree alphabet does not match the action");
  }
  ForwardTreeWalk walk{action, chain, f, tree};
  walk.visit(RightRootedTree::kRoot, x, 1.0);
  ForwardEvaluation out{walk.mass, walk.sum};
  if (!(out.mass > 0.0)) throw Error(ErrorKind::kEmptyTreeAtPoint, "tree has zero mass");
  return out;
}

LevelSums forward_sphere_sums(const GroupAction& action, const MarkovChain& chain,
                              const Observable& f, std::size_t n, double x) {
  check_chain(action, chain);
  LevelSums out;
  out.weight.assign(n + 1, 0.0);
  out.weighted_sum.assign(n + 1, 0.0);
  out.tail.assign(n + 1, 0.0);
  out.weight[0] = 1.0;
  out.weighted_sum[0] = circle_value(f, x);
  const std::size_t k = action.alphabet().size();

  auto visit = [&](auto&& self, Symbol u0, double theta, double p, std::size_t len) -> void {
    out.weight[len] += p;
    out.weighted_sum[len] += p * circle_value(f, theta);
    if (len == n) return;
    for (Symbol a = 0; a < k; ++a) {
      const double q = p * extend_factor(chain, a, u0);
      if (q > 0.0) self(self, a, action.act(a, theta), q, len + 1);
    }
  };
  if (n > 0) {
    for (Symbol a = 0; a < k; ++a) {
      const double p = chain.initial(a);
      if (p > 0.0) visit(visit, a, action.act(a, x), p, 1);
    }
  }
  return out;
}

double bufetov_ball_average(const GroupAction& action, const MarkovChain& chain,
                            const Observable& f, std::size_t n, double x) {
  LevelSums s = forward_sphere_sums(action, chain, f, n, x);
  double total = 0.0;
  for (double v : s.weighted_sum) total += v;
  return total / static_cast<double>(n + 1);
}

}  // namespace ergolab
