#include "ergolab/averaging.hpp"

#include <algorithm>
#include <cmath>

#include "ergolab/error.hpp"
#include "ergolab/random.hpp"

namespace ergolab {

namespace {

// Kahan-Babuska compensated sum.
class Accumulator {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class LevelWalker {
 public:
  LevelWalker(const System& system, const Observable* f, std::size_t n, const LevelOptions& options)
      : system_(system),
        f_(f),
        n_(n),
        exact_(options.budget <= 0.0),
        rng_(options.seed),
        weight_(n + 1),
        sum_(n + 1),
        lost_(n + 1) {}

  void visit(const Point& y, std::size_t level, double weight, double budget) {
    record(y, level, weight);
    if (level == n_) return;
    const auto branch_count = static_cast<double>(system_.alphabet().size());
    if (exact_ || budget >= branch_count) {
      Preimages pre = system_.preimages(y);
      if (pre.tail > 0.0) lost_[level + 1].add(weight * pre.tail);
      for (const auto& b : pre.branches) {
        visit(b.point, level + 1, weight * b.weight, budget * b.weight);
      }
      return;
    }
    const auto walks = std::max<long long>(1, std::llround(budget));
    const double share = weight / static_cast<double>(walks);
    for (long long r = 0; r < walks; ++r) walk(y, level, share);
  }

  LevelSums finish() const {
    LevelSums out;
    out.weight.resize(n_ + 1);
    out.weighted_sum.resize(n_ + 1);
    out.tail.resize(n_ + 1);
    double tail = 0.0;
    for (std::size_t k = 0; k <= n_; ++k) {
      tail += lost_[k].value();
      out.weight[k] = weight_[k].value();
      out.weighted_sum[k] = sum_[k].value();
      out.tail[k] = tail;
    }
    return out;
  }

 private:
  void record(const Point& y, std::size_t level, double weight) {
    weight_[level].add(weight);
    if (f_ != nullptr) sum_[level].add(weight * system_.evaluate(*f_, y));
  }

  // Importance-weighted backward path: each step draws a branch with
  // probability weight / (1 - tail) and keeps the dropped mass as tail.
  void walk(Point y, std::size_t level, double weight) {
    for (std::size_t k = level; k < n_; ++k) {
      SampledBranch s = system_.sample_preimage(y, uniform01(rng_));
      lost_[k + 1].add(weight * s.tail);
      weight *= 1.0 - s.tail;
      y = std::move(s.branch.point);
      record(y, k + 1, weight);
    }
  }

  const System& system_;
  const Observable* f_;
  std::size_t n_;
  bool exact_;
  Rng rng_;
  std::vector<Accumulator> weight_;
  std::vector<Accumulator> sum_;
  std::vector<Accumulator> lost_;
};

struct TreeWalk {
  const System& system;
  const Observable* f;
  const RightRootedTree& tree;
  Accumulator weight;
  Accumulator sum;
  Accumulator tail;

  void visit(RightRootedTree::Index node, const Point& y, double w) {
    weight.add(w);
    if (f != nullptr) sum.add(w * system.evaluate(*f, y));
    auto children = tree.children(node);
    if (children.empty()) return;
    const double t = system.branch_tail(y);
    if (t > 0.0) tail.add(w * t);
    for (auto c : children) {
      // Zero-weight words are skipped along with everything above them.
      if (auto b = system.branch(y, tree.head(c))) visit(c, b->point, w * b->weight);
    }
  }
};

TreeEvaluation evaluate_tree(const System& system, const Observable* f, const RightRootedTree& tree,
                             const Point& x) {
  if (!(tree.alphabet() == system.alphabet())) {
    throw Error(ErrorKind::kInvalidTree, "tree alphabet does not match " + system.id());
  }
  TreeWalk walk{system, f, tree, {}, {}, {}};
  walk.visit(RightRootedTree::kRoot, x, 1.0);
  TreeEvaluation out{walk.weight.value(), walk.sum.value(), walk.tail.value()};
  if (!(out.total_weight > 0.0)) {
    throw Error(ErrorKind::kEmptyTreeAtPoint, "tree has no realizable word at the point");
  }
  return out;
}

void fill_target(ReportRow& row, const std::optional<double>& target) {
  if (!target) return;
  row.target = *target;
  row.abs_error = std::abs(row.average - *target);
}

}  // namespace

LevelSums level_sums(const System& system, const Observable* f, std::size_t n, const Point& x,
                     const LevelOptions& options) {
  LevelWalker walker(system, f, n, options);
  walker.visit(x, 0, 1.0, options.budget);
  return walker.finish();
}

double tree_weight(const System& system, const RightRootedTree& tree, const Point& x) {
  return evaluate_tree(system, nullptr, tree, x).total_weight;
}

TreeEvaluation weighted_average(const System& system, const Observable& f,
                                const RightRootedTree& tree, const Point& x) {
  return evaluate_tree(system, &f, tree, x);
}

double transfer_iterate(const System& system, const Observable& f, std::size_t n, const Point& x,
                        const LevelOptions& options) {
  return level_sums(system, &f, n, x, options).weighted_sum[n];
}

AveragingReport cesaro_backward(const System& system, const Observable& f, std::size_t n_max,
                                const Point& x, const LevelOptions& options) {
  AveragingReport report;
  report.system_id = system.id();
  report.observable_id = f.id();
  if (const auto* s = std::get_if<SymbolicPoint>(&x)) {
    report.point_seed = s->seed;
    report.point_prefix = s->prefix;
  } else if (const auto* p = std::get_if<ProductPoint>(&x)) {
    report.point_seed = p->fiber.seed;
    report.point_prefix = p->fiber.prefix;
  }
  const std::optional<double> target = system.invariant_target(f, x);
  const LevelSums levels = level_sums(system, &f, n_max, x, options);

  Accumulator weight;
  Accumulator sum;
  for (std::size_t n = 0; n <= n_max; ++n) {
    weight.add(levels.weight[n]);
    sum.add(levels.weighted_sum[n]);
    ReportRow row;
    row.key = std::to_string(n);
    row.n = n;
    row.total_weight = weight.value();
    row.average = sum.value() / weight.value();
    row.tail = levels.tail[n];
    fill_target(row, target);
    report.truncation_bound = std::max(report.truncation_bound, row.tail);
    report.rows.push_back(std::move(row));
  }
  return report;
}

AveragingReport tree_sweep_backward(const System& system, const Observable& f,
                                    const std::vector<NamedTree>& trees, const Point& x) {
  AveragingReport report;
  report.system_id = system.id();
  report.observable_id = f.id();
  if (const auto* s = std::get_if<SymbolicPoint>(&x)) {
    report.point_seed = s->seed;
    report.point_prefix = s->prefix;
  }
  const std::optional<double> target = system.invariant_target(f, x);
  for (const auto& named : trees) {
    TreeEvaluation e = weighted_average(system, f, named.tree, x);
    ReportRow row;
    row.key = named.id;
    row.n = named.tree.height();
    row.total_weight = e.total_weight;
    row.average = e.average();
    row.tail = e.truncation_tail;
    fill_target(row, target);
    report.truncation_bound = std::max(report.truncation_bound, row.tail);
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.total_weight < b.total_weight; });
  return report;
}

// --- Boundary forward averages ---------------------------------------------------

namespace {

struct BoundaryWalk {
  const BoundarySystem& boundary;
  const Observable& f;
  const RightRootedTree& tree;
  std::vector<Accumulator> weight;
  std::vector<Accumulator> sum;

  void visit(RightRootedTree::Index node, const SymbolicPoint& y, double w, std::size_t depth) {
    weight[depth].add(w);
    sum[depth].add(w * boundary.evaluate(f, y));
    const Alphabet& alphabet = boundary.alphabet();
    for (auto c : tree.children(node)) {
      const Symbol a = tree.head(c);
      // The word a.u stays reduced only if a is not the inverse of u's first letter.
      if (depth > 0 && a == alphabet.inverse(tree.head(node))) continue;
      const double step = boundary.act_weight(a, y);
      if (!(step > 0.0)) continue;
      const Symbol one[1] = {a};
      visit(c, boundary.act(one, y), w * step, depth + 1);
    }
  }
};

}  // namespace

LevelSums boundary_forward_levels(const BoundarySystem& boundary, const Observable& f,
                                  const RightRootedTree& tree, const SymbolicPoint& x) {
  if (!(tree.alphabet() == boundary.alphabet())) {
    throw Error(ErrorKind::kInvalidTree, "tree alphabet does not match " + boundary.id());
  }
  const std::size_t h = tree.height();
  BoundaryWalk walk{boundary, f, tree, std::vector<Accumulator>(h + 1), std::vector<Accumulator>(h + 1)};
  walk.visit(RightRootedTree::kRoot, x, 1.0, 0);
  LevelSums out;
  for (std::size_t k = 0; k <= h; ++k) {
    out.weight.push_back(walk.weight[k].value());
    out.weighted_sum.push_back(walk.sum[k].value());
    out.tail.push_back(0.0);
  }
  return out;
}

TreeEvaluation boundary_forward_average(const BoundarySystem& boundary, const Observable& f,
                                        const RightRootedTree& tree, const SymbolicPoint& x) {
  LevelSums levels = boundary_forward_levels(boundary, f, tree, x);
  Accumulator weight;
  Accumulator sum;
  for (std::size_t k = 0; k < levels.weight.size(); ++k) {
    weight.add(levels.weight[k]);
    sum.add(levels.weighted_sum[k]);
  }
  TreeEvaluation out{weight.value(), sum.value(), 0.0};
  if (!(out.total_weight > 0.0)) {
    throw Error(ErrorKind::kEmptyTreeAtPoint, "tree has no realizable word at the point");
  }
  return out;
}

}  // namespace ergolab
