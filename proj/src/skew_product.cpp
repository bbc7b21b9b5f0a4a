#include <string>

#include "ergolab/error.hpp"
#include "ergolab/random.hpp"
#include "ergolab/systems.hpp"

namespace ergolab {

namespace {

const ProductPoint& product(const Point& p) {
  if (const auto* q = std::get_if<ProductPoint>(&p)) return *q;
  throw Error(ErrorKind::kDomainError, "skew product expects a product point");
}

}  // namespace

SkewProductSystem::SkewProductSystem(GroupActionPtr action,
                                     std::shared_ptr<const BoundarySystem> boundary)
    : action_(std::move(action)), boundary_(std::move(boundary)) {
  if (!action_ || !boundary_) throw Error(ErrorKind::kDomainError, "null action or boundary");
  if (action_->alphabet().size() != boundary_->alphabet().size()) {
    throw Error(ErrorKind::kInvalidAlphabet, "action and boundary use different generators");
  }
  id_ = "skew:" + action_->id();
}

Point SkewProductSystem::apply(const Point& x) const {
  const ProductPoint& p = product(x);
  if (p.fiber.prefix.empty()) throw Error(ErrorKind::kInsufficientDepth, "fiber prefix is empty");
  const Symbol y0 = p.fiber.prefix[0];
  ProductPoint out;
  out.base = action_->act(alphabet().inverse(y0), p.base);
  out.fiber = std::get<SymbolicPoint>(boundary_->apply(p.fiber));
  return out;
}

std::optional<PreimageBranch> SkewProductSystem::branch(const Point& y, Symbol index) const {
  const ProductPoint& p = product(y);
  auto b = boundary_->branch(p.fiber, index);
  if (!b) return std::nullopt;
  ProductPoint q{action_->act(index, p.base), std::get<SymbolicPoint>(std::move(b->point))};
  return PreimageBranch{index, std::move(q), b->weight};
}

double SkewProductSystem::branch_tail(const Point& y) const {
  return boundary_->branch_tail(product(y).fiber);
}

Point SkewProductSystem::sample_point(std::uint64_t seed, std::size_t depth) const {
  Rng rng(derive_seed(seed, 0));
  ProductPoint p;
  p.base = uniform01(rng);
  p.fiber = std::get<SymbolicPoint>(boundary_->sample_point(derive_seed(seed, 1), depth));
  return p;
}

double SkewProductSystem::evaluate(const Observable& f, const Point& y) const {
  const ProductPoint& p = product(y);
  if (const auto* c = std::get_if<Observable::Constant>(&f.kind())) return c->value;
  if (const auto* c = std::get_if<Observable::BaseLift>(&f.kind())) return c->fn(p.base);
  if (std::holds_alternative<Observable::Cylinder>(f.kind())) return boundary_->evaluate(f, p.fiber);
  throw Error(ErrorKind::kUnsupportedObservable, f.id() + " cannot be evaluated on " + id_);
}

std::optional<double> SkewProductSystem::invariant_target(const Observable& f, const Point& x) const {
  const ProductPoint& p = product(x);
  if (const auto* c = std::get_if<Observable::Constant>(&f.kind())) return c->value;
  // Rotations by independent irrationals act ergodically on the circle.
  if (const auto* c = std::get_if<Observable::BaseLift>(&f.kind())) return c->mean;
  if (std::holds_alternative<Observable::Cylinder>(f.kind())) {
    return boundary_->invariant_target(f, p.fiber);
  }
  return std::nullopt;
}

std::shared_ptr<const SkewProductSystem> skew_product_system(
    GroupActionPtr action, std::shared_ptr<const BoundarySystem> boundary) {
  return std::make_shared<SkewProductSystem>(std::move(action), std::move(boundary));
}

}  // namespace ergolab
