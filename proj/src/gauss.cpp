#include <algorithm>
#include <cmath>
#include <string>

#include "ergolab/error.hpp"
#include "ergolab/random.hpp"
#include "ergolab/systems.hpp"

namespace ergolab {

GaussSystem::GaussSystem(std::size_t branch_cap)
    : cap_(branch_cap),
      id_("gauss:M=" + std::to_string(branch_cap)),
      alphabet_(Alphabet::plain(branch_cap == 0 ? 1 : branch_cap)) {
  if (branch_cap == 0) throw Error(ErrorKind::kInvalidAlphabet, "Gauss branch cap must be positive");
}

RealPoint GaussSystem::make_point(double x) {
  if (!(x > 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::kDomainError, "Gauss points must lie in (0, 1]");
  }
  double t = x;
  for (int k = 0; k < 64; ++k) {
    const double inv = 1.0 / t;
    t = inv - std::floor(inv);
    if (t == 0.0) {
      throw Error(ErrorKind::kDomainError, "point has a terminating continued fraction");
    }
  }
  return RealPoint{x};
}

double GaussSystem::branch_weight(std::size_t n, double x) {
  const double nx = static_cast<double>(n) + x;
  return (1.0 + x) / (nx * (nx + 1.0));
}

double GaussSystem::value_of(const Point& p) {
  const auto* r = std::get_if<RealPoint>(&p);
  if (r == nullptr) throw Error(ErrorKind::kDomainError, "Gauss map expects a real point");
  if (!(r->value > 0.0 && r->value <= 1.0)) {
    throw Error(ErrorKind::kDomainError, "Gauss points must lie in (0, 1]");
  }
  return r->value;
}

Point GaussSystem::apply(const Point& x) const {
  const double v = value_of(x);
  const double inv = 1.0 / v;
  const double t = inv - std::floor(inv);
  if (t == 0.0) throw Error(ErrorKind::kDomainError, "orbit reached 0");
  return RealPoint{t};
}

std::optional<PreimageBranch> GaussSystem::branch(const Point& y, Symbol index) const {
  const double v = value_of(y);
  if (index >= cap_) return std::nullopt;
  const std::size_t n = index + 1;
  return PreimageBranch{index, RealPoint{1.0 / (static_cast<double>(n) + v)}, branch_weight(n, v)};
}

double GaussSystem::branch_tail(const Point& y) const {
  const double v = value_of(y);
  return (1.0 + v) / (static_cast<double>(cap_) + 1.0 + v);
}

SampledBranch GaussSystem::sample_preimage(const Point& y, double u) const {
  const double v = value_of(y);
  const double tail = branch_tail(y);
  // Inverse CDF of n under the weights, conditioned on n <= cap.
  const double up = u * (1.0 - tail);
  const double raw = std::ceil((1.0 + v) / (1.0 - up) - 1.0 - v);
  std::size_t n = raw < 1.0 ? 1 : static_cast<std::size_t>(std::min(raw, static_cast<double>(cap_)));
  n = std::clamp<std::size_t>(n, 1, cap_);
  PreimageBranch b{static_cast<Symbol>(n - 1), RealPoint{1.0 / (static_cast<double>(n) + v)},
                   branch_weight(n, v)};
  return {std::move(b), tail};
}

Point GaussSystem::sample_point(std::uint64_t seed, std::size_t /*depth*/) const {
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // Density 1/((1+x) ln 2) by inversion.
    const double x = std::exp2(uniform01(rng)) - 1.0;
    if (!(x > 0.0)) continue;
    try {
      return make_point(x);
    } catch (const Error&) {
    }
  }
  throw Error(ErrorKind::kDomainError, "could not sample a Gauss point");
}

double GaussSystem::evaluate(const Observable& f, const Point& y) const {
  if (const auto* c = std::get_if<Observable::Constant>(&f.kind())) return c->value;
  if (const auto* c = std::get_if<Observable::Continuous>(&f.kind())) return c->fn(value_of(y));
  throw Error(ErrorKind::kUnsupportedObservable, f.id() + " cannot be evaluated on " + id_);
}

std::optional<double> GaussSystem::invariant_target(const Observable& f, const Point&) const {
  if (const auto* c = std::get_if<Observable::Constant>(&f.kind())) return c->value;
  if (const auto* c = std::get_if<Observable::Continuous>(&f.kind())) return c->mean;
  return std::nullopt;
}

std::shared_ptr<const GaussSystem> gauss_system(std::size_t branch_cap) {
  return std::make_shared<GaussSystem>(branch_cap);
}

}  // namespace ergolab
