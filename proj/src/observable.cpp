#include <cmath>
#include <string>

#include "ergolab/error.hpp"
#include "ergolab/systems.hpp"

namespace ergolab {

Observable Observable::constant(double value) {
  return Observable("const:" + std::to_string(value), Constant{value});
}

Observable Observable::cylinder(std::size_t alphabet_size, std::size_t depth,
                                std::vector<double> values, std::string id) {
  if (alphabet_size == 0) throw Error(ErrorKind::kInvalidAlphabet, "empty alphabet");
  if (depth == 0) throw Error(ErrorKind::kUnsupportedObservable, "cylinder depth must be positive");
  double count = std::pow(static_cast<double>(alphabet_size), static_cast<double>(depth));
  if (count > static_cast<double>(1 << 22)) {
    throw Error(ErrorKind::kUnsupportedObservable, "cylinder table too large");
  }
  if (values.size() != static_cast<std::size_t>(count)) {
    throw Error(ErrorKind::kUnsupportedObservable,
                "cylinder table needs " + std::to_string(static_cast<std::size_t>(count)) +
                    " values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kUnsupportedObservable, "non-finite table entry");
  }
  if (id.empty()) id = "cylinder:" + std::to_string(depth);
  return Observable(std::move(id), Cylinder{depth, alphabet_size, std::move(values)});
}

Observable Observable::indicator(std::size_t alphabet_size, Symbol s) {
  if (s >= alphabet_size) throw Error(ErrorKind::kInvalidAlphabet, "indicator symbol outside alphabet");
  std::vector<double> values(alphabet_size, 0.0);
  values[s] = 1.0;
  return cylinder(alphabet_size, 1, std::move(values), "indicator:" + std::to_string(s));
}

Observable Observable::continuous(std::string id, std::function<double(double)> fn,
                                  std::optional<double> gauss_mean, double bound) {
  return Observable(std::move(id), Continuous{std::move(fn), gauss_mean, bound});
}

Observable Observable::base_lift(std::string id, std::function<double(double)> fn,
                                 std::optional<double> lebesgue_mean, double bound) {
  return Observable(std::move(id), BaseLift{std::move(fn), lebesgue_mean, bound});
}

std::size_t Observable::depth() const {
  if (const auto* c = std::get_if<Cylinder>(&kind_)) return c->depth;
  return 0;
}

double Observable::sup_norm() const {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Constant>) {
          return std::abs(k.value);
        } else if constexpr (std::is_same_v<K, Cylinder>) {
          double m = 0.0;
          for (double v : k.table) m = std::max(m, std::abs(v));
          return m;
        } else {
          return k.bound;
        }
      },
      kind_);
}

double Observable::cylinder_value(std::span<const Symbol> prefix) const {
  const auto* c = std::get_if<Cylinder>(&kind_);
  if (c == nullptr) throw Error(ErrorKind::kUnsupportedObservable, id_ + " is not a cylinder observable");
  if (prefix.size() < c->depth) {
    throw Error(ErrorKind::kInsufficientDepth, "observable " + id_ + " needs depth " +
                                                   std::to_string(c->depth) + ", point has " +
                                                   std::to_string(prefix.size()));
  }
  std::size_t index = 0;
  for (std::size_t k = 0; k < c->depth; ++k) {
    if (prefix[k] >= c->base) return 0.0;
    index = index * c->base + prefix[k];
  }
  return c->table[index];
}

}  // namespace ergolab
