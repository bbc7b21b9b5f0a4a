#include "ergolab/catalog.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ergolab/error.hpp"

namespace ergolab {

namespace {

[[noreturn]] void unknown(const std::string& what, const std::string& id) {
  throw Error(ErrorKind::kConfigError, "unknown " + what + " '" + id + "'");
}

std::size_t parse_size(const std::string& text, const std::string& context) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorKind::kConfigError, "bad integer '" + text + "' in " + context);
  }
  return v;
}

double parse_double(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kConfigError, "bad number '" + text + "' in " + context);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

std::size_t symbol_count(const System& system) { return system.alphabet().size(); }

}  // namespace

MarkovChain skewed_boundary_chain() {
  // Row a has a zero in column a^-1 (symbols 2i and 2i+1 are inverse).
  const std::vector<std::vector<double>> rows{
      {0.5, 0.0, 0.3, 0.2},
      {0.0, 0.4, 0.4, 0.2},
      {0.3, 0.3, 0.4, 0.0},
      {0.2, 0.5, 0.0, 0.3},
  };
  StochasticMatrix p = StochasticMatrix::finite(rows);
  std::vector<double> pi = stationary_distribution(p);
  return MarkovChain(std::move(p), std::move(pi));
}

std::shared_ptr<const CircleRotationAction> default_rotation_action() {
  return circle_rotation_action(2, {std::numbers::sqrt2 - 1.0, std::sqrt(3.0) - 1.0});
}

std::vector<CatalogEntry> catalog_systems() {
  return {
      {"bernoulli:2", "full shift on 2 symbols, uniform Bernoulli measure"},
      {"bernoulli:3", "full shift on 3 symbols, uniform Bernoulli measure"},
      {"markov:two_state", "Markov shift, P = [[0.9,0.1],[0.4,0.6]], pi = (0.8,0.2)"},
      {"blocks", "reducible Markov shift with two closed 2-state blocks"},
      {"boundary:r=2:uniform", "boundary of F_2, P(a,b) = 1/3 off the inverse"},
      {"boundary:r=2:skewed", "boundary of F_2, non-uniform stationary chain"},
      {"boundary:r=inf:finfty_chain", "boundary of F_infinity, geometric rows, truncated generators"},
      {"gauss:M=50", "Gauss map with the Gauss measure, 50 explicit branches"},
      {"skew:rotation:r=2", "skew product of rotations by sqrt2-1, sqrt3-1 over the F_2 boundary"},
  };
}

std::vector<CatalogEntry> catalog_chains() {
  return {
      {"two_state", "P = [[0.9,0.1],[0.4,0.6]]"},
      {"blocks", "block-diagonal 4-state chain"},
      {"bernoulli:<k>", "uniform i.i.d. chain on k symbols"},
      {"uniform:r=<r>", "uniform non-backtracking chain on F_r generators"},
      {"skewed:r=2", "non-uniform non-backtracking chain on F_2 generators"},
      {"finfty_chain", "geometric non-backtracking chain on F_infinity generators"},
  };
}

std::vector<CatalogEntry> catalog_observables() {
  return {
      {"indicator:<s>", "1 on points with first symbol s"},
      {"cylinder:<v0>,<v1>,...", "function of the first d symbols, k^d values"},
      {"const:<c>", "constant function"},
      {"x", "identity on (0,1] (Gauss)"},
      {"x2", "square on (0,1] (Gauss)"},
      {"cos2pi", "cos(2 pi theta) of the base point (skew product)"},
      {"sin2pi", "sin(2 pi theta) of the base point (skew product)"},
  };
}

SystemPtr make_system(const std::string& id, const Truncation& truncation) {
  if (starts_with(id, "bernoulli:")) return bernoulli_system(parse_size(id.substr(10), id));
  if (id == "markov:two_state") return markov_shift_system(make_chain("two_state"), id);
  if (id == "blocks") return block_chain_system();
  if (id == "boundary:r=2:uniform") return boundary_system(2, uniform_boundary_chain(2), id);
  if (id == "boundary:r=2:skewed") return boundary_system(2, skewed_boundary_chain(), id);
  if (starts_with(id, "boundary:r=") && id.ends_with(":uniform")) {
    const std::size_t r = parse_size(id.substr(11, id.size() - 11 - 8), id);
    return boundary_system(r, uniform_boundary_chain(r), id);
  }
  if (id == "boundary:r=inf:finfty_chain") {
    return boundary_system(std::nullopt, finfty_chain(truncation.finfty_budget), id);
  }
  if (id == "gauss") return gauss_system(truncation.gauss_cap);
  if (starts_with(id, "gauss:M=")) return gauss_system(parse_size(id.substr(8), id));
  if (id == "skew:rotation:r=2") {
    return skew_product_system(default_rotation_action(),
                               boundary_system(2, uniform_boundary_chain(2), "boundary:r=2:uniform"));
  }
  unknown("system", id);
}

MarkovChain make_chain(const std::string& id, const Truncation& truncation) {
  if (id == "two_state") {
    StochasticMatrix p = StochasticMatrix::finite(std::vector<std::vector<double>>{{0.9, 0.1}, {0.4, 0.6}});
    std::vector<double> pi = stationary_distribution(p);
    return MarkovChain(std::move(p), std::move(pi));
  }
  if (id == "blocks") return block_chain();
  if (starts_with(id, "bernoulli:")) return bernoulli_chain(parse_size(id.substr(10), id));
  if (starts_with(id, "uniform:r=")) return uniform_boundary_chain(parse_size(id.substr(10), id));
  if (id == "skewed:r=2") return skewed_boundary_chain();
  if (id == "finfty_chain") return finfty_chain(truncation.finfty_budget);
  unknown("chain", id);
}

Observable make_observable(const std::string& spec, const System& system) {
  if (starts_with(spec, "indicator:")) {
    return Observable::indicator(symbol_count(system),
                                 static_cast<Symbol>(parse_size(spec.substr(10), spec)));
  }
  if (starts_with(spec, "const:")) return Observable::constant(parse_double(spec.substr(6), spec));
  if (starts_with(spec, "cylinder:")) {
    std::vector<double> values;
    for (const auto& v : split(spec.substr(9), ',')) values.push_back(parse_double(v, spec));
    const std::size_t k = symbol_count(system);
    std::size_t depth = 1;
    std::size_t count = k;
    while (count < values.size() && k > 1) {
      count *= k;
      ++depth;
    }
    if (count != values.size()) {
      throw Error(ErrorKind::kConfigError, spec + ": value count is not a power of " + std::to_string(k));
    }
    return Observable::cylinder(k, depth, std::move(values), spec);
  }
  if (spec == "x") {
    return Observable::continuous("x", [](double x) { return x; }, 1.0 / std::numbers::ln2 - 1.0, 1.0);
  }
  if (spec == "x2") {
    return Observable::continuous("x2", [](double x) { return x * x; },
                                  (std::numbers::ln2 - 0.5) / std::numbers::ln2, 1.0);
  }
  if (spec == "cos2pi") {
    return Observable::base_lift(
        "cos2pi", [](double t) { return std::cos(2.0 * std::numbers::pi * t); }, 0.0, 1.0);
  }
  if (spec == "sin2pi") {
    return Observable::base_lift(
        "sin2pi", [](double t) { return std::sin(2.0 * std::numbers::pi * t); }, 0.0, 1.0);
  }
  unknown("observable", spec);
}

TileAssignment make_assignment(const std::string& spec, const System& system) {
  const Alphabet& a = system.alphabet();
  if (spec == "singleton") return TileAssignment::singleton(a);
  if (starts_with(spec, "constant:")) return TileAssignment::constant(a, parse_size(spec.substr(9), spec));
  if (spec == "two_height") return TileAssignment::two_height(a, 0, 4, 1);
  if (starts_with(spec, "two_height:")) {
    auto parts = split(spec.substr(11), ':');
    if (parts.size() != 3) throw Error(ErrorKind::kConfigError, spec + ": expected two_height:s:high:low");
    return TileAssignment::two_height(a, static_cast<Symbol>(parse_size(parts[0], spec)),
                                      parse_size(parts[1], spec), parse_size(parts[2], spec));
  }
  unknown("tile assignment", spec);
}

}  // namespace ergolab
