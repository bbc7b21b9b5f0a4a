#pragma once

// Countable-to-one measure-preserving systems presented through their
// preimage structure: the forward map T, the right-inverse branches of T at a
// point, and the Radon-Nikodym weight rho(gamma(y), y) of each branch.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/markov.hpp"
#include "ergolab/words.hpp"

namespace ergolab {

// A point of a shift space, known through a finite prefix of fixed depth.
// The seed records how the prefix was sampled; prefixes are never extended.
struct SymbolicPoint {
  Word prefix;
  std::uint64_t seed = 0;
};

// A point of (0, 1].
struct RealPoint {
  double value = 0.0;
};

// A point (x, y) of X x boundary, with X the circle [0, 1).
struct ProductPoint {
  double base = 0.0;
  SymbolicPoint fiber;
};

using Point = std::variant<SymbolicPoint, RealPoint, ProductPoint>;

struct PreimageBranch {
  Symbol index = 0;
  Point point;
  double weight = 0.0;  // rho(point, y) > 0
};

struct Preimages {
  std::vector<PreimageBranch> branches;
  // Weight of the branches not enumerated (0 for finite branching).
  double tail = 0.0;
};

// A branch drawn with probability weight / (1 - tail).
struct SampledBranch {
  PreimageBranch branch;
  double tail = 0.0;
};

class Observable {
 public:
  struct Constant {
    double value;
  };
  // Function of the first `depth` symbols; table indexed by the base-`base`
  // encoding of the prefix (prefix[0] most significant).
  struct Cylinder {
    std::size_t depth;
    std::size_t base;
    std::vector<double> table;
  };
  // Closed-form function on (0, 1]; mean is its Gauss-measure integral.
  struct Continuous {
    std::function<double(double)> fn;
    std::optional<double> mean;
    double bound;
  };
  // Function of the base coordinate of a product point; mean is its
  // Lebesgue integral over the circle.
  struct BaseLift {
    std::function<double(double)> fn;
    std::optional<double> mean;
    double bound;
  };
  using Kind = std::variant<Constant, Cylinder, Continuous, BaseLift>;

  static Observable constant(double value);
  // Values listed for all words of length `depth` in lexicographic order.
  static Observable cylinder(std::size_t alphabet_size, std::size_t depth,
                             std::vector<double> values, std::string id = {});
  // 1 on points whose first symbol is s.
  static Observable indicator(std::size_t alphabet_size, Symbol s);
  static Observable continuous(std::string id, std::function<double(double)> fn,
                               std::optional<double> gauss_mean, double bound);
  static Observable base_lift(std::string id, std::function<double(double)> fn,
                              std::optional<double> lebesgue_mean, double bound);

  const std::string& id() const { return id_; }
  const Kind& kind() const { return kind_; }
  std::size_t depth() const;
  double sup_norm() const;

  // Throws InsufficientDepth if the prefix is shorter than the depth.
  double cylinder_value(std::span<const Symbol> prefix) const;

 private:
  Observable(std::string id, Kind kind) : id_(std::move(id)), kind_(std::move(kind)) {}

  std::string id_;
  Kind kind_;
};

class System {
 public:
  virtual ~System() = default;

  virtual const std::string& id() const = 0;
  // Index set of the right-inverse branches; trees over this alphabet select
  // subsets of backward orbits.
  virtual const Alphabet& alphabet() const = 0;

  virtual Point apply(const Point& x) const = 0;
  // nullopt when the branch is not defined at y (zero weight).
  virtual std::optional<PreimageBranch> branch(const Point& y, Symbol index) const = 0;
  // Weight of T^-1(y) outside the alphabet's branches.
  virtual double branch_tail(const Point& /*y*/) const { return 0.0; }
  virtual Preimages preimages(const Point& y) const;
  virtual SampledBranch sample_preimage(const Point& y, double u) const;

  virtual bool finite_branching() const { return true; }

  virtual Point sample_point(std::uint64_t seed, std::size_t depth) const = 0;
  virtual double evaluate(const Observable& f, const Point& y) const = 0;
  // The invariant conditional expectation of f at x when known in closed form.
  virtual std::optional<double> invariant_target(const Observable& f, const Point& x) const = 0;

  // Number of leading symbols that determine every branch weight and the
  // branch structure below a symbolic point; nullopt for non-shift systems.
  virtual std::optional<std::size_t> weight_locality() const { return std::nullopt; }
};

using SystemPtr = std::shared_ptr<const System>;

// Shift on I^N under a Markov measure with stationary initial distribution.
// Branch i at y exists iff P(i, y_0) > 0, with weight pi(i) P(i, y_0) / pi(y_0).
class MarkovShiftSystem : public System {
 public:
  // Throws NotMeasurePreserving unless the chain is stationary.
  MarkovShiftSystem(std::string id, MarkovChain chain, Alphabet alphabet);

  const std::string& id() const override { return id_; }
  const Alphabet& alphabet() const override { return alphabet_; }
  const MarkovChain& chain() const { return chain_; }

  Point apply(const Point& x) const override;
  std::optional<PreimageBranch> branch(const Point& y, Symbol index) const override;
  double branch_tail(const Point& y) const override;
  bool finite_branching() const override { return chain_.initial_tail() == 0.0; }
  Point sample_point(std::uint64_t seed, std::size_t depth) const override;
  double evaluate(const Observable& f, const Point& y) const override;
  std::optional<double> invariant_target(const Observable& f, const Point& x) const override;
  std::optional<std::size_t> weight_locality() const override { return 1; }

  // rho(s y, y) for a single prepended symbol; 0 when not realizable.
  double step_weight(Symbol s, Symbol y0) const;
  // Mean of a cylinder observable under P, or under P conditioned on the
  // closed class containing `state` when the chain is reducible.
  double cylinder_mean(const Observable::Cylinder& f, std::optional<Symbol> state) const;

  // Prefixes rejected at sampling for containing symbols beyond the support.
  std::size_t support_size() const { return chain_.support_size(); }

 protected:
  const SymbolicPoint& symbolic(const Point& p) const;

 private:
  std::string id_;
  MarkovChain chain_;
  Alphabet alphabet_;
  std::vector<std::vector<Symbol>> classes_;  // closed classes when reducible
  std::vector<std::size_t> class_of_;
};

// Shift on the boundary of a free group. Requires P(a, a^-1) = 0; the shift
// undoes the first letter, and the group acts by reduced concatenation.
class BoundarySystem : public MarkovShiftSystem {
 public:
  // rank nullopt: countably many generators, truncated to the chain's support.
  BoundarySystem(std::string id, std::optional<std::size_t> rank, MarkovChain chain);

  std::optional<std::size_t> rank() const { return rank_; }

  // (w . x): reduced concatenation; consumes prefix symbols on cancellation.
  SymbolicPoint act(std::span<const Symbol> word, const SymbolicPoint& x) const;
  // rho(a . y, y) for a single generator, including the cancelling case.
  double act_weight(Symbol a, const SymbolicPoint& y) const;

 private:
  std::optional<std::size_t> rank_;
};

// Action of a free group on the circle by invertible maps, one per symbol.
class GroupAction {
 public:
  virtual ~GroupAction() = default;
  virtual const Alphabet& alphabet() const = 0;
  virtual double act(Symbol a, double x) const = 0;
  // w . x = w_0 . (w_1 . ( ... w_{k-1} . x)).
  double act_word(std::span<const Symbol> word, double x) const;
  virtual std::string id() const = 0;
};

using GroupActionPtr = std::shared_ptr<const GroupAction>;

class CircleRotationAction : public GroupAction {
 public:
  explicit CircleRotationAction(std::vector<double> angles);
  const Alphabet& alphabet() const override { return alphabet_; }
  double act(Symbol a, double x) const override;
  std::string id() const override;
  const std::vector<double>& angles() const { return angles_; }

 private:
  std::vector<double> angles_;
  Alphabet alphabet_;
};

// Gauss map x -> 1/x mod 1 with the Gauss measure. Branch index n - 1 is the
// inverse branch x -> 1/(n + x); branches beyond the cap are reported as tail.
class GaussSystem : public System {
 public:
  explicit GaussSystem(std::size_t branch_cap);

  const std::string& id() const override { return id_; }
  const Alphabet& alphabet() const override { return alphabet_; }
  std::size_t branch_cap() const { return cap_; }

  Point apply(const Point& x) const override;
  std::optional<PreimageBranch> branch(const Point& y, Symbol index) const override;
  double branch_tail(const Point& y) const override;
  SampledBranch sample_preimage(const Point& y, double u) const override;
  bool finite_branching() const override { return false; }
  Point sample_point(std::uint64_t seed, std::size_t depth) const override;
  double evaluate(const Observable& f, const Point& y) const override;
  std::optional<double> invariant_target(const Observable& f, const Point& x) const override;

  // Validated point: in (0, 1] and with no terminating continued fraction
  // within 64 floating-point Gauss iterations.
  static RealPoint make_point(double x);
  // (1 + x) / ((n + x)(n + x + 1)).
  static double branch_weight(std::size_t n, double x);

 private:
  static double value_of(const Point& p);

  std::size_t cap_;
  std::string id_;
  Alphabet alphabet_;
};

// T(x, y) = (y_0^-1 . x, s(y)) on X x boundary.
class SkewProductSystem : public System {
 public:
  SkewProductSystem(GroupActionPtr action, std::shared_ptr<const BoundarySystem> boundary);

  const std::string& id() const override { return id_; }
  const Alphabet& alphabet() const override { return boundary_->alphabet(); }
  const BoundarySystem& boundary() const { return *boundary_; }
  const GroupAction& action() const { return *action_; }

  Point apply(const Point& x) const override;
  std::optional<PreimageBranch> branch(const Point& y, Symbol index) const override;
  double branch_tail(const Point& y) const override;
  bool finite_branching() const override { return boundary_->finite_branching(); }
  Point sample_point(std::uint64_t seed, std::size_t depth) const override;
  double evaluate(const Observable& f, const Point& y) const override;
  std::optional<double> invariant_target(const Observable& f, const Point& x) const override;

 private:
  GroupActionPtr action_;
  std::shared_ptr<const BoundarySystem> boundary_;
  std::string id_;
};

// --- Catalog constructors ----------------------------------------------------

std::shared_ptr<const MarkovShiftSystem> bernoulli_system(std::size_t symbol_count);
std::shared_ptr<const MarkovShiftSystem> markov_shift_system(const MarkovChain& chain,
                                                             std::string id = "markov");
std::shared_ptr<const BoundarySystem> boundary_system(std::optional<std::size_t> rank,
                                                      const MarkovChain& chain,
                                                      std::string id = {});
std::shared_ptr<const GaussSystem> gauss_system(std::size_t branch_cap);
std::shared_ptr<const SkewProductSystem> skew_product_system(
    GroupActionPtr action, std::shared_ptr<const BoundarySystem> boundary);
std::shared_ptr<const CircleRotationAction> circle_rotation_action(std::size_t rank,
                                                                   std::vector<double> angles);
// Four symbols, two closed 2-state blocks {0,1} and {2,3} of mass 1/2 each.
std::shared_ptr<const MarkovShiftSystem> block_chain_system();
MarkovChain block_chain();

// Prefix of a symbolic or product point.
const Word& prefix_of(const Point& p);

}  // namespace ergolab
