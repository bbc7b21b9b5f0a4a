#pragma once

// Stochastic matrices over finite or countable state spaces, Markov chains on
// symbol sequences, and recurrence statistics.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/random.hpp"
#include "ergolab/words.hpp"

namespace ergolab {

class StochasticMatrix {
 public:
  // Countable state space given by closed-form rows.
  struct RowRule {
    std::string name;
    std::function<double(Symbol, Symbol)> entry;
    // Exact draw from row i given a uniform variate in [0, 1).
    std::function<Symbol(Symbol, double)> sample;
    // The common value of P(i, j) shared by every state i >= budget, for
    // j < budget. Lets head/tail bookkeeping stay exact under truncation.
    std::function<double(std::size_t budget, Symbol j)> far_entry;
  };

  // Validates non-negativity and unit row sums (1e-12).
  static StochasticMatrix finite(const std::vector<std::vector<double>>& rows);
  static StochasticMatrix finite(Eigen::MatrixXd dense);
  static StochasticMatrix rule(RowRule rule);

  bool is_finite() const { return std::holds_alternative<Dense>(storage_); }
  // nullopt for countable state spaces.
  std::optional<std::size_t> state_count() const;

  double operator()(Symbol i, Symbol j) const;
  Symbol sample_next(Symbol i, Rng& rng) const;

  const Eigen::MatrixXd& dense() const;
  const RowRule& row_rule() const;

 private:
  struct Dense {
    Eigen::MatrixXd p;
    Eigen::MatrixXd cumulative;
  };

  explicit StochasticMatrix(std::variant<Dense, RowRule> storage) : storage_(std::move(storage)) {}

  std::variant<Dense, RowRule> storage_;
};

// Initial distribution plus transition matrix. For countable chains only the
// first support_size() entries of pi are stored explicitly; the remaining
// mass is initial_tail().
class MarkovChain {
 public:
  MarkovChain(StochasticMatrix matrix, std::vector<double> initial, double initial_tail = 0.0);

  const StochasticMatrix& matrix() const { return matrix_; }
  double transition(Symbol i, Symbol j) const { return matrix_(i, j); }

  // Throws DomainError for states beyond the stored support.
  double initial(Symbol i) const;
  const std::vector<double>& initial_head() const { return initial_; }
  std::size_t support_size() const { return initial_.size(); }
  double initial_tail() const { return initial_tail_; }

  // ||pi P - pi||_1, exact under the row rule's far_entry for countable chains.
  double stationarity_residual() const;
  bool is_stationary(double tol = 1e-10) const { return stationarity_residual() <= tol; }

 private:
  StochasticMatrix matrix_;
  std::vector<double> initial_;
  double initial_tail_;
};

struct ReturnTimeStats {
  Symbol state = 0;
  std::size_t samples = 0;
  double mean_return = 0.0;
  double standard_error = 0.0;
  std::size_t censored = 0;
  // survival[k] estimates P_i[tau_i >= k]; survival[0] = survival[1] = 1.
  std::vector<double> survival;

  double censored_fraction() const {
    return samples == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(samples);
  }
};

// Closed-form return-time recurrence for state a_0 of the free-group chain on
// countably many generators. Index k holds the value for k (index 0 unused
// for q and r; p[0] = p[1] = 1).
struct SurvivalRecurrence {
  std::vector<double> q;
  std::vector<double> r;
  std::vector<double> p;
};

// Direct solve of (P^T - I) pi = 0 with a normalisation row, falling back to
// power iteration. Throws AmbiguousStationary if the stationary vector is not
// unique.
std::vector<double> stationary_distribution(const StochasticMatrix& matrix);

// Strong connectivity of the positive-entry graph. Row-rule chains are
// irreducible by construction.
bool is_irreducible(const StochasticMatrix& matrix);

// Closed communicating classes of a finite matrix (sorted, deterministic).
std::vector<std::vector<Symbol>> closed_classes(const StochasticMatrix& matrix);

// P(w) = pi(w_0) P(w_0, w_1) ... P(w_{n-2}, w_{n-1}); P(empty) = 1.
double cylinder_measure(const MarkovChain& chain, std::span<const Symbol> word);

// First symbol from pi, then transitions from P. Deterministic in seed.
Word sample_path(const MarkovChain& chain, std::size_t length, std::uint64_t seed);

// Path from P_start (first symbol fixed).
Word sample_path_from(const MarkovChain& chain, Symbol start, std::size_t length, Rng& rng);

ReturnTimeStats expected_return_time(const MarkovChain& chain, Symbol state,
                                     std::size_t max_horizon, std::size_t sample_count,
                                     std::uint64_t seed, std::size_t survival_length = 16);

SurvivalRecurrence survival_recurrence(std::size_t k_max);

// --- Built-in chains -------------------------------------------------------

// Uniform pi and P over k symbols.
MarkovChain bernoulli_chain(std::size_t symbol_count);

// Free group of rank r: pi = 1/(2r), each row 1/(2r-1) off the inverse.
MarkovChain uniform_boundary_chain(std::size_t rank);

// Rows (2^-(j+1))_j with a zero inserted at the inverse, over the symmetric
// generators of the free group on countably many generators.
StochasticMatrix finfty_matrix();

// The chain above with pi computed exactly for the first `budget` generators
// (budget even) via the censored chain on those states; the remaining mass is
// recorded as the initial tail.
MarkovChain finfty_chain(std::size_t budget = 40);

// Stationary vector of a row-rule matrix restricted to the first `budget`
// states, plus the mass of the remaining states. Requires far_entry.
std::pair<std::vector<double>, double> stationary_with_tail(const StochasticMatrix& matrix,
                                                            std::size_t budget);

}  // namespace ergolab
