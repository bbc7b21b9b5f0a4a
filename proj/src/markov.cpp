#include "ergolab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ergolab/error.hpp"

namespace ergolab {

namespace {

constexpr double kRowSumTolerance = 1e-12;

Eigen::MatrixXd cumulative_rows(const Eigen::MatrixXd& p) {
  Eigen::MatrixXd c(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      acc += p(i, j);
      c(i, j) = acc;
    }
  }
  return c;
}

// reach[i][j]: j reachable from i through positive entries (reflexive).
std::vector<std::vector<bool>> reachability(const Eigen::MatrixXd& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    reach[s][s] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (p(u, v) > 0.0 && !reach[s][v]) {
          reach[s][v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return reach;
}

double l1_residual(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  return (p.transpose() * pi - pi).lpNorm<1>();
}

std::vector<double> power_iteration(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  // Lazy chain (P + I)/2 has the same stationary vector and is aperiodic.
  for (int iter = 0; iter < 1'000'000; ++iter) {
    Eigen::VectorXd next = 0.5 * (p.transpose() * pi + pi);
    next /= next.sum();
    double delta = (next - pi).lpNorm<1>();
    pi = next;
    if (delta < 1e-14) break;
  }
  return std::vector<double>(pi.data(), pi.data() + n);
}

}  // namespace

StochasticMatrix StochasticMatrix::finite(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(ErrorKind::kInvalidMatrix, "matrix has no rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) {
      throw Error(ErrorKind::kInvalidMatrix, "matrix is not square");
    }
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = rows[i][j];
  }
  return finite(std::move(p));
}

StochasticMatrix StochasticMatrix::finite(Eigen::MatrixXd p) {
  if (p.rows() == 0 || p.rows() != p.cols()) {
    throw Error(ErrorKind::kInvalidMatrix, "matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (!(p(i, j) >= 0.0) || !std::isfinite(p(i, j))) {
        throw Error(ErrorKind::kInvalidMatrix, "negative or non-finite entry in row " + std::to_string(i));
      }
      sum += p(i, j);
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw Error(ErrorKind::kInvalidMatrix, "row " + std::to_string(i) + " does not sum to 1");
    }
  }
  Eigen::MatrixXd c = cumulative_rows(p);
  return StochasticMatrix(Dense{std::move(p), std::move(c)});
}

StochasticMatrix StochasticMatrix::rule(RowRule rule) {
  if (!rule.entry || !rule.sample) {
    throw Error(ErrorKind::kInvalidMatrix, "row rule needs entry and sampler");
  }
  return StochasticMatrix(std::move(rule));
}

std::optional<std::size_t> StochasticMatrix::state_count() const {
  if (const auto* d = std::get_if<Dense>(&storage_)) return static_cast<std::size_t>(d->p.rows());
  return std::nullopt;
}

double StochasticMatrix::operator()(Symbol i, Symbol j) const {
  if (const auto* d = std::get_if<Dense>(&storage_)) {
    if (i >= d->p.rows() || j >= d->p.cols()) return 0.0;
    return d->p(i, j);
  }
  return std::get<RowRule>(storage_).entry(i, j);
}

Symbol StochasticMatrix::sample_next(Symbol i, Rng& rng) const {
  double u = uniform01(rng);
  if (const auto* d = std::get_if<Dense>(&storage_)) {
    const Eigen::Index n = d->p.cols();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (u < d->cumulative(i, j) && d->p(i, j) > 0.0) return static_cast<Symbol>(j);
    }
    // u landed in the rounding gap above the last cumulative value.
    for (Eigen::Index j = n; j-- > 0;) {
      if (d->p(i, j) > 0.0) return static_cast<Symbol>(j);
    }
    return 0;
  }
  return std::get<RowRule>(storage_).sample(i, u);
}

const Eigen::MatrixXd& StochasticMatrix::dense() const {
  if (const auto* d = std::get_if<Dense>(&storage_)) return d->p;
  throw Error(ErrorKind::kInvalidMatrix, "row-rule matrix has no dense form");
}

const StochasticMatrix::RowRule& StochasticMatrix::row_rule() const {
  if (const auto* r = std::get_if<RowRule>(&storage_)) return *r;
  throw Error(ErrorKind::kInvalidMatrix, "finite matrix has no row rule");
}

MarkovChain::MarkovChain(StochasticMatrix matrix, std::vector<double> initial, double initial_tail)
    : matrix_(std::move(matrix)), initial_(std::move(initial)), initial_tail_(initial_tail) {
  if (initial_.empty()) throw Error(ErrorKind::kInvalidMatrix, "empty initial distribution");
  if (auto n = matrix_.state_count(); n && *n != initial_.size()) {
    throw Error(ErrorKind::kInvalidMatrix, "initial distribution size does not match matrix");
  }
  if (matrix_.is_finite() && initial_tail_ != 0.0) {
    throw Error(ErrorKind::kInvalidMatrix, "finite chains carry no initial tail");
  }
  double sum = initial_tail_;
  for (double v : initial_) {
    if (!(v > 0.0)) throw Error(ErrorKind::kInvalidMatrix, "initial distribution must be positive");
    sum += v;
  }
  if (initial_tail_ < 0.0 || std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::kInvalidMatrix, "initial distribution does not sum to 1");
  }
}

double MarkovChain::initial(Symbol i) const {
  if (i >= initial_.size()) {
    throw Error(ErrorKind::kDomainError,
                "state " + std::to_string(i) + " beyond the stored initial distribution");
  }
  return initial_[i];
}

double MarkovChain::stationarity_residual() const {
  const std::size_t g = initial_.size();
  if (matrix_.is_finite()) {
    Eigen::Map<const Eigen::VectorXd> pi(initial_.data(), static_cast<Eigen::Index>(g));
    return l1_residual(matrix_.dense(), pi);
  }
  const auto& rule = matrix_.row_rule();
  if (!rule.far_entry) throw Error(ErrorKind::kInvalidMatrix, "row rule lacks far_entry");
  double residual = 0.0;
  double head_outflow = 0.0;  // mass moving from head states into the tail
  for (Symbol j = 0; j < g; ++j) {
    double inflow = initial_tail_ * rule.far_entry(g, j);
    for (Symbol i = 0; i < g; ++i) inflow += initial_[i] * matrix_(i, j);
    residual += std::abs(inflow - initial_[j]);
  }
  for (Symbol i = 0; i < g; ++i) {
    double row_head = 0.0;
    for (Symbol j = 0; j < g; ++j) row_head += matrix_(i, j);
    head_outflow += initial_[i] * (1.0 - row_head);
  }
  double far_head = 0.0;
  for (Symbol j = 0; j < g; ++j) far_head += rule.far_entry(g, j);
  double tail_inflow = head_outflow + initial_tail_ * (1.0 - far_head);
  residual += std::abs(tail_inflow - initial_tail_);
  return residual;
}

std::vector<double> stationary_distribution(const StochasticMatrix& matrix) {
  const Eigen::MatrixXd& p = matrix.dense();
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (n > 1 && lu.rank() < n - 1) {
    throw Error(ErrorKind::kAmbiguousStationary,
                "stationary vector is not unique (kernel dimension " +
                    std::to_string(n - lu.rank()) + ")");
  }

  Eigen::MatrixXd system = a;
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = system.fullPivLu().solve(rhs);

  if (!pi.allFinite() || l1_residual(p, pi) > 1e-10 || std::abs(pi.sum() - 1.0) > 1e-12) {
    return power_iteration(p);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i) < 0.0 && pi(i) > -1e-15) pi(i) = 0.0;
  }
  return std::vector<double>(pi.data(), pi.data() + n);
}

bool is_irreducible(const StochasticMatrix& matrix) {
  if (!matrix.is_finite()) return true;
  auto reach = reachability(matrix.dense());
  for (const auto& row : reach) {
    if (std::find(row.begin(), row.end(), false) != row.end()) return false;
  }
  return true;
}

std::vector<std::vector<Symbol>> closed_classes(const StochasticMatrix& matrix) {
  auto reach = reachability(matrix.dense());
  const std::size_t n = reach.size();
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<Symbol>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<Symbol> cls;
    bool closed = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (reach[i][j] && reach[j][i]) cls.push_back(static_cast<Symbol>(j));
      if (reach[i][j] && !reach[j][i]) closed = false;
    }
    for (Symbol j : cls) assigned[j] = true;
    if (closed) classes.push_back(std::move(cls));
  }
  return classes;
}

double cylinder_measure(const MarkovChain& chain, std::span<const Symbol> word) {
  if (word.empty()) return 1.0;
  if (word[0] >= chain.support_size()) return 0.0;
  double m = chain.initial(word[0]);
  for (std::size_t k = 0; k + 1 < word.size() && m > 0.0; ++k) {
    m *= chain.transition(word[k], word[k + 1]);
  }
  return m;
}

Word sample_path_from(const MarkovChain& chain, Symbol start, std::size_t length, Rng& rng) {
  Word path;
  path.reserve(length);
  if (length == 0) return path;
  path.push_back(start);
  while (path.size() < length) path.push_back(chain.matrix().sample_next(path.back(), rng));
  return path;
}

Word sample_path(const MarkovChain& chain, std::size_t length, std::uint64_t seed) {
  if (length == 0) throw Error(ErrorKind::kDomainError, "path length must be at least 1");
  Rng rng(seed);
  double u = uniform01(rng);
  const auto& pi = chain.initial_head();
  double acc = 0.0;
  Symbol first = static_cast<Symbol>(pi.size() - 1);
  bool found = false;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    acc += pi[i];
    if (u < acc) {
      first = static_cast<Symbol>(i);
      found = true;
      break;
    }
  }
  if (!found && chain.initial_tail() > 0.0 && u >= 1.0 - chain.initial_tail()) {
    throw Error(ErrorKind::kDomainError, "initial symbol drawn beyond the stored support");
  }
  return sample_path_from(chain, first, length, rng);
}

ReturnTimeStats expected_return_time(const MarkovChain& chain, Symbol state,
                                     std::size_t max_horizon, std::size_t sample_count,
                                     std::uint64_t seed, std::size_t survival_length) {
  if (sample_count == 0) throw Error(ErrorKind::kDomainError, "sample_count must be positive");
  if (max_horizon == 0) throw Error(ErrorKind::kDomainError, "max_horizon must be positive");
  Rng rng(seed);
  ReturnTimeStats stats;
  stats.state = state;
  stats.samples = sample_count;
  std::vector<std::size_t> at_least(survival_length + 1, 0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    Symbol current = state;
    std::size_t tau = max_horizon;
    bool returned = false;
    for (std::size_t t = 1; t <= max_horizon; ++t) {
      current = chain.matrix().sample_next(current, rng);
      if (current == state) {
        tau = t;
        returned = true;
        break;
      }
    }
    if (!returned) ++stats.censored;
    auto t = static_cast<double>(tau);
    sum += t;
    sum_sq += t * t;
    std::size_t upto = std::min(tau, survival_length);
    for (std::size_t k = 0; k <= upto; ++k) ++at_least[k];
  }
  if (stats.censored == sample_count) {
    throw Error(ErrorKind::kNoReturnObserved,
                "no return to state " + std::to_string(state) + " within horizon " +
                    std::to_string(max_horizon));
  }
  const auto n = static_cast<double>(sample_count);
  stats.mean_return = sum / n;
  double var = sample_count > 1 ? (sum_sq - n * stats.mean_return * stats.mean_return) / (n - 1) : 0.0;
  stats.standard_error = std::sqrt(std::max(var, 0.0) / n);
  stats.survival.resize(survival_length + 1);
  for (std::size_t k = 0; k <= survival_length; ++k) {
    stats.survival[k] = static_cast<double>(at_least[k]) / n;
  }
  return stats;
}

SurvivalRecurrence survival_recurrence(std::size_t k_max) {
  if (k_max == 0) throw Error(ErrorKind::kDomainError, "k_max must be at least 1");
  SurvivalRecurrence out;
  out.q.assign(k_max + 1, 0.0);
  out.r.assign(k_max + 1, 0.0);
  out.p.assign(k_max + 2, 0.0);
  out.q[1] = 0.0;
  out.r[1] = 0.5;
  for (std::size_t k = 2; k <= k_max; ++k) {
    out.q[k] = 0.5 * out.q[k - 1] + 0.25 * out.r[k - 1];
    out.r[k] = 0.5 * out.q[k - 1] + 0.25 * out.r[k - 1];
  }
  out.p[0] = 1.0;
  out.p[1] = 1.0;
  for (std::size_t k = 1; k <= k_max; ++k) out.p[k + 1] = out.q[k] + out.r[k];
  return out;
}

MarkovChain bernoulli_chain(std::size_t symbol_count) {
  if (symbol_count < 1) throw Error(ErrorKind::kInvalidMatrix, "need at least one symbol");
  const auto n = static_cast<Eigen::Index>(symbol_count);
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return MarkovChain(StochasticMatrix::finite(std::move(p)),
                     std::vector<double>(symbol_count, 1.0 / static_cast<double>(n)));
}

MarkovChain uniform_boundary_chain(std::size_t rank) {
  if (rank == 0) throw Error(ErrorKind::kInvalidAlphabet, "rank must be positive");
  const auto n = static_cast<Eigen::Index>(2 * rank);
  const double off = 1.0 / static_cast<double>(n - 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(n, n, off);
  for (Eigen::Index i = 0; i < n; ++i) p(i, i ^ 1) = 0.0;
  if (rank == 1) {
    // Rank one: each generator can only follow itself.
    p = Eigen::MatrixXd::Identity(n, n);
  }
  return MarkovChain(StochasticMatrix::finite(std::move(p)),
                     std::vector<double>(2 * rank, 1.0 / static_cast<double>(n)));
}

StochasticMatrix finfty_matrix() {
  StochasticMatrix::RowRule rule;
  rule.name = "finfty_chain";
  rule.entry = [](Symbol i, Symbol j) -> double {
    const Symbol inv = i ^ 1U;
    if (j == inv) return 0.0;
    if (j < inv) return std::ldexp(1.0, -static_cast<int>(j) - 1);
    return std::ldexp(1.0, -static_cast<int>(j));
  };
  rule.sample = [](Symbol i, double u) -> Symbol {
    // Geometric J with P(J = j) = 2^-(j+1), then skip over the inverse.
    double g = std::floor(-std::log2(1.0 - u));
    auto jump = static_cast<Symbol>(std::max(0.0, g));
    const Symbol inv = i ^ 1U;
    return jump < inv ? jump : jump + 1;
  };
  rule.far_entry = [](std::size_t /*budget*/, Symbol j) -> double {
    return std::ldexp(1.0, -static_cast<int>(j) - 1);
  };
  return StochasticMatrix::rule(std::move(rule));
}

std::pair<std::vector<double>, double> stationary_with_tail(const StochasticMatrix& matrix,
                                                            std::size_t budget) {
  const auto& rule = matrix.row_rule();
  if (!rule.far_entry) throw Error(ErrorKind::kInvalidMatrix, "row rule lacks far_entry");
  const auto g = static_cast<Eigen::Index>(budget);
  Eigen::VectorXd far(g);
  for (Eigen::Index j = 0; j < g; ++j) far(j) = rule.far_entry(budget, static_cast<Symbol>(j));
  const double far_head = far.sum();
  const double stay_in_tail = 1.0 - far_head;
  const Eigen::VectorXd entry = far / far_head;

  // Censored chain on the head: excursions into the tail re-enter according
  // to `entry`, which is exact because every tail row shares far_entry.
  Eigen::MatrixXd censored(g, g);
  Eigen::VectorXd out(g);
  for (Eigen::Index i = 0; i < g; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < g; ++j) {
      censored(i, j) = matrix(static_cast<Symbol>(i), static_cast<Symbol>(j));
      row += censored(i, j);
    }
    out(i) = std::max(0.0, 1.0 - row);
    censored.row(i) += out(i) * entry.transpose();
    censored.row(i) /= censored.row(i).sum();
  }
  std::vector<double> nu = stationary_distribution(StochasticMatrix::finite(censored));
  double flow_out = 0.0;
  for (Eigen::Index i = 0; i < g; ++i) flow_out += nu[i] * out(i);
  const double tail_ratio = flow_out / (1.0 - stay_in_tail);
  const double head_mass = 1.0 / (1.0 + tail_ratio);
  for (double& v : nu) v *= head_mass;
  return {nu, head_mass * tail_ratio};
}

MarkovChain finfty_chain(std::size_t budget) {
  if (budget < 2 || budget % 2 != 0 || budget > 1000) {
    throw Error(ErrorKind::kDomainError, "generator budget must be even and in [2, 1000]");
  }
  StochasticMatrix p = finfty_matrix();
  auto [head, tail] = stationary_with_tail(p, budget);
  return MarkovChain(std::move(p), std::move(head), tail);
}

}  // namespace ergolab
