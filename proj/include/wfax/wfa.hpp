#pragma once

// Weighted finite automata over (R, +, x). Configurations are row vectors:
// the configuration after w = s1..sn is alpha^T A_s1 ... A_sn and the weight
// of w is that configuration times beta.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wfax/alphabet.hpp"
#include "wfax/error.hpp"
#include "wfax/numerics.hpp"

namespace wfax {

using WfaConfig = Eigen::RowVectorXd;

class Wfa {
 public:
  Wfa(Alphabet alphabet, Vector alpha, Vector beta, std::vector<Matrix> transitions)
      : alphabet_(std::move(alphabet)),
        alpha_(std::move(alpha)),
        beta_(std::move(beta)),
        transitions_(std::move(transitions)) {
    const auto n = alpha_.size();
    if (n < 1) throw DimensionError("wfa: needs at least one state");
    if (beta_.size() != n)
      throw DimensionError("wfa: final vector has length " + std::to_string(beta_.size()) +
                           ", expected " + std::to_string(n));
    if (transitions_.size() != alphabet_.size())
      throw DimensionError("wfa: expected one transition matrix per symbol");
    for (std::size_t s = 0; s < transitions_.size(); ++s) {
      if (transitions_[s].rows() != n || transitions_[s].cols() != n)
        throw DimensionError("wfa: transition matrix for '" + alphabet_.name(static_cast<Symbol>(s)) +
                             "' is not " + std::to_string(n) + "x" + std::to_string(n));
      require_finite(transitions_[s], "wfa transition");
    }
    require_finite(alpha_, "wfa initial vector");
    require_finite(beta_, "wfa final vector");
  }

  /// All-zero automaton with the given number of states.
  static Wfa zero(Alphabet alphabet, std::size_t n_states) {
    const auto n = static_cast<Eigen::Index>(n_states);
    std::vector<Matrix> t(alphabet.size(), Matrix::Zero(n, n));
    return Wfa(std::move(alphabet), Vector::Zero(n), Vector::Zero(n), std::move(t));
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t n_states() const { return static_cast<std::size_t>(alpha_.size()); }
  const Vector& alpha() const { return alpha_; }
  const Vector& beta() const { return beta_; }
  const std::vector<Matrix>& transitions() const { return transitions_; }
  const Matrix& transition(Symbol s) const {
    if (!alphabet_.contains(s)) throw AlphabetError("wfa: symbol index out of range");
    return transitions_[s];
  }

  WfaConfig initial() const { return alpha_.transpose(); }

  WfaConfig step(const WfaConfig& config, Symbol s) const {
    if (config.size() != alpha_.size()) throw DimensionError("wfa step: configuration size mismatch");
    return config * transition(s);
  }

  WfaConfig configuration(const Word& w) const {
    WfaConfig x = initial();
    for (Symbol s : w) x = step(x, s);
    return x;
  }

  double output(const WfaConfig& config) const { return config.dot(beta_.transpose()); }

  double weight(const Word& w) const { return output(configuration(w)); }

 private:
  Alphabet alphabet_;
  Vector alpha_;
  Vector beta_;
  std::vector<Matrix> transitions_;
};

/// x ~_A y  iff  sum_i beta_i^2 (x_i - y_i)^2 < e^2 / |Q_A|.
/// Implies |(x - y) . beta| < e.
inline bool close_rel(const Vector& beta, const WfaConfig& x, const WfaConfig& y, double e) {
  if (!(e > 0.0)) throw NumericError("close_rel: tolerance must be positive");
  if (x.size() != beta.size() || y.size() != beta.size())
    throw DimensionError("close_rel: configuration size does not match the automaton");
  const double lhs = ((x - y).transpose().array() * beta.array()).square().sum();
  return lhs < e * e / static_cast<double>(beta.size());
}

inline bool close_rel(const Wfa& wfa, const WfaConfig& x, const WfaConfig& y, double e) {
  return close_rel(wfa.beta(), x, y, e);
}

/// Copy with every transition entry of magnitude <= threshold set to zero.
inline Wfa prune(const Wfa& wfa, double threshold) {
  std::vector<Matrix> t = wfa.transitions();
  for (auto& m : t) m = (m.array().abs() > threshold).select(m, 0.0);
  return Wfa(wfa.alphabet(), wfa.alpha(), wfa.beta(), std::move(t));
}

/// The automaton from the running example: two symbols, three states.
inline Wfa example_wfa() {
  Vector alpha(3), beta(3);
  alpha << 1, 2, 3;
  beta << 0, -1, 1;
  Matrix a(3, 3), b(3, 3);
  a << 1, 2, -1,
       3, 0, 0,
       0, 4, 0;
  b << -1, 1, 0,
       0, 3, 0,
       -2, 4, 0;
  return Wfa(Alphabet({"a", "b"}), alpha, beta, {a, b});
}

}  // namespace wfax
