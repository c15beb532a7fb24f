#pragma once

#include <functional>
#include <utility>

#include "wfax/wfax.hpp"

namespace wfax::testing {

/// Oracle backed by a plain function of the word. The run state is the word
/// itself stored as a vector of symbol indices.
class FnOracle final : public Oracle {
 public:
  using OutputFn = std::function<double(const Word&)>;
  using ConfigFn = std::function<Vector(const Word&)>;

  FnOracle(Alphabet alphabet, OutputFn f, ConfigFn g = {}, std::size_t dim = 1)
      : alphabet_(std::move(alphabet)), f_(std::move(f)), g_(std::move(g)), dim_(dim) {}

  const Alphabet& alphabet() const override { return alphabet_; }
  std::size_t dim() const override { return dim_; }
  State start() const override { return State(0); }
  State advance(const State& st, Symbol s) const override {
    State next(st.size() + 1);
    next.head(st.size()) = st;
    next[st.size()] = static_cast<double>(s);
    return next;
  }
  double read_output(const State& st) const override { return f_(decode(st)); }
  Vector read_config(const State& st) const override {
    if (g_) return g_(decode(st));
    Vector v(1);
    v << static_cast<double>(st.size());
    return v;
  }

 private:
  static Word decode(const State& st) {
    Word w;
    for (double x : st) w.push_back(static_cast<Symbol>(x));
    return w;
  }

  Alphabet alphabet_;
  OutputFn f_;
  ConfigFn g_;
  std::size_t dim_;
};

inline OraclePtr constant_oracle(Alphabet a, double c) {
  return std::make_shared<FnOracle>(std::move(a), [c](const Word&) { return c; });
}

/// f(w) = 0.5^|w|, the one-state geometric function.
inline Wfa geometric_wfa(std::size_t k, double rate = 0.5) {
  Vector alpha(1), beta(1);
  alpha << 1.0;
  beta << 1.0;
  Matrix m(1, 1);
  m << rate;
  return Wfa(Alphabet::letters(k), alpha, beta, std::vector<Matrix>(k, m));
}

/// Brute-force max gap over words of length <= max_len, by full recomputation.
inline double naive_sup(const Oracle& o, const Wfa& a, std::size_t max_len) {
  double sup = 0.0;
  for_each_word(a.alphabet().size(), max_len, [&](const Word& w) {
    sup = std::max(sup, std::abs(o.output(w) - a.weight(w)));
    return true;
  });
  return sup;
}

}  // namespace wfax::testing
