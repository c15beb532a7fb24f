#pragma once

// Accuracy and speed of an extracted automaton against its oracle.

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "wfax/oracle.hpp"
#include "wfax/wfa.hpp"

namespace wfax {

struct LengthBucket {
  std::size_t count = 0;
  double mse = 0.0;
  double max_abs = 0.0;
};

struct EvalResult {
  double mse = 0.0;
  std::optional<double> sup_error;  // set by exhaustive evaluation
  double max_abs = 0.0;
  std::size_t n_eval = 0;
  std::map<std::size_t, LengthBucket> by_length;
};

/// Mean of (f_A(w) - f_R(w))^2 over the words, with a per-length breakdown.
inline EvalResult mse(const Oracle& oracle, const Wfa& wfa, const std::vector<Word>& words) {
  if (words.empty()) throw Error("mse: empty evaluation set");
  EvalResult r;
  double total = 0.0;
  for (const auto& w : words) {
    const double d = wfa.weight(w) - oracle.output(w);
    total += d * d;
    r.max_abs = std::max(r.max_abs, std::abs(d));
    auto& b = r.by_length[w.size()];
    ++b.count;
    b.mse += d * d;
    b.max_abs = std::max(b.max_abs, std::abs(d));
  }
  for (auto& [len, b] : r.by_length) b.mse /= static_cast<double>(b.count);
  r.n_eval = words.size();
  r.mse = total / static_cast<double>(words.size());
  return r;
}

/// Number of words of length <= max_len, saturating at SIZE_MAX.
inline std::size_t count_words(std::size_t alphabet_size, std::size_t max_len) {
  std::size_t total = 0, layer = 1;
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (total > SIZE_MAX - layer) return SIZE_MAX;
    total += layer;
    if (len < max_len) {
      if (alphabet_size != 0 && layer > SIZE_MAX / alphabet_size) return SIZE_MAX;
      layer *= alphabet_size;
    }
  }
  return total;
}

inline constexpr std::size_t kExhaustiveGuard = 50'000'000;

/// max |f_A(w) - f_R(w)| over every word of length <= max_len. Runs are
/// advanced incrementally along a depth-first walk of the word tree.
inline double sup_error_exhaustive(const Oracle& oracle, const Wfa& wfa, std::size_t max_len,
                                   std::size_t guard = kExhaustiveGuard) {
  const std::size_t k = wfa.alphabet().size();
  if (!(oracle.alphabet() == wfa.alphabet())) throw AlphabetError("sup_error: alphabets differ");
  if (count_words(k, max_len) > guard)
    throw Error("sup_error: " + std::to_string(k) + "^" + std::to_string(max_len) +
                " words exceed the exhaustive-evaluation guard");
  double sup = 0.0;
  struct Frame {
    Oracle::State r;
    WfaConfig a;
    std::size_t depth;
  };
  std::vector<Frame> stack{{oracle.start(), wfa.initial(), 0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    sup = std::max(sup, std::abs(wfa.output(f.a) - oracle.read_output(f.r)));
    if (f.depth == max_len) continue;
    for (Symbol s = 0; s < k; ++s) stack.push_back({oracle.advance(f.r, s), wfa.step(f.a, s), f.depth + 1});
  }
  return sup;
}

struct BenchResult {
  double oracle_ns_per_word = 0.0;
  double wfa_ns_per_word = 0.0;
  double speedup = 0.0;  // oracle time / wfa time
  double oracle_ns_stddev = 0.0;
  double wfa_ns_stddev = 0.0;
  double mean_length = 0.0;
  std::size_t words = 0;
  std::size_t repetitions = 0;
};

/// Times full-word inference on both models (one untimed warmup pass, then
/// `repetitions` timed passes each). Reports means and standard deviations
/// across repetitions.
inline BenchResult bench(const Oracle& oracle, const Wfa& wfa, const std::vector<Word>& words,
                         std::size_t repetitions = 5) {
  if (words.empty()) throw Error("bench: empty word list");
  if (repetitions == 0) repetitions = 1;
  using clock = std::chrono::steady_clock;
  volatile double sink = 0.0;
  auto pass = [&](auto&& f) {
    const auto t0 = clock::now();
    double acc = 0.0;
    for (const auto& w : words) acc += f(w);
    const auto t1 = clock::now();
    sink = sink + acc;
    return std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(words.size());
  };
  auto run_oracle = [&](const Word& w) { return oracle.output(w); };
  auto run_wfa = [&](const Word& w) { return wfa.weight(w); };
  pass(run_oracle);
  pass(run_wfa);
  std::vector<double> to, ta;
  for (std::size_t i = 0; i < repetitions; ++i) {
    to.push_back(pass(run_oracle));
    ta.push_back(pass(run_wfa));
  }
  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  auto sd = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / v.size());
  };
  BenchResult b;
  b.oracle_ns_per_word = std::max(mean(to), 1e-3);
  b.wfa_ns_per_word = std::max(mean(ta), 1e-3);
  b.speedup = b.oracle_ns_per_word / b.wfa_ns_per_word;
  b.oracle_ns_stddev = sd(to);
  b.wfa_ns_stddev = sd(ta);
  double len = 0.0;
  for (const auto& w : words) len += static_cast<double>(w.size());
  b.mean_length = len / static_cast<double>(words.size());
  b.words = words.size();
  b.repetitions = repetitions;
  return b;
}

}  // namespace wfax
