#pragma once

// Weighted balanced parentheses over {(, ), 0, ..., 9}: a word whose
// parentheses are balanced scores 1 - 2^-N, N being its maximum nesting
// depth; every other word scores 0. Not expressible by any WFA.

#include <cmath>
#include <string_view>

#include "wfax/oracle.hpp"

namespace wfax {

inline Alphabet wparen_alphabet() {
  return Alphabet({"(", ")", "0", "1", "2", "3", "4", "5", "6", "7", "8", "9"});
}

inline constexpr Symbol kOpen = 0;
inline constexpr Symbol kClose = 1;

/// Peak-depth scan over symbol indices of wparen_alphabet().
inline double wparen_value(const Word& w) {
  long depth = 0, peak = 0;
  for (Symbol s : w) {
    if (s >= 12) throw AlphabetError("wparen: symbol index out of range");
    if (s == kOpen) {
      peak = std::max(peak, ++depth);
    } else if (s == kClose) {
      if (--depth < 0) return 0.0;
    }
  }
  if (depth != 0) return 0.0;
  return 1.0 - std::pow(0.5, static_cast<double>(peak));
}

inline double wparen_value(std::string_view chars) {
  return wparen_value(wparen_alphabet().parse(chars));
}

/// Hand-built state encoder for wparen. Configuration =
/// (open depth, deepest completed pair so far, valid flag). A stray ')'
/// sends the run to the absorbing invalid state (0, 0, 0).
class WparenOracle final : public Oracle {
 public:
  const Alphabet& alphabet() const override { return alphabet_; }
  std::size_t dim() const override { return 3; }

  State start() const override {
    State st(3);
    st << 0, 0, 1;
    return st;
  }

  State advance(const State& st, Symbol s) const override {
    if (!alphabet_.contains(s)) throw AlphabetError("wparen: symbol index out of range");
    if (st[2] == 0.0) return st;
    State next = st;
    if (s == kOpen) {
      next[0] += 1;
    } else if (s == kClose) {
      if (st[0] == 0.0) return State::Zero(3);
      next[1] = std::max(st[1], st[0]);
      next[0] -= 1;
    }
    return next;
  }

  double read_output(const State& st) const override {
    if (st[2] == 0.0 || st[0] != 0.0) return 0.0;
    return 1.0 - std::pow(0.5, st[1]);
  }

  Vector read_config(const State& st) const override { return st; }

 private:
  Alphabet alphabet_ = wparen_alphabet();
};

inline OraclePtr wparen_oracle() { return std::make_shared<WparenOracle>(); }

}  // namespace wfax
