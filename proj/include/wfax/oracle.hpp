#pragma once

// Black-box stateful scorers. An oracle exposes an output f(w) and an
// internal configuration delta(w) in R^dim, both computed by folding a
// transition over the word from a fixed start state.

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "wfax/alphabet.hpp"
#include "wfax/numerics.hpp"
#include "wfax/wfa.hpp"

namespace wfax {

class Oracle {
 public:
  /// Opaque run state. It may carry more than the configuration (an LSTM
  /// keeps its cell states here).
  using State = Vector;

  virtual ~Oracle() = default;

  virtual const Alphabet& alphabet() const = 0;
  virtual std::size_t dim() const = 0;

  virtual State start() const = 0;
  virtual State advance(const State& state, Symbol s) const = 0;
  virtual double read_output(const State& state) const = 0;
  virtual Vector read_config(const State& state) const = 0;

  State run(const Word& w) const {
    alphabet().check(w);
    State st = start();
    for (Symbol s : w) st = advance(st, s);
    return st;
  }

  /// Resumes a run from an intermediate state.
  State resume(State st, const Word& suffix) const {
    alphabet().check(suffix);
    for (Symbol s : suffix) st = advance(st, s);
    return st;
  }

  virtual double output(const Word& w) const { return read_output(run(w)); }
  virtual Vector config(const Word& w) const { return read_config(run(w)); }
};

using OraclePtr = std::shared_ptr<const Oracle>;

/// A WFA used as an exact oracle: output = weight, config = configuration.
class WfaOracle final : public Oracle {
 public:
  explicit WfaOracle(Wfa wfa) : wfa_(std::move(wfa)) {}

  const Wfa& wfa() const { return wfa_; }
  const Alphabet& alphabet() const override { return wfa_.alphabet(); }
  std::size_t dim() const override { return wfa_.n_states(); }

  State start() const override { return wfa_.alpha(); }
  State advance(const State& st, Symbol s) const override {
    return wfa_.transition(s).transpose() * st;
  }
  double read_output(const State& st) const override { return st.dot(wfa_.beta()); }
  Vector read_config(const State& st) const override { return st; }

 private:
  Wfa wfa_;
};

inline OraclePtr wfa_oracle(Wfa wfa) { return std::make_shared<WfaOracle>(std::move(wfa)); }

struct QueryStats {
  std::size_t membership_queries = 0;
  std::size_t distinct_words = 0;
  std::size_t config_queries = 0;
};

/// Memoizing wrapper. Lookups take a shared lock; inserts take an exclusive
/// one, so the wrapper may be queried from several threads. When the cache
/// holds more than `capacity` words it is cleared; values never change.
class CachedOracle final : public Oracle {
 public:
  explicit CachedOracle(OraclePtr inner, std::size_t capacity = 1u << 22)
      : inner_(std::move(inner)), capacity_(capacity) {}

  const Oracle& inner() const { return *inner_; }
  const Alphabet& alphabet() const override { return inner_->alphabet(); }
  std::size_t dim() const override { return inner_->dim(); }
  State start() const override { return inner_->start(); }
  State advance(const State& st, Symbol s) const override { return inner_->advance(st, s); }
  double read_output(const State& st) const override { return inner_->read_output(st); }
  Vector read_config(const State& st) const override {
    ++config_queries_;
    return inner_->read_config(st);
  }

  double output(const Word& w) const override {
    ++membership_queries_;
    {
      std::shared_lock lock(mutex_);
      auto it = outputs_.find(w);
      if (it != outputs_.end()) return it->second;
    }
    const double v = inner_->output(w);
    std::unique_lock lock(mutex_);
    if (outputs_.size() >= capacity_) outputs_.clear();
    if (seen_.insert(w).second) ++distinct_words_;
    outputs_.emplace(w, v);
    return v;
  }

  Vector config(const Word& w) const override {
    ++config_queries_;
    {
      std::shared_lock lock(mutex_);
      auto it = configs_.find(w);
      if (it != configs_.end()) return it->second;
    }
    Vector v = inner_->config(w);
    std::unique_lock lock(mutex_);
    if (configs_.size() >= capacity_) configs_.clear();
    configs_.emplace(w, v);
    return v;
  }

  QueryStats stats() const {
    return {membership_queries_.load(), distinct_words_.load(), config_queries_.load()};
  }

 private:
  OraclePtr inner_;
  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Word, double, WordHash> outputs_;
  mutable std::unordered_map<Word, Vector, WordHash> configs_;
  // distinct-word accounting survives cache clears
  mutable std::unordered_set<Word, WordHash> seen_;
  mutable std::atomic<std::size_t> membership_queries_{0};
  mutable std::atomic<std::size_t> distinct_words_{0};
  mutable std::atomic<std::size_t> config_queries_{0};
};

inline std::shared_ptr<CachedOracle> cached(OraclePtr inner) {
  return std::make_shared<CachedOracle>(std::move(inner));
}

}  // namespace wfax
