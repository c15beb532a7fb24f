#pragma once

// Equivalence-query engines comparing a hypothesis WFA with an oracle:
//  - bfs_eq: shortlex enumeration of the first i + n words
//  - regression_eq: best-first search over the oracle's state space, guided
//    by a regression map p from oracle configurations to hypothesis
//    configurations

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wfax/oracle.hpp"
#include "wfax/regression.hpp"
#include "wfax/wfa.hpp"
#include "wfax/wfa_io.hpp"

namespace wfax {

enum class EqReason { counterexample, queue_exhausted, length_heuristic, budget_exhausted };

inline const char* to_string(EqReason r) {
  switch (r) {
    case EqReason::counterexample: return "counterexample";
    case EqReason::queue_exhausted: return "queue-exhausted";
    case EqReason::length_heuristic: return "length-heuristic";
    case EqReason::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

struct Counterexample {
  Word word;
  double oracle_value = 0.0;
  double hypothesis_value = 0.0;
};

struct EqResult {
  EqReason reason = EqReason::queue_exhausted;
  std::optional<Counterexample> counterexample;
  std::size_t examined = 0;  // words checked (bfs) or pops (regression)
  std::size_t refits = 0;
  std::size_t index = 0;  // bfs: shortlex index of the counterexample

  bool equivalent() const { return !counterexample.has_value(); }
};

/// Max-priority queue; equal priorities pop in insertion order.
template <class T>
class PrioritizedQueue {
 public:
  void push(T item, double priority) { heap_.push(Entry{priority, next_++, std::move(item)}); }

  /// Removes and returns the top entry with its priority.
  std::pair<T, double> pop() {
    Entry top = heap_.top();
    heap_.pop();
    return {std::move(top.item), top.priority};
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Entry {
    double priority;
    std::uint64_t ordinal;
    T item;
  };
  struct Lower {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.priority != b.priority) return a.priority < b.priority;
      return a.ordinal > b.ordinal;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Lower> heap_;
  std::uint64_t next_ = 0;
};

/// Checks the first prev_index + n words of Sigma* in shortlex order and
/// returns the first with |f_A(w) - f_R(w)| > e.
inline EqResult bfs_eq(const Oracle& oracle, const Wfa& wfa, double e, std::size_t n,
                       std::size_t prev_index = 0) {
  if (n < 1) throw Error("bfs_eq: budget must be at least 1");
  if (!(oracle.alphabet() == wfa.alphabet())) throw AlphabetError("bfs_eq: oracle and hypothesis alphabets differ");
  const std::size_t limit = prev_index + n;
  EqResult res;
  res.reason = EqReason::budget_exhausted;
  std::size_t index = 0;
  for_each_word(wfa.alphabet().size(), std::numeric_limits<std::size_t>::max() / 2, [&](const Word& w) {
    if (index >= limit) return false;
    const double fr = oracle.output(w);
    const double fa = wfa.weight(w);
    if (std::abs(fa - fr) > e) {
      res.counterexample = Counterexample{w, fr, fa};
      res.reason = EqReason::counterexample;
      res.index = index;
      ++index;
      return false;
    }
    ++index;
    return true;
  });
  res.examined = index;
  return res;
}

enum class Consistency { ok, ng };

/// NG iff some visited h' has delta_A(h') not ~ p(delta_R(h')) while
/// p(delta_R(h')) ~ p(delta_R(h)).
inline Consistency consistent(const WfaConfig& p_h, std::span<const WfaConfig> visited_delta_a,
                              std::span<const WfaConfig> visited_p, const Vector& beta, double e) {
  if (visited_delta_a.size() != visited_p.size()) throw DimensionError("consistent: visited lists differ in length");
  for (std::size_t i = 0; i < visited_p.size(); ++i)
    if (!close_rel(beta, visited_delta_a[i], visited_p[i], e) && close_rel(beta, visited_p[i], p_h, e))
      return Consistency::ng;
  return Consistency::ok;
}

/// Minimum Euclidean distance from p_h to the abstracted visited points
/// (h itself excluded by the caller); +inf when there are none.
inline double priority_of(const WfaConfig& p_h, std::span<const WfaConfig> others) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : others) best = std::min(best, (x - p_h).norm());
  return best;
}

/// How the neighborhood count #vn treats visited words whose abstracted
/// points coincide exactly.
enum class NeighborCount {
  visited_words,    // count visited words
  distinct_points,  // count points of the image set p(delta_R(visited))
};

struct SearchParams {
  double e = 0.05;
  std::size_t concentration = 5;  // M
  std::size_t max_length = 20;    // L
  std::size_t max_pops = 100000;
  RegressorSettings regressor;
  NeighborCount neighbor_count = NeighborCount::distinct_points;
};

namespace detail {

struct SearchNode {
  Word word;
  Oracle::State oracle_state;
  WfaConfig hypothesis_config;
};

inline Json word_json(const Alphabet& a, const Word& w) { return a.names(w); }

struct RowHash {
  std::size_t operator()(const WfaConfig& x) const noexcept {
    std::size_t h = static_cast<std::size_t>(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double v = x[i] == 0.0 ? 0.0 : x[i];  // -0 and +0 coincide
      h ^= std::hash<double>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct RowEq {
  bool operator()(const WfaConfig& a, const WfaConfig& b) const { return a == b; }
};

inline Json priority_json(double pr) { return std::isfinite(pr) ? Json(pr) : Json(nullptr); }

// Visited words grouped by their (p(delta_R), delta_A) pair. The consistency
// check, the priority and the neighborhood count only depend on these pairs,
// and on automata with repeating configurations there are far fewer pairs
// than words.
class VisitedPairs {
 public:
  void clear() {
    index_.clear();
    p_.clear();
    a_.clear();
    count_.clear();
  }

  void add(const WfaConfig& p, const WfaConfig& a) {
    WfaConfig key(p.size() + a.size());
    key << p, a;
    auto [it, fresh] = index_.try_emplace(std::move(key), p_.size());
    if (fresh) {
      p_.push_back(p);
      a_.push_back(a);
      count_.push_back(0);
    }
    ++count_[it->second];
  }

  std::span<const WfaConfig> images() const { return p_; }
  std::span<const WfaConfig> hypothesis() const { return a_; }

  std::size_t words_near(const WfaConfig& ph, const Vector& beta, double e) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < p_.size(); ++i)
      if (close_rel(beta, p_[i], ph, e)) n += count_[i];
    return n;
  }

  std::size_t points_near(const WfaConfig& ph, const Vector& beta, double e) const {
    std::unordered_set<WfaConfig, RowHash, RowEq> seen;
    for (const auto& x : p_)
      if (close_rel(beta, x, ph, e)) seen.insert(x);
    return seen.size();
  }

 private:
  std::unordered_map<WfaConfig, std::size_t, RowHash, RowEq> index_;
  std::vector<WfaConfig> p_, a_;
  std::vector<std::size_t> count_;
};

}  // namespace detail

/// Regression-guided best-first counterexample search. When `trace` is set,
/// one JSON object per pop is written to it.
inline EqResult regression_eq(const Oracle& oracle, const Wfa& wfa, const SearchParams& params,
                              std::ostream* trace = nullptr) {
  if (!(params.e > 0.0)) throw Error("regression_eq: e must be positive");
  if (params.concentration < 1 || params.max_length < 1) throw Error("regression_eq: M and L must be >= 1");
  if (!(oracle.alphabet() == wfa.alphabet()))
    throw AlphabetError("regression_eq: oracle and hypothesis alphabets differ");

  const Alphabet& sigma = wfa.alphabet();
  const Vector& beta = wfa.beta();
  const double e = params.e;
  const RbfKernel kernel{params.regressor.length_scale};

  Regressor p = Regressor::constant(wfa.initial().transpose());
  std::vector<Vector> visited_r;       // delta_R(h')
  std::vector<WfaConfig> visited_a;    // delta_A(h')
  detail::VisitedPairs pairs;          // (p(delta_R(h')), delta_A(h')) under the current p

  PrioritizedQueue<detail::SearchNode> queue;
  queue.push({Word{}, oracle.start(), wfa.initial()}, std::numeric_limits<double>::infinity());

  EqResult res;
  while (!queue.empty()) {
    if (res.examined >= params.max_pops) {
      res.reason = EqReason::budget_exhausted;
      return res;
    }
    auto [h, popped_priority] = queue.pop();
    ++res.examined;
    Json event;
    if (trace) {
      event = {{"event", "pop"}, {"word", detail::word_json(sigma, h.word)},
               {"priority", detail::priority_json(popped_priority)}};
    }
    if (h.word.size() > params.max_length) {
      if (trace) {
        event["result"] = "length-heuristic";
        *trace << event.dump() << '\n';
      }
      res.reason = EqReason::length_heuristic;
      return res;
    }
    const double fr = oracle.output(h.word);
    const double fa = wfa.output(h.hypothesis_config);
    if (std::abs(fr - fa) >= e) {
      if (trace) {
        event["result"] = "counterexample";
        event["gap"] = std::abs(fr - fa);
        *trace << event.dump() << '\n';
      }
      res.reason = EqReason::counterexample;
      res.counterexample = Counterexample{h.word, fr, fa};
      return res;
    }

    const Vector xr = oracle.read_config(h.oracle_state);
    WfaConfig ph = p.predict(xr).transpose();
    bool refit = false;
    if (consistent(ph, pairs.hypothesis(), pairs.images(), beta, e) == Consistency::ng) {
      const auto n = static_cast<Eigen::Index>(visited_r.size() + 1);
      Matrix xs(n, xr.size()), ys(n, static_cast<Eigen::Index>(wfa.n_states()));
      for (Eigen::Index i = 0; i + 1 < n; ++i) {
        xs.row(i) = visited_r[static_cast<std::size_t>(i)].transpose();
        ys.row(i) = visited_a[static_cast<std::size_t>(i)];
      }
      xs.row(n - 1) = xr.transpose();
      ys.row(n - 1) = h.hypothesis_config;
      p = Regressor::fit(xs, ys, kernel, params.regressor.ridge);
      const Matrix images = p.predict_rows(xs);
      pairs.clear();
      for (Eigen::Index i = 0; i + 1 < n; ++i) pairs.add(images.row(i), visited_a[static_cast<std::size_t>(i)]);
      ph = images.row(n - 1);
      ++res.refits;
      refit = true;
    }

    const double pr = priority_of(ph, pairs.images());  // visited does not contain h yet
    visited_r.push_back(xr);
    visited_a.push_back(h.hypothesis_config);
    pairs.add(ph, h.hypothesis_config);

    const std::size_t vn = params.neighbor_count == NeighborCount::visited_words ? pairs.words_near(ph, beta, e)
                                                                                  : pairs.points_near(ph, beta, e);
    if (vn < 1) throw Error("regression_eq: internal error, neighborhood count below one");

    const bool expand = vn <= params.concentration;
    if (expand) {
      for (Symbol s = 0; s < sigma.size(); ++s)
        queue.push({append(h.word, s), oracle.advance(h.oracle_state, s), wfa.step(h.hypothesis_config, s)}, pr);
    }
    if (trace) {
      event["vn"] = vn;
      event["refit"] = refit;
      event["expanded"] = expand;
      event["child_priority"] = detail::priority_json(pr);
      *trace << event.dump() << '\n';
    }
  }
  res.reason = EqReason::queue_exhausted;
  return res;
}

}  // namespace wfax
