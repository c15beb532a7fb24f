#pragma once

// Outer extraction loop: close the table at the current rank tolerance,
// synthesize a hypothesis, ask an equivalence query, then either add the
// counterexample to the table or, when the same counterexample came back
// twice in a row, multiply the tolerance by the decay rate.

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wfax/eq_search.hpp"
#include "wfax/obs_table.hpp"
#include "wfax/oracle.hpp"
#include "wfax/wfa_io.hpp"

namespace wfax {

enum class EqEngine { regression, bfs };

struct ExtractionConfig {
  double e = 0.05;
  std::size_t concentration = 5;  // M
  std::size_t max_length = 20;    // L
  double tau0 = 1e-2;
  double decay = 0.5;  // r
  EqEngine engine = EqEngine::regression;
  std::size_t bfs_budget = 500;  // n of the breadth-first baseline
  std::size_t max_rounds = 50;
  std::size_t max_pops = 100000;
  RegressorSettings regressor;
  NeighborCount neighbor_count = NeighborCount::distinct_points;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(e > 0.0)) throw Error("config: e must be positive");
    if (!(tau0 > 0.0)) throw Error("config: tau0 must be positive");
    if (!(decay > 0.0 && decay < 1.0)) throw Error("config: decay rate must lie in (0, 1)");
    if (concentration < 1) throw Error("config: M must be at least 1");
    if (max_length < 1) throw Error("config: L must be at least 1");
    if (bfs_budget < 1) throw Error("config: bfs budget must be at least 1");
    if (!(regressor.length_scale > 0.0) || !(regressor.ridge >= 0.0))
      throw Error("config: invalid regressor settings");
  }

  SearchParams search_params() const {
    return SearchParams{e, concentration, max_length, max_pops, regressor, neighbor_count};
  }
};

struct RoundRecord {
  std::size_t round = 0;
  double tau = 0.0;  // tolerance the hypothesis of this round was built with
  std::size_t states = 0;
  std::size_t access = 0;
  std::size_t tests = 0;
  std::size_t promotions = 0;
  EqReason reason = EqReason::queue_exhausted;
  std::optional<Counterexample> counterexample;
  std::size_t eq_examined = 0;
  std::size_t refits = 0;
  bool decayed = false;  // tau was multiplied by the decay rate after this round
  bool table_grew = false;
};

struct PhaseTimes {
  double close_s = 0.0;
  double synthesize_s = 0.0;
  double equivalence_s = 0.0;
};

class Learner;

struct ExtractionReport {
  std::optional<Wfa> wfa;
  std::size_t rounds = 0;
  bool converged = false;
  std::vector<Word> counterexamples;
  /// tau in force at the start of every round, then the final value.
  std::vector<double> tau_trajectory;
  std::vector<RoundRecord> history;
  QueryStats queries;
  PhaseTimes times;
  std::shared_ptr<Learner> session;
};

class Learner {
 public:
  Learner(OraclePtr oracle, ExtractionConfig cfg)
      : cfg_(cfg), oracle_(std::make_shared<CachedOracle>(std::move(oracle))), table_(oracle_), tau_(cfg.tau0) {
    cfg_.validate();
    tau_log_.push_back(tau_);
  }

  const ExtractionConfig& config() const { return cfg_; }
  const ObservationTable& table() const { return table_; }
  const CachedOracle& oracle() const { return *oracle_; }
  double tau() const { return tau_; }
  bool converged() const { return converged_; }
  std::size_t rounds() const { return history_.size(); }

  /// Runs up to `max_rounds` further equivalence-query rounds (stops early
  /// on an equivalent answer). Optional trace sink for regression searches.
  void run(std::size_t max_rounds, std::ostream* trace = nullptr) {
    using clock = std::chrono::steady_clock;
    auto secs = [](clock::time_point a, clock::time_point b) { return std::chrono::duration<double>(b - a).count(); };
    for (std::size_t k = 0; k < max_rounds && !converged_; ++k) {
      RoundRecord rec;
      rec.round = history_.size();
      rec.tau = tau_;

      auto t0 = clock::now();
      rec.promotions = table_.close(tau_);
      auto t1 = clock::now();
      hypothesis_ = table_.synthesize_unchecked(tau_);
      auto t2 = clock::now();
      times_.close_s += secs(t0, t1);
      times_.synthesize_s += secs(t1, t2);
      rec.states = hypothesis_->n_states();

      EqResult eq;
      if (cfg_.engine == EqEngine::bfs) {
        eq = bfs_eq(*oracle_, *hypothesis_, cfg_.e, cfg_.bfs_budget, bfs_index_);
      } else {
        if (trace) *trace << Json{{"event", "round"}, {"round", rec.round}, {"tau", tau_}}.dump() << '\n';
        eq = regression_eq(*oracle_, *hypothesis_, cfg_.search_params(), trace);
      }
      times_.equivalence_s += secs(t2, clock::now());
      rec.reason = eq.reason;
      rec.eq_examined = eq.examined;
      rec.refits = eq.refits;
      rec.counterexample = eq.counterexample;

      if (eq.equivalent()) {
        converged_ = true;
      } else {
        const Word& w = eq.counterexample->word;
        counterexamples_.push_back(w);
        if (previous_ && *previous_ == w) {
          tau_ *= cfg_.decay;
          rec.decayed = true;
        } else {
          rec.table_grew = table_.add_counterexample(w);
          if (cfg_.engine == EqEngine::bfs) bfs_index_ = eq.index;
        }
        previous_ = w;
      }
      rec.access = table_.access().size();
      rec.tests = table_.tests().size();
      history_.push_back(std::move(rec));
      tau_log_.push_back(tau_);
    }
  }

  ExtractionReport report(std::shared_ptr<Learner> self) const {
    ExtractionReport r;
    r.wfa = hypothesis_;
    r.rounds = history_.size();
    r.converged = converged_;
    r.counterexamples = counterexamples_;
    r.tau_trajectory = tau_log_;
    r.history = history_;
    r.queries = oracle_->stats();
    r.times = times_;
    r.session = std::move(self);
    return r;
  }

 private:
  ExtractionConfig cfg_;
  std::shared_ptr<CachedOracle> oracle_;
  ObservationTable table_;
  double tau_;
  std::optional<Wfa> hypothesis_;
  std::optional<Word> previous_;
  std::size_t bfs_index_ = 0;
  bool converged_ = false;
  std::vector<Word> counterexamples_;
  std::vector<double> tau_log_;
  std::vector<RoundRecord> history_;
  PhaseTimes times_;
};

inline ExtractionReport extract(OraclePtr oracle, const ExtractionConfig& cfg, std::ostream* trace = nullptr) {
  auto session = std::make_shared<Learner>(std::move(oracle), cfg);
  session->run(cfg.max_rounds, trace);
  return session->report(session);
}

/// Continues a previous extraction for up to `more_rounds` rounds. When an
/// oracle is given it must have the same alphabet as the original one.
inline ExtractionReport resume(const ExtractionReport& prev, std::size_t more_rounds,
                               const Oracle* oracle = nullptr, std::ostream* trace = nullptr) {
  if (!prev.session) throw Error("resume: report carries no learner session");
  if (oracle && !(oracle->alphabet() == prev.session->oracle().alphabet()))
    throw AlphabetError("resume: oracle alphabet differs from the one the run started with");
  prev.session->run(more_rounds, trace);
  return prev.session->report(prev.session);
}

inline Json to_json(const ExtractionReport& r) {
  Json j;
  const Alphabet* sigma = r.wfa ? &r.wfa->alphabet() : nullptr;
  auto word = [&](const Word& w) { return sigma ? Json(sigma->names(w)) : Json(w); };
  j["converged"] = r.converged;
  j["rounds"] = r.rounds;
  j["states"] = r.wfa ? r.wfa->n_states() : 0;
  j["tau_trajectory"] = r.tau_trajectory;
  Json cex = Json::array();
  for (const auto& w : r.counterexamples) cex.push_back(word(w));
  j["counterexamples"] = cex;
  j["queries"] = {{"membership", r.queries.membership_queries},
                  {"distinct_words", r.queries.distinct_words},
                  {"config", r.queries.config_queries}};
  j["seconds"] = {{"close", r.times.close_s}, {"synthesize", r.times.synthesize_s},
                  {"equivalence", r.times.equivalence_s}};
  Json hist = Json::array();
  for (const auto& h : r.history) {
    Json e = {{"round", h.round},       {"tau", h.tau},           {"states", h.states},
              {"access", h.access},     {"tests", h.tests},       {"promotions", h.promotions},
              {"result", to_string(h.reason)}, {"examined", h.eq_examined}, {"refits", h.refits},
              {"decayed", h.decayed},   {"table_grew", h.table_grew}};
    if (h.counterexample) {
      e["counterexample"] = word(h.counterexample->word);
      e["oracle_value"] = h.counterexample->oracle_value;
      e["hypothesis_value"] = h.counterexample->hypothesis_value;
    }
    hist.push_back(std::move(e));
  }
  j["history"] = hist;
  if (r.wfa) j["wfa"] = to_json(*r.wfa);
  return j;
}

}  // namespace wfax
