#pragma once

// Experiment inputs: random automata with outputs in [0, 1], word samplers
// and the weighted-parentheses dataset.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "wfax/wfa.hpp"
#include "wfax/wfa_io.hpp"
#include "wfax/wparen.hpp"

namespace wfax {

using Rng = std::mt19937_64;

/// Random automaton whose weights lie in [0, 1] for every word: alpha on the
/// probability simplex, every transition row a Dirichlet(1, ..., 1) sample
/// scaled by U[0.8, 1] (substochastic), beta entries U[0, 1].
inline Wfa random_wfa(const Alphabet& alphabet, std::size_t n_states, std::uint64_t seed) {
  if (n_states < 1) throw Error("random_wfa: needs at least one state");
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0), scale(0.8, 1.0);
  const auto n = static_cast<Eigen::Index>(n_states);
  auto simplex = [&](Eigen::Index len) {
    Vector v(len);
    for (Eigen::Index i = 0; i < len; ++i) v[i] = expo(rng);
    return Vector(v / v.sum());
  };
  Vector alpha = simplex(n);
  std::vector<Matrix> trans;
  for (std::size_t s = 0; s < alphabet.size(); ++s) {
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) m.row(r) = simplex(n).transpose() * scale(rng);
    trans.push_back(std::move(m));
  }
  Vector beta(n);
  for (Eigen::Index i = 0; i < n; ++i) beta[i] = unit(rng);
  return Wfa(alphabet, std::move(alpha), std::move(beta), std::move(trans));
}

/// Lengths uniform on 0..max_len, symbols i.i.d. uniform.
inline std::vector<Word> sample_uniform(std::size_t alphabet_size, std::size_t max_len, std::size_t count,
                                        std::uint64_t seed) {
  if (alphabet_size == 0) throw Error("sample_uniform: empty alphabet");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<Symbol> sym(0, static_cast<Symbol>(alphabet_size - 1));
  std::vector<Word> out(count);
  for (auto& w : out) {
    w.resize(len(rng));
    for (auto& s : w) s = sym(rng);
  }
  return out;
}

/// True when every symbol's occurrences form one contiguous block.
inline bool is_block_word(const Word& w) {
  std::vector<Symbol> closed;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && w[i] == w[i - 1]) continue;
    if (std::find(closed.begin(), closed.end(), w[i]) != closed.end()) return false;
    closed.push_back(w[i]);
  }
  return true;
}

/// Words made of runs of pairwise distinct symbols. The length is uniform on
/// 0..max_len; the number of runs is `blocks` when given, otherwise uniform
/// on 1..min(|Sigma|, length). Run lengths are a uniform composition of the
/// length into that many positive parts.
inline std::vector<Word> sample_block(std::size_t alphabet_size, std::size_t max_len, std::size_t count,
                                      std::uint64_t seed, std::optional<std::size_t> blocks = std::nullopt) {
  if (alphabet_size == 0) throw Error("sample_block: empty alphabet");
  if (blocks && *blocks > alphabet_size)
    throw Error("sample_block: " + std::to_string(*blocks) + " blocks requested but the alphabet has only " +
                std::to_string(alphabet_size) + " symbols");
  if (blocks && *blocks > max_len) throw Error("sample_block: more blocks than max_len allows");
  Rng rng(seed);
  std::vector<Symbol> symbols(alphabet_size);
  std::iota(symbols.begin(), symbols.end(), Symbol{0});
  std::vector<Word> out;
  out.reserve(count);
  while (out.size() < count) {
    std::size_t len = std::uniform_int_distribution<std::size_t>(blocks.value_or(0), max_len)(rng);
    if (len == 0) {
      out.emplace_back();
      continue;
    }
    const std::size_t k =
        blocks ? *blocks : std::uniform_int_distribution<std::size_t>(1, std::min(alphabet_size, len))(rng);
    std::shuffle(symbols.begin(), symbols.end(), rng);
    // k-1 distinct cut points in 1..len-1
    std::vector<std::size_t> cuts(len - 1);
    std::iota(cuts.begin(), cuts.end(), std::size_t{1});
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(k - 1);
    cuts.push_back(0);
    cuts.push_back(len);
    std::sort(cuts.begin(), cuts.end());
    Word w;
    for (std::size_t b = 0; b < k; ++b) w.insert(w.end(), cuts[b + 1] - cuts[b], symbols[b]);
    out.push_back(std::move(w));
  }
  return out;
}

/// Uniformly random balanced parenthesis word with `half` pairs, drawn as a
/// lattice path and fixed by the cycle lemma: a random arrangement of
/// `half` up-steps and `half + 1` down-steps has exactly one rotation whose
/// proper prefixes never dip below zero; dropping its final down-step gives
/// a Dyck path.
inline Word random_dyck(std::size_t half, Rng& rng) {
  std::vector<int> steps(half, +1);
  steps.insert(steps.end(), half + 1, -1);
  std::shuffle(steps.begin(), steps.end(), rng);
  // rotate to start just after the first position of the minimum prefix sum
  int sum = 0, best = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    sum += steps[i];
    if (sum < best) {
      best = sum;
      start = i + 1;
    }
  }
  std::rotate(steps.begin(), steps.begin() + static_cast<long>(start % steps.size()), steps.end());
  Word w;
  w.reserve(2 * half);
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) w.push_back(steps[i] > 0 ? kOpen : kClose);
  return w;
}

/// `count` balanced words over {(, )}; half-length uniform on 1..10.
inline std::vector<Word> gen_balanced(std::size_t count, std::uint64_t seed, std::size_t min_half = 1,
                                      std::size_t max_half = 10) {
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> half(min_half, max_half);
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_dyck(half(rng), rng));
  return out;
}

/// Inserts a Geometric(0.5) number of digits (capped at the word length) at
/// uniform positions.
inline Word insert_digits(Word w, Rng& rng) {
  std::geometric_distribution<std::size_t> geo(0.5);
  std::uniform_int_distribution<Symbol> digit(2, 11);
  const std::size_t k = std::min(geo(rng), w.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pos(0, w.size());
    w.insert(w.begin() + static_cast<long>(pos(rng)), digit(rng));
  }
  return w;
}

inline Word insert_digits(Word w, std::uint64_t seed) {
  Rng rng(seed);
  return insert_digits(std::move(w), rng);
}

/// Applies duplicate / delete / swap-adjacent mutations, one uniformly chosen
/// rule at a time, until a fair coin comes up heads. Rules that do not apply
/// to the current word are redrawn; the empty word is returned unchanged.
inline Word mutate(Word w, Rng& rng) {
  std::uniform_int_distribution<int> rule(0, 2);
  std::bernoulli_distribution heads(0.5);
  do {
    if (w.empty()) return w;
    int r = rule(rng);
    while (r == 2 && w.size() < 2) r = rule(rng);
    if (r == 0) {
      const auto i = std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng);
      w.insert(w.begin() + static_cast<long>(i), w[i]);
    } else if (r == 1) {
      const auto i = std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng);
      w.erase(w.begin() + static_cast<long>(i));
    } else {
      const auto i = std::uniform_int_distribution<std::size_t>(0, w.size() - 2)(rng);
      std::swap(w[i], w[i + 1]);
    }
  } while (!heads(rng));
  return w;
}

inline Word mutate(Word w, std::uint64_t seed) {
  Rng rng(seed);
  return mutate(std::move(w), rng);
}

struct LabeledWord {
  Word word;
  double value = 0.0;
};

struct Dataset {
  Alphabet alphabet;
  std::vector<LabeledWord> items;
};

struct WparenSplit {
  Dataset train;
  Dataset test;
};

/// 5000 balanced words with digits plus 5000 mutated words with digits,
/// labeled by wparen_value, shuffled and split 9000 / 1000.
inline WparenSplit build_wparen_dataset(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledWord> all;
  all.reserve(10000);
  for (const Word& w : gen_balanced(5000, rng()))
    all.push_back({insert_digits(w, rng), 0.0});
  for (const Word& w : gen_balanced(5000, rng()))
    all.push_back({insert_digits(mutate(w, rng), rng), 0.0});
  for (auto& item : all) item.value = wparen_value(item.word);
  std::shuffle(all.begin(), all.end(), rng);
  WparenSplit out{{wparen_alphabet(), {}}, {wparen_alphabet(), {}}};
  out.train.items.assign(all.begin(), all.begin() + 9000);
  out.test.items.assign(all.begin() + 9000, all.end());
  return out;
}

inline Dataset label(const Alphabet& alphabet, const std::vector<Word>& words, const Wfa& target) {
  Dataset d{alphabet, {}};
  d.items.reserve(words.size());
  for (const auto& w : words) d.items.push_back({w, target.weight(w)});
  return d;
}

/// JSON lines, one {"w": [symbols...], "y": value} per item.
inline std::string to_jsonl(const Dataset& d) {
  std::string out;
  for (const auto& item : d.items) {
    Json j = {{"w", d.alphabet.names(item.word)}, {"y", item.value}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

/// Reads JSON lines against a known alphabet. A missing "y" is read as 0.
inline Dataset from_jsonl(const std::string& text, const Alphabet& alphabet) {
  Dataset d{alphabet, {}};
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error&) {
      throw SchemaError("dataset line " + std::to_string(line_no) + ": invalid JSON");
    }
    const Json& w = detail::require_key(j, "w");
    if (!w.is_array()) throw SchemaError("dataset line " + std::to_string(line_no) + ": \"w\" must be an array");
    std::vector<std::string> names;
    for (const auto& s : w) {
      if (!s.is_string()) throw SchemaError("dataset line " + std::to_string(line_no) + ": symbols must be strings");
      names.push_back(s.get<std::string>());
    }
    LabeledWord item;
    try {
      item.word = alphabet.parse(names);
    } catch (const AlphabetError& e) {
      throw SchemaError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("y")) item.value = detail::finite_number(j.at("y"), "dataset line " + std::to_string(line_no));
    d.items.push_back(std::move(item));
  }
  return d;
}

/// Keeps the first `count` words of `candidates` that do not occur in
/// `train` (and are not repeated among themselves).
inline std::vector<Word> disjoint_from(const std::vector<Word>& candidates, const std::vector<Word>& train,
                                       std::size_t count) {
  std::unordered_set<Word, WordHash> seen(train.begin(), train.end());
  std::vector<Word> out;
  for (const auto& w : candidates) {
    if (out.size() >= count) break;
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

}  // namespace wfax
