#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wfax/error.hpp"

namespace wfax {

/// Position of a symbol in its alphabet.
using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    // FNV-1a over the symbol indices
    std::uint64_t h = 1469598103934665603ULL;
    for (Symbol s : w) {
      h ^= static_cast<std::uint64_t>(s) + 1;
      h *= 1099511628211ULL;
    }
    h ^= w.size();
    return static_cast<std::size_t>(h);
  }
};

/// Shortlex order: shorter words first, then lexicographic by symbol index.
inline bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline Word concat(const Word& a, const Word& b) {
  Word out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Word append(Word w, Symbol s) {
  w.push_back(s);
  return w;
}

/// Ordered set of distinct symbol names. Symbol index = position.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw AlphabetError("alphabet must not be empty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].empty()) throw AlphabetError("alphabet symbols must be nonempty strings");
      auto [it, fresh] = index_.emplace(symbols_[i], static_cast<Symbol>(i));
      if (!fresh) throw AlphabetError("duplicate alphabet symbol '" + symbols_[i] + "'");
    }
  }

  /// Alphabet {a, b, c, ...} of the given size; falls back to s0, s1, ...
  /// beyond 26 symbols.
  static Alphabet letters(std::size_t size) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < size; ++i)
      s.push_back(size <= 26 ? std::string(1, static_cast<char>('a' + i)) : "s" + std::to_string(i));
    return Alphabet(std::move(s));
  }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& name(Symbol s) const { return symbols_.at(s); }

  Symbol index(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw AlphabetError("unknown symbol '" + std::string(name) + "'");
    return it->second;
  }

  bool contains(Symbol s) const { return s < symbols_.size(); }

  void check(const Word& w) const {
    for (Symbol s : w)
      if (!contains(s))
        throw AlphabetError("symbol index " + std::to_string(s) + " outside alphabet of size " +
                            std::to_string(size()));
  }

  Word parse(const std::vector<std::string>& names) const {
    Word w;
    w.reserve(names.size());
    for (const auto& n : names) w.push_back(index(n));
    return w;
  }

  /// Reads every character as one symbol; only meaningful for alphabets of
  /// single-character symbols.
  Word parse(std::string_view chars) const {
    Word w;
    w.reserve(chars.size());
    for (char c : chars) w.push_back(index(std::string_view(&c, 1)));
    return w;
  }

  std::vector<std::string> names(const Word& w) const {
    std::vector<std::string> out;
    out.reserve(w.size());
    for (Symbol s : w) out.push_back(name(s));
    return out;
  }

  /// Concatenated symbol names, space separated when some symbol is longer
  /// than one character. The empty word renders as "".
  std::string format(const Word& w) const {
    const bool single = std::all_of(symbols_.begin(), symbols_.end(),
                                    [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!single && i > 0) out += ' ';
      out += name(w[i]);
    }
    return out;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Symbol> index_;
};

/// Visits every word of length <= max_len in shortlex order. The visitor
/// returns false to stop early.
template <class Visitor>
void for_each_word(std::size_t alphabet_size, std::size_t max_len, Visitor&& visit) {
  Word w;
  for (std::size_t len = 0; len <= max_len; ++len) {
    w.assign(len, 0);
    while (true) {
      if (!visit(static_cast<const Word&>(w))) return;
      // odometer increment; a carry out of position 0 ends this length
      bool carry = true;
      for (std::size_t pos = len; carry && pos > 0;) {
        --pos;
        if (++w[pos] < alphabet_size)
          carry = false;
        else
          w[pos] = 0;
      }
      if (carry) break;
    }
  }
}

}  // namespace wfax
