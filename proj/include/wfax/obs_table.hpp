#pragma once

// Observation table (Hankel block) for weighted L*. Rows are access words,
// columns are test words, entry (u, v) = f(uv). For every access word u and
// symbol s the extension row (f(u s v))_v is kept alongside.

#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "wfax/numerics.hpp"
#include "wfax/oracle.hpp"
#include "wfax/wfa.hpp"

namespace wfax {

class ObservationTable {
 public:
  /// Table with access = tests = [eps] and the single entry f(eps).
  explicit ObservationTable(OraclePtr oracle) : oracle_(std::move(oracle)) {
    const auto k = oracle_->alphabet().size();
    ext_.assign(k, Matrix(0, 0));
    entries_ = Matrix(0, 0);
    tests_.push_back({});
    test_set_.insert(Word{});
    promote({});
  }

  const Oracle& oracle() const { return *oracle_; }
  const OraclePtr& oracle_ptr() const { return oracle_; }
  const Alphabet& alphabet() const { return oracle_->alphabet(); }
  const std::vector<Word>& access() const { return access_; }
  const std::vector<Word>& tests() const { return tests_; }
  const Matrix& entries() const { return entries_; }
  /// Rows (f(u s v))_v for every access word u.
  const Matrix& extension(Symbol s) const { return ext_.at(s); }

  bool has_access(const Word& u) const { return access_set_.count(u) > 0; }
  bool has_test(const Word& v) const { return test_set_.count(v) > 0; }

  /// Adds one access row (and its extension rows). Returns false when the
  /// word is already an access word.
  bool promote(const Word& u) {
    alphabet().check(u);
    if (!access_set_.insert(u).second) return false;
    access_.push_back(u);
    const auto rows = static_cast<Eigen::Index>(access_.size());
    const auto cols = static_cast<Eigen::Index>(tests_.size());
    entries_.conservativeResize(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) entries_(rows - 1, c) = query(u, tests_[static_cast<std::size_t>(c)]);
    for (std::size_t s = 0; s < ext_.size(); ++s) {
      ext_[s].conservativeResize(rows, cols);
      const Word us = append(u, static_cast<Symbol>(s));
      for (Eigen::Index c = 0; c < cols; ++c) ext_[s](rows - 1, c) = query(us, tests_[static_cast<std::size_t>(c)]);
    }
    return true;
  }

  /// Adds the given test words that are not present yet. Returns the number
  /// of columns added.
  std::size_t add_tests(const std::vector<Word>& suffixes) {
    std::size_t added = 0;
    for (const Word& v : suffixes) {
      alphabet().check(v);
      if (!test_set_.insert(v).second) continue;
      tests_.push_back(v);
      ++added;
      const auto rows = static_cast<Eigen::Index>(access_.size());
      const auto cols = static_cast<Eigen::Index>(tests_.size());
      entries_.conservativeResize(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) entries_(r, cols - 1) = query(access_[static_cast<std::size_t>(r)], v);
      for (std::size_t s = 0; s < ext_.size(); ++s) {
        ext_[s].conservativeResize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
          ext_[s](r, cols - 1) = query(append(access_[static_cast<std::size_t>(r)], static_cast<Symbol>(s)), v);
      }
    }
    return added;
  }

  /// Adds every prefix of w as an access word and every suffix as a test
  /// word. Returns true when the table grew.
  bool add_counterexample(const Word& w) {
    bool grew = false;
    for (std::size_t i = 0; i <= w.size(); ++i) grew |= promote(Word(w.begin(), w.begin() + static_cast<long>(i)));
    std::vector<Word> suffixes;
    for (std::size_t i = 0; i <= w.size(); ++i) suffixes.emplace_back(w.begin() + static_cast<long>(i), w.end());
    grew |= add_tests(suffixes) > 0;
    return grew;
  }

  /// First extension u s (access order, then alphabet order) whose row raises
  /// the numeric rank of the access rows; nullopt when the table is closed.
  std::optional<Word> closedness_defect(double tau) const {
    const std::size_t base = matrix_rank(entries_, tau);
    const auto rows = entries_.rows();
    const auto cols = entries_.cols();
    Matrix stacked(rows + 1, cols);
    stacked.topRows(rows) = entries_;
    for (std::size_t u = 0; u < access_.size(); ++u) {
      for (std::size_t s = 0; s < ext_.size(); ++s) {
        Word us = append(access_[u], static_cast<Symbol>(s));
        if (has_access(us)) continue;  // its row is already one of the access rows
        stacked.row(rows) = ext_[s].row(static_cast<Eigen::Index>(u));
        if (matrix_rank(stacked, tau) > base) return us;
      }
    }
    return std::nullopt;
  }

  bool is_closed(double tau) const { return !closedness_defect(tau).has_value(); }

  /// Promotes defects until the table is closed at tau. Returns the number
  /// of promotions.
  std::size_t close(double tau) {
    std::size_t n = 0;
    while (auto d = closedness_defect(tau)) {
      promote(*d);
      ++n;
    }
    return n;
  }

  /// Builds the hypothesis from a closed table. With H = U S V^T and r the
  /// numeric rank at tau, states are the top-r right singular directions:
  /// P = H V_r, alpha = P[eps], beta = V_r[eps], A_s = P^+ H_s V_r.
  Wfa synthesize(double tau) const {
    if (auto d = closedness_defect(tau))
      throw Error("synthesize: table is not closed (defect at '" + alphabet().format(*d) + "')");
    return synthesize_unchecked(tau);
  }

  Wfa synthesize_unchecked(double tau) const {
    const SvdResult d = svd(entries_);
    const std::size_t r = numeric_rank(d.singular_values, tau);
    if (r == 0) {
      // all-zero table: one state, zero final weight
      Wfa z = Wfa::zero(alphabet(), 1);
      Vector a(1);
      a << 1.0;
      return Wfa(alphabet(), a, Vector::Zero(1), z.transitions());
    }
    const auto k = static_cast<Eigen::Index>(r);
    Matrix v = d.vt.topRows(k).transpose();  // |T| x r
    for (Eigen::Index c = 0; c < k; ++c) {
      Eigen::Index arg = 0;
      v.col(c).cwiseAbs().maxCoeff(&arg);
      if (v(arg, c) < 0) v.col(c) *= -1.0;
    }
    const Matrix p = entries_ * v;
    Vector alpha = p.row(0).transpose();  // access_[0] is eps
    Vector beta = v.row(0).transpose();   // tests_[0] is eps
    std::vector<Matrix> trans;
    trans.reserve(ext_.size());
    for (const auto& hs : ext_) trans.push_back(lstsq_cutoff(p, hs * v, tau).x);
    return Wfa(alphabet(), std::move(alpha), std::move(beta), std::move(trans));
  }

  /// Access words x test words as CSV; the empty word is written as "<eps>".
  std::string to_csv() const {
    auto fmt = [&](const Word& w) {
      std::string s = w.empty() ? "<eps>" : alphabet().format(w);
      if (s.find_first_of(",\"") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
      }
      return s;
    };
    std::ostringstream os;
    os.precision(17);
    os << "access";
    for (const auto& v : tests_) os << ',' << fmt(v);
    os << '\n';
    for (std::size_t r = 0; r < access_.size(); ++r) {
      os << fmt(access_[r]);
      for (Eigen::Index c = 0; c < entries_.cols(); ++c) os << ',' << entries_(static_cast<Eigen::Index>(r), c);
      os << '\n';
    }
    return os.str();
  }

 private:
  double query(const Word& u, const Word& v) const { return oracle_->output(concat(u, v)); }

  OraclePtr oracle_;
  std::vector<Word> access_;
  std::vector<Word> tests_;
  std::unordered_set<Word, WordHash> access_set_;
  std::unordered_set<Word, WordHash> test_set_;
  Matrix entries_;
  std::vector<Matrix> ext_;
};

}  // namespace wfax
