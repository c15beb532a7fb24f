#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "support.hpp"

using namespace wfax;

namespace {

std::size_t count_edges(const std::string& dot) {
  std::size_t n = 0;
  for (std::size_t pos = 0; (pos = dot.find("->", pos)) != std::string::npos; ++pos) ++n;
  return n;
}

WfaConfig row(std::initializer_list<double> xs) {
  WfaConfig r(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) r[i++] = x;
  return r;
}

}  // namespace

TEST(Alphabet, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(Alphabet(std::vector<std::string>{}), AlphabetError);
  EXPECT_THROW(Alphabet({"a", "b", "a"}), AlphabetError);
  EXPECT_THROW(Alphabet({"a", ""}), AlphabetError);
}

TEST(Alphabet, ParseAndFormat) {
  const Alphabet s = Alphabet::letters(3);
  EXPECT_EQ(s.parse(std::string_view("cab")), (Word{2, 0, 1}));
  EXPECT_EQ(s.format({2, 0, 1}), "cab");
  EXPECT_THROW(s.parse(std::string_view("ad")), AlphabetError);
  EXPECT_THROW(s.check({0, 3}), AlphabetError);
  const Alphabet multi({"x1", "y"});
  EXPECT_EQ(multi.format({0, 1}), "x1 y");
}

TEST(Alphabet, ShortlexEnumeration) {
  std::vector<Word> seen;
  for_each_word(2, 2, [&](const Word& w) {
    seen.push_back(w);
    return true;
  });
  const std::vector<Word> expected = {{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_EQ(seen, expected);
  for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_TRUE(shortlex_less(seen[i - 1], seen[i]));
}

TEST(Alphabet, EnumerationStopsEarly) {
  std::size_t n = 0;
  for_each_word(3, 10, [&](const Word&) { return ++n < 5; });
  EXPECT_EQ(n, 5u);
}

TEST(Wfa, ExampleConfigurations) {
  const Wfa a = example_wfa();
  const Alphabet& s = a.alphabet();
  EXPECT_EQ(a.configuration(s.parse(std::string_view("ba"))), row({50, -14, 7}));
  EXPECT_EQ(a.configuration({}), row({1, 2, 3}));
  EXPECT_EQ(a.configuration(s.parse(std::string_view("a"))), row({7, 14, -1}));
}

TEST(Wfa, ExampleWeights) {
  const Wfa a = example_wfa();
  const Alphabet& s = a.alphabet();
  EXPECT_EQ(a.weight(s.parse(std::string_view("ba"))), 21.0);
  EXPECT_EQ(a.weight({}), 1.0);
  EXPECT_EQ(a.weight(s.parse(std::string_view("a"))), -15.0);
}

TEST(Wfa, Step) {
  const Wfa a = example_wfa();
  EXPECT_EQ(a.step(a.initial(), 1), row({-7, 19, 0}));
  EXPECT_EQ(a.step(WfaConfig::Zero(3), 0), WfaConfig::Zero(3));
  EXPECT_THROW(a.step(a.initial(), 2), AlphabetError);
  EXPECT_THROW(a.step(WfaConfig::Zero(2), 0), DimensionError);
}

TEST(Wfa, UnknownSymbolThrows) { EXPECT_THROW(example_wfa().weight({0, 5}), AlphabetError); }

TEST(Wfa, ConstructorValidatesShapes) {
  const Alphabet s = Alphabet::letters(2);
  EXPECT_THROW(Wfa(s, Vector::Ones(2), Vector::Ones(3), {Matrix::Zero(2, 2), Matrix::Zero(2, 2)}), DimensionError);
  EXPECT_THROW(Wfa(s, Vector::Ones(2), Vector::Ones(2), {Matrix::Zero(2, 2)}), DimensionError);
  EXPECT_THROW(Wfa(s, Vector::Ones(2), Vector::Ones(2), {Matrix::Zero(2, 2), Matrix::Zero(3, 2)}), DimensionError);
  EXPECT_THROW(Wfa(s, Vector(0), Vector(0), {Matrix(0, 0), Matrix(0, 0)}), DimensionError);
  Vector bad = Vector::Ones(2);
  bad[1] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Wfa(s, bad, Vector::Ones(2), {Matrix::Zero(2, 2), Matrix::Zero(2, 2)}), NumericError);
}

TEST(Wfa, WeightEqualsConfigurationDotFinal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Wfa a = random_wfa(Alphabet::letters(3), 4, seed);
    for (const Word& w : sample_uniform(3, 12, 50, seed + 100)) {
      const WfaConfig x = a.configuration(w);
      double dot = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) dot += x[i] * a.beta()[i];
      EXPECT_NEAR(a.weight(w), dot, 1e-12);
    }
  }
}

TEST(Wfa, StepFoldMatchesMatrixProduct) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Wfa a = random_wfa(Alphabet::letters(2), 5, seed);
    for (const Word& w : sample_uniform(2, 20, 30, seed + 7)) {
      Matrix prod = Matrix::Identity(5, 5);
      for (Symbol s : w) prod = prod * a.transition(s);
      const WfaConfig batch = a.alpha().transpose() * prod;
      EXPECT_LT((batch - a.configuration(w)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(CloseRel, Examples) {
  const Wfa a = example_wfa();
  const WfaConfig x = row({3, 1, 4});
  EXPECT_TRUE(close_rel(a, x, x, 0.05));
  EXPECT_TRUE(close_rel(a, x + row({100, 0, 0}), x, 0.05));
  EXPECT_FALSE(close_rel(a, x + row({0, 0.1, 0}), x, 0.05));
  EXPECT_THROW(close_rel(a, x, x, 0.0), NumericError);
}

TEST(CloseRel, StrictInequalityAtBoundary) {
  Vector beta(1);
  beta << 1.0;
  // sum = 0.25 = e^2 / |Q|
  EXPECT_FALSE(close_rel(beta, row({0.5}), row({0.0}), 0.5));
  EXPECT_TRUE(close_rel(beta, row({0.49}), row({0.0}), 0.5));
}

TEST(CloseRel, OutputGapBound) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1), pos(1e-3, 1);
  std::size_t accepted = 0;
  for (int rep = 0; rep < 20000; ++rep) {
    const Eigen::Index n = 1 + rep % 6;
    Vector beta(n);
    WfaConfig x(n), y(n);
    const double e = pos(rng);
    for (Eigen::Index i = 0; i < n; ++i) {
      beta[i] = u(rng);
      x[i] = u(rng);
      y[i] = x[i] + e * u(rng);
    }
    if (close_rel(beta, x, y, e)) {
      ++accepted;
      EXPECT_LT(std::abs((x - y).dot(beta.transpose())), e);
    }
  }
  EXPECT_GT(accepted, 1000u);
}

TEST(Prune, DropsSmallTransitions) {
  const Wfa p = prune(example_wfa(), 3.0);
  EXPECT_EQ(count_edges(export_dot(p)), 2u);
  EXPECT_EQ(p.alpha(), example_wfa().alpha());
}

TEST(WfaJson, RoundTrip) {
  const Wfa a = example_wfa();
  const Wfa b = load(save(a));
  EXPECT_EQ(b.alphabet(), a.alphabet());
  EXPECT_EQ(b.alpha(), a.alpha());
  EXPECT_EQ(b.beta(), a.beta());
  for (Symbol s = 0; s < 2; ++s) EXPECT_EQ(b.transition(s), a.transition(s));
  const Wfa r = random_wfa(Alphabet::letters(3), 4, 9);
  const Wfa r2 = load(save(r));
  for (Symbol s = 0; s < 3; ++s) EXPECT_EQ(r2.transition(s), r.transition(s));
}

TEST(WfaJson, SchemaErrors) {
  Json j = to_json(example_wfa());
  Json missing = j;
  missing.erase("beta");
  EXPECT_THROW(wfa_from_json(missing), SchemaError);
  Json shape = j;
  shape["transitions"]["a"] = Json::array({Json::array({1, 2}), Json::array({3, 4})});
  EXPECT_THROW(wfa_from_json(shape), Error);
  Json ragged = j;
  ragged["transitions"]["b"][1] = Json::array({1, 2});
  EXPECT_THROW(wfa_from_json(ragged), SchemaError);
  Json text = j;
  text["alpha"][0] = "x";
  EXPECT_THROW(wfa_from_json(text), SchemaError);
  Json extra = j;
  extra["transitions"]["c"] = j["transitions"]["a"];
  EXPECT_THROW(wfa_from_json(extra), SchemaError);
  EXPECT_THROW(load("{not json"), SchemaError);
}

TEST(Dot, ExampleEdgeCounts) {
  const Wfa a = example_wfa();
  EXPECT_EQ(count_edges(export_dot(a)), 10u);
  DotOptions high;
  high.weight_threshold = 10.0;
  EXPECT_EQ(count_edges(export_dot(a, high)), 0u);
  high.weight_threshold = 3.0;
  const std::string dot = export_dot(a, high);
  EXPECT_EQ(count_edges(dot), 2u);
  EXPECT_NE(dot.find("q2 -> q1 [label=\"a, 4\"]"), std::string::npos);
  EXPECT_NE(dot.find("q2 -> q1 [label=\"b, 4\"]"), std::string::npos);
}

TEST(Dot, NodeLabelsAndUnderline) {
  const std::string dot = export_dot(example_wfa());
  EXPECT_NE(dot.find("q0 [label=\"q0/1/0\", underline=\"initial\"]"), std::string::npos);
  EXPECT_NE(dot.find("q1 [label=\"q1/2/-1\", underline=\"initial,final\"]"), std::string::npos);
}

TEST(Dot, SingleStateZeroWfa) {
  const std::string dot = export_dot(Wfa::zero(Alphabet::letters(2), 1));
  EXPECT_EQ(count_edges(dot), 0u);
  EXPECT_TRUE(std::regex_search(dot, std::regex("q0 \\[label=\"q0/0/0\"\\];")));
  EXPECT_EQ(dot.find("q1"), std::string::npos);
}
