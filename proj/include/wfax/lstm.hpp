#pragma once

// Multi-layer LSTM scorer over one-hot inputs with a sigmoid output head.
//
// Gate blocks in w_x, w_h and b are stacked in the order
// (input, forget, cell candidate, output):
//   i = sigmoid(W_x[0:h] x + W_h[0:h] h + b[0:h])
//   f = sigmoid(...[h:2h]), g = tanh(...[2h:3h]), o = sigmoid(...[3h:4h])
//   c' = f * c + i * g,  h' = o * tanh(c')
// Layer l > 0 takes h of layer l-1 as input. Output = sigmoid(w . h_last + b).
//
// Weights file:
//   {"hidden": 50, "alphabet": [...],
//    "layers": [{"w_x": [[..]], "w_h": [[..]], "b": [..]}, ...],
//    "head": {"w": [..], "b": 0.0}}

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wfax/oracle.hpp"
#include "wfax/wfa_io.hpp"

namespace wfax {

struct LstmLayer {
  Matrix w_x;  // 4h x input
  Matrix w_h;  // 4h x h
  Vector b;    // 4h
};

struct RnnWeights {
  std::size_t hidden = 0;
  std::vector<LstmLayer> layers;
  Vector head_w;
  double head_b = 0.0;

  /// Throws DimensionError / NumericError on inconsistent shapes or
  /// non-finite entries.
  void validate(std::size_t input_width) const {
    const auto h = static_cast<Eigen::Index>(hidden);
    if (hidden == 0) throw DimensionError("lstm: hidden size must be positive");
    if (layers.empty()) throw DimensionError("lstm: needs at least one layer");
    auto in = static_cast<Eigen::Index>(input_width);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto& L = layers[l];
      const std::string tag = "lstm layer " + std::to_string(l);
      if (L.w_x.rows() != 4 * h || L.w_x.cols() != in)
        throw DimensionError(tag + ": w_x must be " + std::to_string(4 * h) + "x" + std::to_string(in));
      if (L.w_h.rows() != 4 * h || L.w_h.cols() != h)
        throw DimensionError(tag + ": w_h must be " + std::to_string(4 * h) + "x" + std::to_string(h));
      if (L.b.size() != 4 * h) throw DimensionError(tag + ": b must have length " + std::to_string(4 * h));
      require_finite(L.w_x, tag.c_str());
      require_finite(L.w_h, tag.c_str());
      require_finite(L.b, tag.c_str());
      in = h;
    }
    if (head_w.size() != h) throw DimensionError("lstm head: w must have length hidden");
    require_finite(head_w, "lstm head");
    if (!std::isfinite(head_b)) throw NumericError("lstm head: non-finite bias");
  }

  static RnnWeights zeros(std::size_t alphabet_size, std::size_t hidden, std::size_t n_layers = 2) {
    RnnWeights w;
    w.hidden = hidden;
    const auto h = static_cast<Eigen::Index>(hidden);
    auto in = static_cast<Eigen::Index>(alphabet_size);
    for (std::size_t l = 0; l < n_layers; ++l) {
      w.layers.push_back({Matrix::Zero(4 * h, in), Matrix::Zero(4 * h, h), Vector::Zero(4 * h)});
      in = h;
    }
    w.head_w = Vector::Zero(h);
    return w;
  }

  /// Entries uniform in [-scale, scale]; used for benchmarks and tests.
  static RnnWeights random(std::size_t alphabet_size, std::size_t hidden, std::uint64_t seed,
                           double scale = 0.3, std::size_t n_layers = 2) {
    RnnWeights w = zeros(alphabet_size, hidden, n_layers);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    auto fill = [&](auto& m) {
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    };
    for (auto& L : w.layers) {
      fill(L.w_x);
      fill(L.w_h);
      fill(L.b);
    }
    fill(w.head_w);
    w.head_b = u(rng);
    return w;
  }
};

enum class LstmConfigMode { hidden, hidden_and_cell };

class LstmOracle final : public Oracle {
 public:
  LstmOracle(RnnWeights weights, Alphabet alphabet, LstmConfigMode mode = LstmConfigMode::hidden)
      : w_(std::move(weights)), alphabet_(std::move(alphabet)), mode_(mode) {
    w_.validate(alphabet_.size());
  }

  const RnnWeights& weights() const { return w_; }
  const Alphabet& alphabet() const override { return alphabet_; }
  std::size_t dim() const override {
    return w_.layers.size() * w_.hidden * (mode_ == LstmConfigMode::hidden ? 1 : 2);
  }

  // state layout: [h_0, c_0, h_1, c_1, ...]
  State start() const override {
    return Vector::Zero(static_cast<Eigen::Index>(2 * w_.hidden * w_.layers.size()));
  }

  State advance(const State& st, Symbol s) const override {
    if (!alphabet_.contains(s)) throw AlphabetError("lstm: symbol index out of range");
    const auto h = static_cast<Eigen::Index>(w_.hidden);
    State next(st.size());
    Vector gates(4 * h);
    Vector input;
    for (std::size_t l = 0; l < w_.layers.size(); ++l) {
      const auto& L = w_.layers[l];
      const Eigen::Index off = static_cast<Eigen::Index>(2 * l) * h;
      if (l == 0)
        gates = L.w_x.col(static_cast<Eigen::Index>(s));  // one-hot input
      else
        gates = L.w_x * input;
      gates.noalias() += L.w_h * st.segment(off, h);
      gates += L.b;
      auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
      Vector c(h), hid(h);
      for (Eigen::Index k = 0; k < h; ++k) {
        const double i = sig(gates[k]);
        const double f = sig(gates[h + k]);
        const double g = std::tanh(gates[2 * h + k]);
        const double o = sig(gates[3 * h + k]);
        c[k] = f * st[off + h + k] + i * g;
        hid[k] = o * std::tanh(c[k]);
      }
      next.segment(off, h) = hid;
      next.segment(off + h, h) = c;
      input = std::move(hid);
    }
    return next;
  }

  double read_output(const State& st) const override {
    const auto h = static_cast<Eigen::Index>(w_.hidden);
    const Eigen::Index off = static_cast<Eigen::Index>(2 * (w_.layers.size() - 1)) * h;
    const double z = w_.head_w.dot(st.segment(off, h)) + w_.head_b;
    return 1.0 / (1.0 + std::exp(-z));
  }

  Vector read_config(const State& st) const override {
    if (mode_ == LstmConfigMode::hidden_and_cell) return st;
    const auto h = static_cast<Eigen::Index>(w_.hidden);
    Vector out(static_cast<Eigen::Index>(dim()));
    for (std::size_t l = 0; l < w_.layers.size(); ++l)
      out.segment(static_cast<Eigen::Index>(l) * h, h) = st.segment(static_cast<Eigen::Index>(2 * l) * h, h);
    return out;
  }

 private:
  RnnWeights w_;
  Alphabet alphabet_;
  LstmConfigMode mode_;
};

inline OraclePtr rnn_oracle(RnnWeights weights, Alphabet alphabet,
                            LstmConfigMode mode = LstmConfigMode::hidden) {
  return std::make_shared<LstmOracle>(std::move(weights), std::move(alphabet), mode);
}

inline Json to_json(const RnnWeights& w, const Alphabet& alphabet) {
  Json j;
  j["hidden"] = w.hidden;
  j["alphabet"] = alphabet.symbols();
  j["layers"] = Json::array();
  for (const auto& L : w.layers)
    j["layers"].push_back(
        {{"w_x", detail::to_json(L.w_x)}, {"w_h", detail::to_json(L.w_h)}, {"b", detail::to_json(L.b)}});
  j["head"] = {{"w", detail::to_json(w.head_w)}, {"b", w.head_b}};
  return j;
}

struct LoadedRnn {
  RnnWeights weights;
  Alphabet alphabet;
};

inline LoadedRnn rnn_weights_from_json(const Json& j) {
  using detail::require_key;
  LoadedRnn out{RnnWeights{}, detail::alphabet_from_json(require_key(j, "alphabet"))};
  const Json& hidden = require_key(j, "hidden");
  if (!hidden.is_number_integer() || hidden.get<long long>() <= 0)
    throw SchemaError("hidden: expected a positive integer");
  out.weights.hidden = hidden.get<std::size_t>();
  const Json& layers = require_key(j, "layers");
  if (!layers.is_array()) throw SchemaError("layers: expected an array");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string tag = "layers[" + std::to_string(l) + "]";
    out.weights.layers.push_back({detail::matrix_from_json(require_key(layers[l], "w_x"), tag + ".w_x"),
                                  detail::matrix_from_json(require_key(layers[l], "w_h"), tag + ".w_h"),
                                  detail::vector_from_json(require_key(layers[l], "b"), tag + ".b")});
  }
  const Json& head = require_key(j, "head");
  out.weights.head_w = detail::vector_from_json(require_key(head, "w"), "head.w");
  out.weights.head_b = detail::finite_number(require_key(head, "b"), "head.b");
  try {
    out.weights.validate(out.alphabet.size());
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
  return out;
}

}  // namespace wfax
