// Command-line front end: generate inputs, extract automata, evaluate,
// benchmark and export.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wfax/wfax.hpp"

namespace {

using namespace wfax;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

struct OracleSpec {
  std::string text;
  std::string rnn_config = "hidden";
};

// wfa:<path> | rnn:<path> | wparen
OraclePtr make_oracle(const OracleSpec& spec) {
  const std::string& s = spec.text;
  if (s == "wparen") return wparen_oracle();
  if (s.rfind("wfa:", 0) == 0) return wfa_oracle(load(read_file(s.substr(4))));
  if (s.rfind("rnn:", 0) == 0) {
    LoadedRnn rnn = rnn_weights_from_json(Json::parse(read_file(s.substr(4))));
    const auto mode = spec.rnn_config == "hidden-cell" ? LstmConfigMode::hidden_and_cell : LstmConfigMode::hidden;
    return rnn_oracle(std::move(rnn.weights), std::move(rnn.alphabet), mode);
  }
  throw Error("unknown oracle '" + s + "' (expected wfa:<path>, rnn:<path> or wparen)");
}

void add_oracle_options(CLI::App* cmd, OracleSpec& spec) {
  cmd->add_option("--oracle", spec.text, "wfa:<path.json> | rnn:<weights.json> | wparen")->required();
  cmd->add_option("--rnn-config", spec.rnn_config, "LSTM configuration vector: hidden | hidden-cell")
      ->check(CLI::IsMember({"hidden", "hidden-cell"}));
}

Json eval_json(const EvalResult& r) {
  Json j = {{"mse", r.mse}, {"max_abs_error", r.max_abs}, {"n_eval", r.n_eval}};
  if (r.sup_error) j["sup_error"] = *r.sup_error;
  Json per = Json::object();
  for (const auto& [len, b] : r.by_length)
    per[std::to_string(len)] = {{"count", b.count}, {"mse", b.mse}, {"max_abs_error", b.max_abs}};
  j["by_length"] = per;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extract weighted finite automata from black-box sequence scorers"};
  app.require_subcommand(1);

  // gen-wfa
  std::size_t k = 2, states = 3, count = 1000, max_len = 20;
  std::uint64_t seed = 0;
  std::string out;
  auto* gen_wfa = app.add_subcommand("gen-wfa", "random automaton with outputs in [0,1]");
  gen_wfa->add_option("--alphabet-size", k)->required()->check(CLI::PositiveNumber);
  gen_wfa->add_option("--states", states)->required()->check(CLI::PositiveNumber);
  gen_wfa->add_option("--seed", seed);
  gen_wfa->add_option("--out", out)->required();

  // gen-data
  std::string sampler = "uniform", label_wfa;
  auto* gen_data = app.add_subcommand("gen-data", "sample words (optionally labeled by an automaton)");
  gen_data->add_option("--sampler", sampler)->check(CLI::IsMember({"uniform", "block"}));
  gen_data->add_option("--alphabet-size", k)->required()->check(CLI::PositiveNumber);
  gen_data->add_option("--count", count)->required();
  gen_data->add_option("--max-len", max_len);
  gen_data->add_option("--seed", seed);
  gen_data->add_option("--label", label_wfa, "automaton JSON whose weights become the targets");
  gen_data->add_option("--out", out)->required();

  // gen-wparen
  std::string out_train, out_test;
  auto* gen_wparen = app.add_subcommand("gen-wparen", "weighted-parentheses train/test split");
  gen_wparen->add_option("--seed", seed);
  gen_wparen->add_option("--out-train", out_train)->required();
  gen_wparen->add_option("--out-test", out_test)->required();

  // extract
  OracleSpec oracle_spec;
  ExtractionConfig cfg;
  std::string eq = "regr", neighbors = "points", report_path, trace_path, table_path;
  auto* extract_cmd = app.add_subcommand("extract", "learn an automaton from an oracle");
  add_oracle_options(extract_cmd, oracle_spec);
  extract_cmd->add_option("--eq", eq, "equivalence engine")->check(CLI::IsMember({"regr", "bfs"}));
  extract_cmd->add_option("--M", cfg.concentration, "concentration threshold")->check(CLI::PositiveNumber);
  extract_cmd->add_option("--n", cfg.bfs_budget, "breadth-first budget")->check(CLI::PositiveNumber);
  extract_cmd->add_option("--e", cfg.e, "error tolerance")->check(CLI::PositiveNumber);
  extract_cmd->add_option("--L", cfg.max_length, "maximum plausible word length")->check(CLI::PositiveNumber);
  extract_cmd->add_option("--tau0", cfg.tau0, "initial relative rank tolerance")->check(CLI::PositiveNumber);
  extract_cmd->add_option("--decay", cfg.decay, "rank tolerance decay rate")->check(CLI::Range(0.0, 1.0));
  extract_cmd->add_option("--max-rounds", cfg.max_rounds);
  extract_cmd->add_option("--max-pops", cfg.max_pops);
  extract_cmd->add_option("--length-scale", cfg.regressor.length_scale)->check(CLI::PositiveNumber);
  extract_cmd->add_option("--ridge", cfg.regressor.ridge)->check(CLI::NonNegativeNumber);
  extract_cmd->add_option("--neighbors", neighbors, "how the concentration count treats coinciding images")
      ->check(CLI::IsMember({"words", "points"}));
  extract_cmd->add_option("--seed", cfg.seed);
  extract_cmd->add_option("--out", out)->required();
  extract_cmd->add_option("--report", report_path);
  extract_cmd->add_option("--trace", trace_path, "JSON-lines trace of the regression search");
  extract_cmd->add_option("--dump-table", table_path, "CSV dump of the final observation table");

  // eval
  std::string wfa_path, data_path;
  std::size_t exhaustive_len = 0;
  auto* eval_cmd = app.add_subcommand("eval", "MSE on a dataset or exhaustive sup-error");
  add_oracle_options(eval_cmd, oracle_spec);
  eval_cmd->add_option("--wfa", wfa_path)->required();
  auto* data_opt = eval_cmd->add_option("--data", data_path);
  auto* exh_opt = eval_cmd->add_option("--exhaustive-len", exhaustive_len);
  data_opt->excludes(exh_opt);
  eval_cmd->add_option("--out", out);

  // bench
  std::size_t reps = 5;
  auto* bench_cmd = app.add_subcommand("bench", "inference time of oracle vs automaton");
  add_oracle_options(bench_cmd, oracle_spec);
  bench_cmd->add_option("--wfa", wfa_path)->required();
  bench_cmd->add_option("--data", data_path)->required();
  bench_cmd->add_option("--reps", reps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", out);

  // export-dot
  DotOptions dot;
  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering of an automaton");
  dot_cmd->add_option("--wfa", wfa_path)->required();
  dot_cmd->add_option("--threshold", dot.weight_threshold, "hide transitions with |weight| <= threshold");
  dot_cmd->add_option("--underline", dot.underline_threshold, "flag initial/final values with |value| >= this");
  dot_cmd->add_option("--out", out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_wfa->parsed()) {
      write_file(out, save(random_wfa(Alphabet::letters(k), states, seed)) + "\n");
    } else if (gen_data->parsed()) {
      const Alphabet sigma = Alphabet::letters(k);
      const auto words = sampler == "block" ? sample_block(k, max_len, count, seed)
                                            : sample_uniform(k, max_len, count, seed);
      Dataset d{sigma, {}};
      if (!label_wfa.empty()) {
        const Wfa target = load(read_file(label_wfa));
        if (!(target.alphabet() == sigma)) throw Error("--label automaton alphabet does not match --alphabet-size");
        d = label(sigma, words, target);
      } else {
        for (const auto& w : words) d.items.push_back({w, 0.0});
      }
      write_file(out, to_jsonl(d));
    } else if (gen_wparen->parsed()) {
      const auto split = build_wparen_dataset(seed);
      write_file(out_train, to_jsonl(split.train));
      write_file(out_test, to_jsonl(split.test));
    } else if (extract_cmd->parsed()) {
      cfg.engine = eq == "bfs" ? EqEngine::bfs : EqEngine::regression;
      cfg.neighbor_count = neighbors == "points" ? NeighborCount::distinct_points : NeighborCount::visited_words;
      const OraclePtr oracle = make_oracle(oracle_spec);
      std::ofstream trace_file;
      if (!trace_path.empty()) {
        trace_file.open(trace_path);
        if (!trace_file) throw Error("cannot write '" + trace_path + "'");
      }
      const auto report = extract(oracle, cfg, trace_path.empty() ? nullptr : &trace_file);
      write_file(out, save(*report.wfa) + "\n");
      if (!report_path.empty()) write_file(report_path, to_json(report).dump(2) + "\n");
      if (!table_path.empty()) write_file(table_path, report.session->table().to_csv());
      std::cerr << "rounds=" << report.rounds << " states=" << report.wfa->n_states()
                << " converged=" << (report.converged ? "yes" : "no")
                << " membership_queries=" << report.queries.membership_queries << '\n';
    } else if (eval_cmd->parsed()) {
      const OraclePtr oracle = make_oracle(oracle_spec);
      const Wfa wfa = load(read_file(wfa_path));
      EvalResult r;
      if (!data_path.empty()) {
        const Dataset d = from_jsonl(read_file(data_path), oracle->alphabet());
        std::vector<Word> words;
        for (const auto& item : d.items) words.push_back(item.word);
        r = mse(*oracle, wfa, words);
      } else {
        r.sup_error = sup_error_exhaustive(*oracle, wfa, exhaustive_len);
        r.n_eval = count_words(wfa.alphabet().size(), exhaustive_len);
        r.max_abs = *r.sup_error;
      }
      Json j = eval_json(r);
      if (data_path.empty()) j.erase("mse");
      write_file(out.empty() ? "-" : out, j.dump(2) + "\n");
    } else if (bench_cmd->parsed()) {
      const OraclePtr oracle = make_oracle(oracle_spec);
      const Wfa wfa = load(read_file(wfa_path));
      const Dataset d = from_jsonl(read_file(data_path), oracle->alphabet());
      std::vector<Word> words;
      for (const auto& item : d.items) words.push_back(item.word);
      const BenchResult b = bench(*oracle, wfa, words, reps);
      Json j = {{"oracle_ns_per_word", b.oracle_ns_per_word}, {"wfa_ns_per_word", b.wfa_ns_per_word},
                {"speedup", b.speedup},
                {"oracle_ns_stddev", b.oracle_ns_stddev}, {"wfa_ns_stddev", b.wfa_ns_stddev},
                {"mean_word_length", b.mean_length}, {"words", b.words}, {"repetitions", b.repetitions}};
      write_file(out.empty() ? "-" : out, j.dump(2) + "\n");
    } else if (dot_cmd->parsed()) {
      write_file(out, export_dot(load(read_file(wfa_path)), dot));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
