// Learns the three-state example automaton back from its own weights with
// the regression-guided equivalence queries and prints the result.

#include <iostream>

#include "wfax/wfax.hpp"

int main() {
  const wfax::Wfa target = wfax::example_wfa();
  wfax::ExtractionConfig cfg;
  cfg.tau0 = 1e-6;
  cfg.e = 0.05;
  const auto report = wfax::extract(wfax::wfa_oracle(target), cfg);

  std::cout << "rounds: " << report.rounds << ", states: " << report.wfa->n_states()
            << ", converged: " << std::boolalpha << report.converged << '\n';
  for (const char* w : {"", "a", "b", "ba", "abba"}) {
    const auto word = target.alphabet().parse(std::string_view(w));
    std::cout << "f(\"" << w << "\") target " << target.weight(word) << "  extracted "
              << report.wfa->weight(word) << '\n';
  }
  std::cout << wfax::export_dot(*report.wfa, {0.01, 0.1});
}
