// Writes the synthetic linear benchmark as CSV: plsga-synth <out.csv> [flags]

#include <iostream>

#include <CLI11.hpp>

#include "plsga/error.hpp"
#include "plsga/synthetic.hpp"

int main(int argc, char** argv) {
  plsga::SyntheticSpec spec;
  std::string path;
  std::string response = "y";
  CLI::App app{"Generate the synthetic linear benchmark", "plsga-synth"};
  app.add_option("output", path, "CSV file to write")->required();
  app.add_option("--observations", spec.n, "rows")->capture_default_str();
  app.add_option("--variables", spec.p, "predictor columns")->capture_default_str();
  app.add_option("--active", spec.active_count, "columns that enter the response")->capture_default_str();
  app.add_option("--noise-ratio", spec.noise_ratio, "noise SD relative to the signal SD")->capture_default_str();
  app.add_option("--seed", spec.seed, "generator seed")->capture_default_str();
  app.add_option("--response", response, "response column name")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    const plsga::SyntheticData synth = plsga::make_linear_benchmark(spec);
    plsga::save_csv(synth.data, path, response);
    std::cout << "active columns:";
    for (std::size_t a : synth.active) std::cout << ' ' << synth.data.variable_names()[a];
    std::cout << "\n";
  } catch (const plsga::Error& e) {
    std::cerr << "plsga-synth: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
