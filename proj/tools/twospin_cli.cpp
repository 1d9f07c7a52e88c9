// twospin: figure data, sweeps, spectra and ion-trap plans for the
// two-qubit spin-boson model.
//
// Exit codes: 0 success, 2 usage or I/O error, 3 numerical failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twospin/scenarios.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

} // namespace

int main(int argc, char** argv) {
  using namespace twospin;

  CLI::App app{"Two-qubit spin-boson dynamics: figure data, sweeps and ion-trap planning"};
  std::string scenario;
  std::vector<std::string> sets;
  std::string out = "-";
  std::string format = "csv";
  int threads = 1;
  std::string config_path;

  std::string names;
  for (const auto& n : scenarios::scenario_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("--scenario", scenario, "One of: " + names)->required();
  app.add_option("--set", sets, "Parameter override key=value (repeatable)");
  app.add_option("--out", out, "Output path ('-' for stdout)");
  app.add_option("--format", format, "csv, json or text");
  app.add_option("--threads", threads, "Worker threads for sweeps");
  app.add_option("--config", config_path, "Flat key = value parameter file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  scenarios::ScenarioSpec spec;
  scenarios::Format fmt{};
  try {
    spec.scenario = scenario;
    spec.threads = threads;
    if (!config_path.empty()) spec.params = config::parse_file(config_path);
    for (const auto& s : sets) {
      auto [k, v] = config::split_assignment(s);
      spec.params[k] = v;
    }
    fmt = scenarios::parse_format(format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const auto result = scenarios::run(spec);
    if (out == "-") {
      scenarios::write_artifact(std::cout, result.artifacts.front(), fmt);
      if (result.artifacts.size() > 1)
        std::cerr << "note: " << result.artifacts.size() - 1 << " further table(s) are written only with --out\n";
    } else {
      for (const auto& p : scenarios::write_result(result, fmt, out)) std::cerr << "wrote " << p << '\n';
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidState& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidRates& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return 0;
}
