#ifndef TWOSPIN_SCENARIOS_HPP
#define TWOSPIN_SCENARIOS_HPP

// Named runs behind the command-line tool. Each scenario reads a flat set of
// key = value parameters (unknown keys are rejected) and returns one or more
// tables. Times are in units of 1/gamma0 with gamma0 = 1.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "twospin/config.hpp"
#include "twospin/dynamics.hpp"
#include "twospin/io.hpp"
#include "twospin/iontrap.hpp"
#include "twospin/liouvillian.hpp"

namespace twospin::scenarios {

enum class Format { Csv, Json, Text };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  if (s == "text") return Format::Text;
  throw DomainError("unknown format '" + s + "'; valid formats: csv json text");
}

struct Artifact {
  std::string name;
  io::Table table;
  /// Replaces the row-array JSON when set.
  std::optional<nlohmann::json> json;
  /// Replaces the column text when set.
  std::optional<std::string> text;
};

struct Result {
  std::vector<Artifact> artifacts;
};

struct ScenarioSpec {
  std::string scenario;
  config::KeyValues params;
  int threads = 1;
};

namespace detail {

/// Typed access to a parameter set with defaults.
class Params {
public:
  Params(const config::KeyValues& kv, std::vector<std::string> valid) : kv_(kv) {
    config::require_known(kv_, valid);
  }
  double number(const std::string& k, double def) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? def : config::to_double(k, it->second);
  }
  long integer(const std::string& k, long def) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? def : config::to_long(k, it->second);
  }
  bool flag(const std::string& k, bool def) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? def : config::to_bool(k, it->second);
  }
  std::vector<double> list(const std::string& k, const std::string& def) const {
    auto it = kv_.find(k);
    return config::to_list(k, it == kv_.end() ? def : it->second);
  }

private:
  const config::KeyValues& kv_;
};

struct NamedState {
  std::string name;
  double lambda_corr;
  PauliVector state;
};

/// The four initial states of the trajectory figure, keyed by Lambda.
inline const std::vector<NamedState>& reference_states() {
  static const std::vector<NamedState> s = [] {
    Vector4c bell = Vector4c::Zero();
    bell(1) = bell(2) = 1.0 / std::sqrt(2.0);
    return std::vector<NamedState>{
        {"singlet", -3.0, states::singlet()},
        {"up_down", -1.0, states::up_down_z()},
        {"mixed", 0.0, states::maximally_mixed()},
        {"bell_plus", 1.0, density_to_bloch(states::projector(bell))},
    };
  }();
  return s;
}

inline const NamedState& state_for(double lambda_corr) {
  for (const auto& s : reference_states())
    if (s.lambda_corr == lambda_corr) return s;
  throw DomainError("no reference initial state with lambda_corr = " + io::format_number(lambda_corr) +
                    "; valid values: -3 -1 0 1");
}

inline void check_ratio_grid(const std::vector<double>& r, bool allow_one) {
  for (double x : r)
    if (!(x > 0.0 && (allow_one ? x <= 1.0 : x < 1.0)))
      throw DomainError("R = " + io::format_number(x) + " outside " + (allow_one ? "(0, 1]" : "(0, 1)"));
}

inline std::vector<double> linspace(double a, double b, long n) {
  if (n < 2) throw DomainError("need at least 2 time points");
  if (!(b > a)) throw DomainError("time range must be increasing");
  std::vector<double> t;
  for (long i = 0; i < n; ++i) t.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return t;
}

struct Model {
  BathThermal thermal = BathThermal::from_ratio(1.0);
  RateSet rates;
  ModelParams params;
};

inline Model make_model(double delta, double r, double field) {
  Model m;
  m.thermal = BathThermal::from_ratio(r);
  m.rates = RateSet::make(1.0, m.thermal, delta);
  m.params.delta_field = field;
  m.params.validate();
  return m;
}

} // namespace detail

/// Concurrence surface over R and |lambda_1| t from a fixed initial state.
inline Result run_fig1(const config::KeyValues& kv) {
  const detail::Params p(kv, {"delta", "R", "lambda1_t", "lambda_corr", "field"});
  const double delta = p.number("delta", 0.05);
  const auto rs = p.list("R", "0.5:0.99:50");
  const auto ts = p.list("lambda1_t", "0:3:61");
  const double field = p.number("field", 10.0);
  const auto& init = detail::state_for(p.number("lambda_corr", -1.0));
  detail::check_ratio_grid(rs, false);
  for (double t : ts)
    if (!(t >= 0.0)) throw DomainError("lambda1_t values must be >= 0");

  Artifact a{"surface", {{"R", "lambda1_t", "concurrence_numeric"}, {}}, {}, {}};
  for (double r : rs) {
    const auto m = detail::make_model(delta, r, field);
    const auto rep = classify_spectrum(build_generator(m.params, m.rates, false, false));
    const SpectralEvolution ev(rep, init.state);
    const double inv = 1.0 / std::abs(rep.slow_rate());
    for (double s : ts) a.table.add({r, s, ev.concurrence(s * inv)});
  }
  return {{std::move(a)}};
}

/// Numerical and analytic concurrence for the four reference states, plus
/// one full trajectory table per state.
inline Result run_fig2(const config::KeyValues& kv) {
  const detail::Params p(kv, {"delta", "R", "field", "t_end", "points", "include_lamb", "include_exchange",
                              "lamb_A", "lamb_B", "exchange_xi"});
  auto m = detail::make_model(p.number("delta", 0.05), p.number("R", 0.9), p.number("field", 10.0));
  detail::check_ratio_grid({m.thermal.ratio()}, true);
  m.params.lamb_A = p.number("lamb_A", 0.0);
  m.params.lamb_B = p.number("lamb_B", 0.0);
  m.params.exchange_xi = p.number("exchange_xi", 0.0);
  const auto times = detail::linspace(0.0, p.number("t_end", 40.0), p.integer("points", 401));
  const auto gen = build_generator(m.params, m.rates, p.flag("include_lamb", false), p.flag("include_exchange", false));
  const auto rep = classify_spectrum(gen);
  const double l1 = std::abs(rep.slow_rate());

  Result res;
  Artifact wide{"concurrence", {{"t_gamma0", "t_lambda1"}, {}}, {}, {}};
  std::vector<Trajectory> trajs;
  std::vector<std::vector<double>> analytic;
  for (const auto& s : detail::reference_states()) {
    wide.table.columns.push_back("C_numeric_" + s.name);
    wide.table.columns.push_back("C_analytic_" + s.name);
    trajs.push_back(propagate_spectral(rep, s.state, times));
    std::vector<double> an;
    for (double t : times) an.push_back(analytic_concurrence(m.thermal, m.rates, CorrelationScalar(s.lambda_corr), t));
    analytic.push_back(std::move(an));
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<io::Cell> row{times[i], l1 * times[i]};
    for (std::size_t k = 0; k < trajs.size(); ++k) {
      row.emplace_back(trajs[k].concurrence[i]);
      row.emplace_back(analytic[k][i]);
    }
    wide.table.add(std::move(row));
  }
  res.artifacts.push_back(std::move(wide));

  const auto& named = detail::reference_states();
  for (std::size_t k = 0; k < named.size(); ++k) {
    Artifact a{named[k].name, {io::trajectory_columns(), {}}, {}, {}};
    for (std::size_t i = 0; i < times.size(); ++i) {
      std::vector<io::Cell> row{times[i], l1 * times[i]};
      for (int c = 0; c < 16; ++c) row.emplace_back(trajs[k].states[i][c]);
      row.emplace_back(trajs[k].concurrence[i]);
      row.emplace_back(analytic[k][i]);
      a.table.add(std::move(row));
    }
    res.artifacts.push_back(std::move(a));
  }
  return res;
}

/// |ud> with and without the Lamb-shift and exchange terms at B = xi = 1/(2|lambda_1|), A = 0.
inline Result run_fig2_inset(const config::KeyValues& kv) {
  const detail::Params p(kv, {"delta", "R", "field", "t_end", "points"});
  auto m = detail::make_model(p.number("delta", 0.05), p.number("R", 0.9), p.number("field", 10.0));
  const auto times = detail::linspace(0.0, p.number("t_end", 40.0), p.integer("points", 401));
  const auto bare = classify_spectrum(build_generator(m.params, m.rates, false, false));
  const double l1 = std::abs(bare.slow_rate());
  ModelParams with = m.params;
  with.lamb_B = 0.5 / l1;
  with.exchange_xi = 0.5 / l1;
  const auto dressed = classify_spectrum(build_generator(with, m.rates, true, true));
  const auto init = states::up_down_z();
  const auto tb = propagate_spectral(bare, init, times);
  const auto td = propagate_spectral(dressed, init, times);

  Artifact a{"inset",
             {{"t_gamma0", "t_lambda1", "concurrence_bare", "concurrence_dressed", "concurrence_analytic"}, {}},
             {},
             {}};
  for (std::size_t i = 0; i < times.size(); ++i)
    a.table.add({times[i], l1 * times[i], tb.concurrence[i], td.concurrence[i],
                 analytic_concurrence(m.thermal, m.rates, CorrelationScalar(-1.0), times[i])});
  Artifact s{"summary", {{"quantity", "value"}, {}}, {}, {}};
  s.table.add({std::string("lamb_B"), with.lamb_B});
  s.table.add({std::string("exchange_xi"), with.exchange_xi});
  s.table.add({std::string("lambda1_bare"), bare.slow_rate()});
  s.table.add({std::string("lambda1_dressed"), dressed.slow_rate()});
  return {{std::move(a), std::move(s)}};
}

/// Eigenvalues with their mode labels; the generator matrix as a second table.
inline Result run_spectrum(const config::KeyValues& kv) {
  const detail::Params p(kv, {"delta", "R", "field", "gamma0", "lamb_A", "lamb_B", "exchange_xi", "include_lamb",
                              "include_exchange"});
  const auto th = BathThermal::from_ratio(p.number("R", 0.9));
  const auto rates = RateSet::make(p.number("gamma0", 1.0), th, p.number("delta", 0.05));
  ModelParams mp;
  mp.delta_field = p.number("field", 10.0);
  mp.lamb_A = p.number("lamb_A", 0.0);
  mp.lamb_B = p.number("lamb_B", 0.0);
  mp.exchange_xi = p.number("exchange_xi", 0.0);
  const auto gen = build_generator(mp, rates, p.flag("include_lamb", false), p.flag("include_exchange", false));
  const auto rep = classify_spectrum(gen);

  Artifact modes{"spectrum", {{"index", "label", "re", "im"}, {}}, io::spectrum_json(rep), {}};
  for (int l = 0; l < 16; ++l)
    modes.table.add({static_cast<long>(l), std::string(to_string(rep.labels[static_cast<std::size_t>(l)])),
                     rep.eigenvalue(l).real(), rep.eigenvalue(l).imag()});
  Artifact mat{"generator", {{"row"}, {}}, io::generator_json(gen), {}};
  const auto cols = io::trajectory_columns();
  for (int k = 0; k < 16; ++k) mat.table.columns.push_back(cols[static_cast<std::size_t>(k) + 2]);
  for (int r = 0; r < 16; ++r) {
    std::vector<io::Cell> row{cols[static_cast<std::size_t>(r) + 2]};
    for (int c = 0; c < 16; ++c) row.emplace_back(gen.entries(r, c));
    mat.table.add(std::move(row));
  }
  return {{std::move(modes), std::move(mat)}};
}

/// Grid over (delta, R, Lambda) of the closed-form peak concurrence and
/// survival time; `numeric = true` adds the full-Liouvillian crossing.
/// Cells run on `threads` workers; rows come out in grid order.
inline Result run_sweep(const config::KeyValues& kv, int threads) {
  const detail::Params p(kv, {"delta", "R", "lambda_corr", "field", "numeric"});
  const auto deltas = p.list("delta", "0.01,0.05,0.2");
  const auto rs = p.list("R", "0.5,0.7,0.9");
  const auto lams = p.list("lambda_corr", "-3,-1,0");
  const double field = p.number("field", 10.0);
  const bool numeric = p.flag("numeric", false);
  detail::check_ratio_grid(rs, true);
  for (double d : deltas)
    if (!(d >= 0.0 && d <= 2.0)) throw DomainError("delta = " + io::format_number(d) + " outside [0, 2]");
  for (double l : lams) {
    CorrelationScalar check(l);
    if (numeric) detail::state_for(l);
  }
  if (threads < 1) throw DomainError("threads must be >= 1");

  struct Cell {
    double delta, r, lam;
    std::vector<io::Cell> row;
    std::string error;
  };
  std::vector<Cell> cells;
  for (double d : deltas)
    for (double r : rs)
      for (double l : lams) cells.push_back({d, r, l, {}, {}});

  const auto work = [&](Cell& c) {
    try {
      const auto m = detail::make_model(c.delta, c.r, field);
      const CorrelationScalar lam(c.lam);
      const auto s = survival_time(m.thermal, m.rates, lam);
      c.row = {c.delta, c.r, c.lam, s.generated, s.peak_concurrence, s.t_c, s.scaled_t_c,
               first_order_lambda1(m.rates)};
      if (numeric) {
        double nl = std::nan(""), nt = std::nan(""), np = std::nan("");
        if (c.delta > 0.0) {
          try {
            const auto rep = classify_spectrum(build_generator(m.params, m.rates, false, false));
            const auto nc = numeric_crossing(rep, detail::state_for(c.lam).state);
            nl = nc.lambda1;
            nt = nc.scaled_t_c;
            np = nc.peak_concurrence;
          } catch (const DegenerateSpectrum&) {
          }
        }
        c.row.insert(c.row.end(), {nl, nt, np});
      }
    } catch (const Error& e) {
      c.error = e.what();
    }
  };
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) work(cells[i]);
  };
  const int n = std::min<int>(threads, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Artifact a{"sweep",
             {{"delta", "R", "lambda_corr", "generated", "peak_concurrence", "t_c", "scaled_t_c", "lambda1"}, {}},
             {},
             {}};
  if (numeric)
    for (const char* c : {"numeric_lambda1", "numeric_scaled_t_c", "numeric_peak_concurrence"})
      a.table.columns.emplace_back(c);
  for (auto& c : cells) {
    if (!c.error.empty())
      throw NumericalFailure("sweep cell delta=" + io::format_number(c.delta) + " R=" + io::format_number(c.r) +
                             " lambda_corr=" + io::format_number(c.lam) + ": " + c.error);
    a.table.add(std::move(c.row));
  }
  return {{std::move(a)}};
}

/// Feasibility report for a trap configuration.
inline Result run_iontrap(const config::KeyValues& kv) {
  const auto cfg = iontrap::TrapConfig::from_key_values(kv);
  const auto plan = iontrap::plan(cfg);
  const auto& r = plan.report;
  const double temp = r.bath_temperature_kelvin.value_or(std::nan(""));

  Artifact a{"iontrap", {{"quantity", "value"}, {}}, {}, {}};
  const std::vector<std::pair<std::string, io::Cell>> items{
      {"delta", r.delta},
      {"delta_exact", r.delta_exact},
      {"gamma0_per_wt", r.gamma0},
      {"revival_time_wt", r.revival_time},
      {"t_peak_estimate_wt", r.t_peak_estimate},
      {"decay_window_wt", r.decay_window},
      {"t_c_wt", r.t_c},
      {"peak_concurrence", r.peak_concurrence},
      {"generated", r.generated},
      {"feasible", r.feasible},
      {"bath_temperature_K", temp},
  };
  nlohmann::json j = nlohmann::json::object();
  std::string text;
  for (const auto& [k, v] : items) {
    a.table.add({k, v});
    j[k] = io::json_cell(v);
    text += k + " = " + io::format_cell(v) + "\n";
  }
  j["diagnostics"] = r.diagnostics;
  for (const auto& d : r.diagnostics) {
    a.table.add({std::string("diagnostic"), d});
    text += "# " + d + "\n";
  }
  a.json = std::move(j);
  a.text = std::move(text);
  return {{std::move(a)}};
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> n{"fig1-surface", "fig2-trajectories", "fig2-inset",
                                          "iontrap",      "sweep",             "spectrum"};
  return n;
}

inline Result run(const ScenarioSpec& spec) {
  if (spec.scenario == "fig1-surface") return run_fig1(spec.params);
  if (spec.scenario == "fig2-trajectories") return run_fig2(spec.params);
  if (spec.scenario == "fig2-inset") return run_fig2_inset(spec.params);
  if (spec.scenario == "iontrap") return run_iontrap(spec.params);
  if (spec.scenario == "sweep") return run_sweep(spec.params, spec.threads);
  if (spec.scenario == "spectrum") return run_spectrum(spec.params);
  std::string msg = "unknown scenario '" + spec.scenario + "'; valid scenarios:";
  for (const auto& n : scenario_names()) msg += " " + n;
  throw DomainError(msg);
}

inline void write_artifact(std::ostream& out, const Artifact& a, Format f) {
  switch (f) {
    case Format::Csv: io::write_csv(out, a.table); break;
    case Format::Json: out << (a.json ? *a.json : io::to_json(a.table)).dump(2) << '\n'; break;
    case Format::Text:
      if (a.text) out << *a.text;
      else io::write_text(out, a.table);
      break;
  }
}

inline std::string extension(Format f) {
  switch (f) {
    case Format::Csv: return ".csv";
    case Format::Json: return ".json";
    case Format::Text: return ".txt";
  }
  return "";
}

/// The first artifact goes to `path`; the others next to it as
/// <stem>.<name><ext>. Returns every path written.
inline std::vector<std::string> write_result(const Result& r, Format f, const std::string& path) {
  std::vector<std::string> written;
  const std::filesystem::path base(path);
  for (std::size_t i = 0; i < r.artifacts.size(); ++i) {
    std::filesystem::path target = base;
    if (i > 0) {
      target = base.parent_path() / (base.stem().string() + "." + r.artifacts[i].name + extension(f));
    }
    std::ofstream out(target, std::ios::binary);
    if (!out) throw IoError("cannot open '" + target.string() + "' for writing");
    write_artifact(out, r.artifacts[i], f);
    out.flush();
    if (!out) throw IoError("write to '" + target.string() + "' failed");
    written.push_back(target.string());
  }
  return written;
}

} // namespace twospin::scenarios

#endif // TWOSPIN_SCENARIOS_HPP
