// birkhoff: config-driven front end for the thermodynamic-formalism toolkit.
//
// Subcommands: pressure, entropy, s-inf, delta-inf, suspension-check,
// spectrum, freq-spectrum, transient-dim. Each reads a JSON map-family
// config, writes a CSV summary, a JSON report with convergence traces, and
// (where meaningful) a two-column plot-data file. All values are in nats.
//
// Exit codes: 0 success (warnings land in the flags column), 1 solver
// failure, 2 config/schema violation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "birkhoff/infinity.hpp"
#include "birkhoff/markov.hpp"
#include "birkhoff/spectrum.hpp"
#include "birkhoff/suspension.hpp"
#include "birkhoff/thermo.hpp"
#include "birkhoff/transfer.hpp"

using nlohmann::json;
using namespace birkhoff;

namespace {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct CsvRow {
  std::string command, input;
  double value = 0.0;
  double mass_c = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  int truncation_k = 0;
  std::string flags;
};

struct Output {
  std::string prefix = "birkhoff_out";
  std::vector<CsvRow> rows;
  json report;
  std::vector<std::pair<double, double>> plot;

  void write() const {
    {
      std::ofstream csv(prefix + ".csv");
      csv << "# birkhoff output; all values in nats (natural logarithm)\n";
      csv << "command,input,value,mass_c,residual,truncation_k,flags\n";
      for (const auto& r : rows)
        csv << r.command << ',' << r.input << ',' << fmt(r.value) << ',' << fmt(r.mass_c)
            << ',' << fmt(r.residual) << ',' << r.truncation_k << ',' << r.flags << '\n';
    }
    {
      std::ofstream js(prefix + ".json");
      js << report.dump(2) << '\n';
    }
    if (!plot.empty()) {
      std::ofstream dat(prefix + ".dat");
      for (const auto& [x, y] : plot) dat << fmt(x) << ' ' << fmt(y) << '\n';
    }
  }
};

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("config: cannot open '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw SchemaError("config: top level must be an object");
  if (cfg.contains("schema") && cfg["schema"] != "1")
    throw SchemaError("config.schema: unsupported version");
  return cfg;
}

MapSystem map_from_config(const json& cfg) {
  if (!cfg.contains("family")) throw SchemaError("config.family: missing");
  const std::string fam = cfg["family"].get<std::string>();
  if (fam == "gauss") return MapSystem::gauss();
  if (fam == "base_n") {
    if (!cfg.contains("n") || !cfg["n"].is_number_integer())
      throw SchemaError("config.n: integer required for base_n");
    return MapSystem::base_n(cfg["n"].get<int>());
  }
  if (fam == "f_lambda") {
    if (!cfg.contains("lambda") || !cfg["lambda"].is_number())
      throw SchemaError("config.lambda: number required for f_lambda");
    return MapSystem::f_lambda(cfg["lambda"].get<double>());
  }
  if (fam == "piecewise_linear") {
    if (!cfg.contains("branches") || !cfg["branches"].is_array() || cfg["branches"].empty())
      throw SchemaError("config.branches: nonempty array required for piecewise_linear");
    std::vector<Branch> branches;
    int idx = 1;
    for (const auto& b : cfg["branches"]) {
      const std::string path = "config.branches[" + std::to_string(idx - 1) + "]";
      if (!b.contains("interval") || !b["interval"].is_array() || b["interval"].size() != 2)
        throw SchemaError(path + ".interval: [left, right] required");
      if (!b.contains("slope") || !b["slope"].is_number())
        throw SchemaError(path + ".slope: number required");
      if (!b.contains("image") || !b["image"].is_array() || b["image"].size() != 2)
        throw SchemaError(path + ".image: [left, right] required");
      Branch br;
      br.index = idx++;
      br.left = b["interval"][0].get<double>();
      br.right = b["interval"][1].get<double>();
      br.slope = b["slope"].get<double>();
      br.image_left = b["image"][0].get<double>();
      br.image_right = b["image"][1].get<double>();
      branches.push_back(br);
    }
    try {
      return MapSystem::piecewise_linear(std::move(branches));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("config.branches: ") + e.what());
    }
  }
  throw SchemaError("config.family: unknown family '" + fam + "'");
}

std::vector<Potential> potentials_from_config(const json& cfg, std::size_t want) {
  std::vector<Potential> out;
  if (cfg.contains("potentials")) {
    if (!cfg["potentials"].is_array()) throw SchemaError("config.potentials: array required");
    int idx = 0;
    for (const auto& p : cfg["potentials"]) {
      const std::string path = "config.potentials[" + std::to_string(idx++) + "]";
      if (!p.contains("type")) throw SchemaError(path + ".type: missing");
      const std::string type = p["type"].get<std::string>();
      if (type == "indicator") {
        if (!p.contains("symbol")) throw SchemaError(path + ".symbol: missing");
        out.push_back(Potential::indicator(p["symbol"].get<int>()));
      } else if (type == "constant") {
        out.push_back(Potential::constant(p.value("value", 0.0)));
      } else {
        throw SchemaError(path + ".type: unknown potential type '" + type + "'");
      }
    }
  }
  if (out.empty())
    for (std::size_t i = 1; i <= want; ++i)
      out.push_back(Potential::indicator(static_cast<Symbol>(i)));
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_list(s)) out.push_back(static_cast<int>(v));
  return out;
}

int thread_budget() {
  if (const char* env = std::getenv("BIRKHOFF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// deterministic indexed parallel map: results land in preallocated slots
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int budget = std::min<std::size_t>(thread_budget(), n);
  if (budget <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (int t = 0; t < budget; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

json pressure_to_json(const PressureEstimate& est) {
  json j;
  j["k"] = est.k;
  j["base_symbol"] = est.base_symbol;
  j["ns"] = est.ns;
  j["log_zn"] = json::array();
  for (double v : est.log_zn)
    j["log_zn"].push_back(std::isfinite(v) ? json(v) : json("-inf"));
  j["p_n"] = json::array();
  for (double v : est.p_n()) j["p_n"].push_back(std::isfinite(v) ? json(v) : json("-inf"));
  j["fit_slope"] = est.fit_slope;
  j["variational"] = est.variational;
  if (est.perron_log) j["perron_log"] = *est.perron_log;
  j["flags"] = est.flags;
  return j;
}

json spectrum_to_json(const SpectrumResult& r) {
  json j;
  j["value"] = r.value;
  j["mass_c"] = r.mass_c;
  j["t_star"] = r.t_star;
  j["multipliers"] = r.multipliers;
  j["membership"] = to_string(r.tag);
  j["truncation_k"] = r.report.truncation_k;
  j["k_schedule"] = r.report.k_schedule;
  j["value_by_k"] = json::array();
  for (double v : r.report.value_by_k)
    j["value_by_k"].push_back(std::isfinite(v) ? json(v) : json("infeasible"));
  j["dinkelbach_iterations"] = r.report.dinkelbach_iterations;
  j["dinkelbach_residual"] = r.report.dinkelbach_residual;
  j["moment_residual"] = r.report.moment_residual;
  j["mass_range"] = {r.report.mass_lo, r.report.mass_hi};
  j["value_bracket"] = {r.report.value_lower, r.report.value_upper};
  j["flags"] = r.report.flags;
  return j;
}

// ---- subcommand drivers -------------------------------------------------

int run_pressure(const json& cfg, Output& out, int k, int n_max, int a, bool entropy_mode,
                 const std::vector<int>& k_list) {
  const MapSystem map = map_from_config(cfg);
  std::vector<int> ks = k_list.empty() ? std::vector<int>{k} : k_list;
  out.report["estimates"] = json::array();
  for (int kk : ks) {
    PressureEstimate est = entropy_mode
                               ? topological_entropy(map, kk, n_max)
                               : gurevich_pressure(map, potentials_from_config(cfg, 1).front(),
                                                   kk, a, n_max);
    CsvRow row;
    row.command = entropy_mode ? "entropy" : "pressure";
    row.input = "k=" + std::to_string(kk) + ";n_max=" + std::to_string(n_max) +
                ";a=" + std::to_string(est.base_symbol);
    row.value = entropy_mode && est.perron_log ? *est.perron_log : est.fit_slope;
    row.residual = std::abs(est.fit_slope - est.variational);
    row.truncation_k = kk;
    row.flags = join_flags(est.flags);
    out.rows.push_back(row);
    out.report["estimates"].push_back(pressure_to_json(est));
    if (ks.size() > 1 && est.perron_log) out.plot.push_back({kk, *est.perron_log});
  }
  if (ks.size() == 1) {
    const auto& est = out.report["estimates"][0];
    const auto& ns = est["ns"];
    const auto& pn = est["p_n"];
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (pn[i].is_number()) out.plot.push_back({ns[i].get<double>(), pn[i].get<double>()});
  }
  return 0;
}

int run_s_inf(const json& cfg, Output& out, double t_tol, const std::vector<int>& schedule) {
  const MapSystem map = map_from_config(cfg);
  SInfinityOptions opts;
  opts.t_tol = t_tol;
  if (!schedule.empty()) opts.k_schedule = schedule;
  const SInfinityResult r = s_infinity(map, opts);
  CsvRow row;
  row.command = "s-inf";
  row.input = "t_tol=" + fmt(t_tol);
  row.value = r.value;
  row.residual = r.bracket_hi - r.bracket_lo;
  row.truncation_k = opts.k_schedule.empty() ? 12800 : opts.k_schedule.back();
  std::vector<std::string> flags = r.flags;
  if (!r.conclusive) flags.push_back("inconclusive");
  row.flags = join_flags(flags);
  out.rows.push_back(row);
  out.report["value"] = r.value;
  out.report["bracket"] = {r.bracket_lo, r.bracket_hi};
  out.report["conclusive"] = r.conclusive;
  out.report["trace"] = json::array();
  for (const auto& probe : r.trace) {
    json p;
    p["t"] = probe.t;
    p["ks"] = probe.ks;
    p["pressures"] = probe.pressures;
    p["divergent"] = probe.divergent;
    p["conclusive"] = probe.conclusive;
    p["reason"] = probe.reason;
    out.report["trace"].push_back(p);
  }
  return 0;
}

int run_delta_inf(const json& cfg, Output& out, int K, const std::vector<int>& Ms,
                  const std::vector<int>& qs, int n_max, int cert_k,
                  const std::vector<int>& offsets) {
  const MapSystem map = map_from_config(cfg);
  const DeltaInfTable table = delta_inf_counting(map, K, Ms, qs, n_max);
  out.report["counting"] = json::object();
  out.report["counting"]["K"] = table.K;
  out.report["counting"]["n_max"] = table.n_max;
  out.report["counting"]["window"] = table.window;
  out.report["counting"]["estimates"] = json::array();
  for (std::size_t mi = 0; mi < table.Ms.size(); ++mi)
    for (std::size_t qi = 0; qi < table.qs.size(); ++qi) {
      const double v = table.estimate[mi][qi];
      CsvRow row;
      row.command = "delta-inf";
      row.input = "M=" + std::to_string(table.Ms[mi]) + ";q=" + std::to_string(table.qs[qi]);
      row.value = v;
      row.truncation_k = K;
      row.flags = std::isfinite(v) ? "counting" : "counting;empty";
      out.rows.push_back(row);
      json e;
      e["M"] = table.Ms[mi];
      e["q"] = table.qs[qi];
      e["estimate"] = std::isfinite(v) ? json(v) : json("empty");
      out.report["counting"]["estimates"].push_back(e);
    }
  {
    CsvRow row;
    row.command = "delta-inf";
    row.input = "corner";
    row.value = table.corner;
    row.truncation_k = K;
    row.flags = join_flags(table.flags);
    out.rows.push_back(row);
    out.report["counting"]["corner"] =
        table.corner_empty ? json("empty") : json(table.corner);
  }
  if (cert_k > 0) {
    const Truncation tr = map.derive_truncation(cert_k);
    const auto parry =
        max_entropy_measure(std::make_shared<FiniteSubshift>(tr.shift), tr.labels);
    const EscapeCertificate cert = delta_inf_lower_bound(map, parry, offsets);
    CsvRow row;
    row.command = "delta-inf";
    row.input = "certificate;k=" + std::to_string(cert_k);
    row.value = cert.h;
    row.residual = cert.max_low_cylinder_mass.empty() ? 0.0 : cert.max_low_cylinder_mass.back();
    row.truncation_k = cert_k;
    std::vector<std::string> flags = cert.flags;
    flags.push_back(cert.decay_ok ? "decay_ok" : "decay_failed");
    row.flags = join_flags(flags);
    out.rows.push_back(row);
    json c;
    c["h"] = cert.h;
    c["offsets"] = cert.offsets;
    c["max_low_cylinder_mass"] = cert.max_low_cylinder_mass;
    c["decay_ok"] = cert.decay_ok;
    c["degenerate"] = cert.degenerate;
    out.report["certificate"] = c;
  }
  return 0;
}

int run_suspension_check(const json& cfg, Output& out, const std::vector<int>& m_list, int k,
                         int samples) {
  const MapSystem map = map_from_config(cfg);
  const int base = default_roof_base(map);
  const Truncation tr = map.derive_truncation(k);
  auto shift = std::make_shared<FiniteSubshift>(tr.shift);
  std::mt19937 rng(12345);
  out.report["base"] = base;
  out.report["checks"] = json::array();
  for (int m : m_list) {
    const SplitShift split = build_split_shift(map, m, k, base);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const auto mm = random_markov(shift, rng, tr.labels);
      const auto bm = block_measure_of(mm, split);
      const auto pushed = push_measure(bm, split);
      worst = std::max(worst,
                       std::abs(entropy(pushed) - entropy(bm) / split.roof.integral(bm)));
    }
    const double proxy = split_delta_inf_proxy(split, 2, std::min<int>(3, split.vertex_count),
                                               12);
    const double scale = split.roof.scale();
    CsvRow row;
    row.command = "suspension-check";
    row.input = "m=" + std::to_string(m) + ";base=" + std::to_string(base);
    row.value = worst;
    row.residual = worst;
    row.truncation_k = k;
    row.flags = "abramov_max_residual";
    out.rows.push_back(row);
    json c;
    c["m"] = m;
    c["vertex_count"] = split.vertex_count;
    c["abramov_max_residual"] = worst;
    c["split_log_perron"] = split.log_perron();
    c["scaled_delta_inf_proxy"] = std::isfinite(proxy) ? json(scale * proxy) : json("empty");
    c["trend_only"] = true;
    out.report["checks"].push_back(c);
  }
  return 0;
}

int run_spectrum(const json& cfg, Output& out, const std::string& gamma_str,
                 const std::string& grid_str, int k, bool freq_mode) {
  const MapSystem map = map_from_config(cfg);
  SolverOptions opts;
  if (cfg.contains("geometry_order")) opts.geometry_order = cfg["geometry_order"].get<int>();

  std::vector<std::vector<double>> gammas;
  if (!grid_str.empty()) {
    // "start:stop:step" over the first coordinate
    double start, stop, step;
    if (std::sscanf(grid_str.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0)
      throw SchemaError("--gamma-grid: expected start:stop:step");
    for (double g = start; g <= stop + 1e-12; g += step) gammas.push_back({g});
  } else {
    gammas.push_back(parse_list(gamma_str));
  }

  std::vector<SpectrumResult> results(gammas.size());
  std::vector<std::string> errors(gammas.size());
  parallel_for(gammas.size(), [&](std::size_t i) {
    try {
      if (freq_mode) {
        results[i] = freq_spectrum(map, gammas[i], k, opts);
      } else {
        SpectrumQuery q(map);
        q.truncation_k = k;
        q.opts = opts;
        q.gamma = gammas[i];
        q.potentials = potentials_from_config(cfg, gammas[i].size());
        if (q.potentials.size() != q.gamma.size())
          throw SchemaError("config.potentials: length must match gamma");
        results[i] = alpha3(q);
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  out.report["results"] = json::array();
  bool any_error = false;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    std::string input = freq_mode ? "freq_gamma=" : "gamma=";
    for (std::size_t j = 0; j < gammas[i].size(); ++j) {
      if (j) input += '|';
      input += fmt(gammas[i][j]);
    }
    if (!errors[i].empty()) {
      any_error = true;
      CsvRow row;
      row.command = freq_mode ? "freq-spectrum" : "spectrum";
      row.input = input;
      row.value = std::numeric_limits<double>::quiet_NaN();
      row.truncation_k = k;
      row.flags = "error:" + errors[i];
      out.rows.push_back(row);
      json j;
      j["input"] = input;
      j["error"] = errors[i];
      out.report["results"].push_back(j);
      continue;
    }
    const SpectrumResult& r = results[i];
    CsvRow row;
    row.command = freq_mode ? "freq-spectrum" : "spectrum";
    row.input = input;
    row.value = r.value;
    row.mass_c = r.mass_c;
    row.residual = r.report.dinkelbach_residual;
    row.truncation_k = k;
    std::vector<std::string> flags = r.report.flags;
    flags.push_back(to_string(r.tag));
    row.flags = join_flags(flags);
    out.rows.push_back(row);
    json j = spectrum_to_json(r);
    j["input"] = input;
    out.report["results"].push_back(j);
    if (!gammas[i].empty()) out.plot.push_back({gammas[i][0], r.value});
  }
  return any_error ? 1 : 0;
}

int run_transient_dim(const json& cfg, Output& out, double lambda_flag) {
  MapSystem map = lambda_flag >= 0.0 ? MapSystem::f_lambda(lambda_flag) : map_from_config(cfg);
  const double v = transient_dimension(map);
  CsvRow row;
  row.command = "transient-dim";
  row.input = "lambda=" + fmt(map.lambda());
  row.value = v;
  out.rows.push_back(row);
  out.report["value"] = v;
  out.report["lambda"] = map.lambda();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermodynamic-formalism toolkit for countable-branch interval maps"};
  app.require_subcommand(1);

  std::string config_path, out_prefix = "birkhoff_out";
  app.add_option("--config", config_path, "JSON map-family config")->required(false);
  app.add_option("--out-prefix", out_prefix, "output file prefix");

  int k = 40, n_max = 14, a = 1, K = 60, cert_k = 40, samples = 20;
  double t_tol = 1e-3, lambda_flag = -1.0;
  std::string gamma_str, grid_str, k_list_str, schedule_str, m_list_str = "1,2",
                                                             M_list_str = "1,2,4",
                                                             q_list_str = "1,2,4",
                                                             offsets_str = "0,10,20,40";

  auto* pressure = app.add_subcommand("pressure", "Gurevich pressure scan");
  pressure->add_option("--k", k, "truncation size");
  pressure->add_option("--n-max", n_max, "longest loop length");
  pressure->add_option("--a", a, "base symbol");

  auto* entropy_cmd = app.add_subcommand("entropy", "topological entropy of truncations");
  entropy_cmd->add_option("--k", k, "truncation size");
  entropy_cmd->add_option("--k-list", k_list_str, "comma list of truncation sizes");
  entropy_cmd->add_option("--n-max", n_max, "longest loop length");

  auto* sinf = app.add_subcommand("s-inf", "pressure-finiteness bisection for s_infinity");
  sinf->add_option("--t-tol", t_tol, "bisection tolerance");
  sinf->add_option("--k-schedule", schedule_str, "comma list of truncation sizes");

  auto* dinf = app.add_subcommand("delta-inf", "entropy-at-infinity estimates");
  dinf->add_option("--K", K, "counting truncation");
  dinf->add_option("--M-list", M_list_str, "excursion constraints");
  dinf->add_option("--q-list", q_list_str, "low-symbol thresholds");
  dinf->add_option("--n-max", n_max, "counting depth");
  dinf->add_option("--cert-k", cert_k, "certificate truncation (0 = skip)");
  dinf->add_option("--offsets", offsets_str, "translation offsets");

  auto* susp = app.add_subcommand("suspension-check", "roof/Abramov diagnostics");
  susp->add_option("--m-list", m_list_str, "roof orders");
  susp->add_option("--k", k, "truncation size");
  susp->add_option("--samples", samples, "random measures per order");

  auto* spec = app.add_subcommand("spectrum", "conditional variational dimension");
  spec->add_option("--gamma", gamma_str, "comma list of moment targets");
  spec->add_option("--gamma-grid", grid_str, "start:stop:step over the first target");
  spec->add_option("--k", k, "truncation size");

  auto* freq = app.add_subcommand("freq-spectrum", "frequency-of-digit spectrum");
  freq->add_option("--gamma", gamma_str, "comma list of digit frequencies");
  freq->add_option("--gamma-grid", grid_str, "start:stop:step over the first frequency");
  freq->add_option("--k", k, "truncation size");

  auto* tdim = app.add_subcommand("transient-dim", "closed-form transient dimension");
  tdim->add_option("--lambda", lambda_flag, "f_lambda parameter (overrides config)");

  CLI11_PARSE(app, argc, argv);

  Output out;
  out.prefix = out_prefix;
  out.report["schema"] = "1";

  try {
    json cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    int rc = 0;
    if (app.got_subcommand(pressure)) {
      out.report["command"] = "pressure";
      rc = run_pressure(cfg, out, k, n_max, a, false, {});
    } else if (app.got_subcommand(entropy_cmd)) {
      out.report["command"] = "entropy";
      rc = run_pressure(cfg, out, k, n_max, a, true, parse_int_list(k_list_str));
    } else if (app.got_subcommand(sinf)) {
      out.report["command"] = "s-inf";
      rc = run_s_inf(cfg, out, t_tol, parse_int_list(schedule_str));
    } else if (app.got_subcommand(dinf)) {
      out.report["command"] = "delta-inf";
      rc = run_delta_inf(cfg, out, K, parse_int_list(M_list_str), parse_int_list(q_list_str),
                         n_max, cert_k, parse_int_list(offsets_str));
    } else if (app.got_subcommand(susp)) {
      out.report["command"] = "suspension-check";
      rc = run_suspension_check(cfg, out, parse_int_list(m_list_str), k, samples);
    } else if (app.got_subcommand(spec)) {
      out.report["command"] = "spectrum";
      rc = run_spectrum(cfg, out, gamma_str, grid_str, k, false);
    } else if (app.got_subcommand(freq)) {
      out.report["command"] = "freq-spectrum";
      rc = run_spectrum(cfg, out, gamma_str, grid_str, k, true);
    } else if (app.got_subcommand(tdim)) {
      out.report["command"] = "transient-dim";
      rc = run_transient_dim(cfg, out, lambda_flag);
    }
    out.write();
    return rc;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
