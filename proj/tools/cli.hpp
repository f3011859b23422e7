#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hotrace/hotrace.hpp"
#include "table.hpp"

namespace hotrace::cli {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitDomain = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitUsage = 64;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  double a = 0.0;
  double b = 0.0;
  int n = 1;

  std::vector<double> points() const { return linspace(a, b, n); }
};

/// "a:b:n" -> n evenly spaced points from a to b.
inline GridSpec parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("grid spec must look like a:b:n, got '" + text + "'");
  GridSpec g;
  try {
    std::size_t used = 0;
    g.a = std::stod(text.substr(0, c1), &used);
    g.b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    g.n = std::stoi(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw UsageError("grid spec must look like a:b:n, got '" + text + "'");
  }
  if (g.n < 1 || (g.n > 1 && !(g.b > g.a))) throw UsageError("grid spec needs n >= 1 and b > a: '" + text + "'");
  return g;
}

struct RunConfig {
  std::string subcommand;
  int dimension = 3;
  double omega = 1.0;
  double hbar = 1.0;
  int alpha = 2;
  double epsilon = 0.0;
  std::vector<std::string> terms;  // "epsilon:alpha", overrides alpha/epsilon when present
  std::string output;              // empty: stdout
  std::string format = "csv";
  int order = 200;
  int k_max = 10;
  double width = 0.1;
  std::string e_range;             // empty: subcommand default
  std::string sigma_range = "0.5:50:100";
  int k = 1;
  std::string method = "quad";
  std::string prefactor = "leading";
  int alpha_max = 10;
  bool exact = false;
  bool verify = false;
  int s_max = 3;
  int nr_max = -1;                 // -1: automatic
  int l_max = -1;
  std::string levels_out;
  std::string levels_in;
  std::string check = "all";
  std::uint64_t seed = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  SystemParams system() const {
    SystemParams p{dimension, omega, hbar, {}};
    if (terms.empty()) {
      p.terms.push_back({epsilon, alpha});
    } else {
      for (const auto& t : terms) {
        const auto colon = t.find(':');
        if (colon == std::string::npos) throw UsageError("--term must be epsilon:alpha, got '" + t + "'");
        try {
          p.terms.push_back({std::stod(t.substr(0, colon)), std::stoi(t.substr(colon + 1))});
        } catch (const std::exception&) {
          throw UsageError("--term must be epsilon:alpha, got '" + t + "'");
        }
      }
    }
    p.validate();
    return p;
  }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, subcommand, dimension, omega, hbar, alpha, epsilon, terms,
                                                output, format, order, k_max, width, e_range, sigma_range, k, method,
                                                prefactor, alpha_max, exact, verify, s_max, nr_max, l_max, levels_out,
                                                levels_in, check, seed)

inline std::string default_e_range(const std::string& subcommand) {
  return subcommand == "compare" ? "5:50:2251" : "1:70:3451";
}

namespace detail {

inline std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("HOTRACE_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

inline void emit_text(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  const auto path = resolve_output(cfg.output);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file " + path.string());
  f << text;
}

inline void emit_table(const RunConfig& cfg, const Table& t, std::ostream& out) {
  std::ostringstream ss;
  if (cfg.format == "json") {
    ss << table_json(t).dump(2) << '\n';
  } else {
    write_csv(ss, t);
  }
  emit_text(cfg, ss.str(), out);
}

inline ModulationMethod parse_method(const std::string& m) {
  if (m == "quad") return ModulationMethod::quadrature;
  if (m == "closed") return ModulationMethod::closed_form;
  if (m == "spa") return ModulationMethod::spa;
  throw UsageError("unknown method '" + m + "'");
}

inline TraceOptions trace_options(const RunConfig& cfg) {
  TraceOptions opt;
  opt.method = parse_method(cfg.method);
  opt.quadrature_order = cfg.order;
  if (cfg.prefactor == "extended") opt.prefactor = Prefactor::extended;
  else if (cfg.prefactor != "leading") throw UsageError("unknown prefactor '" + cfg.prefactor + "'");
  return opt;
}

inline std::vector<double> energy_grid(const RunConfig& cfg) {
  const auto spec = parse_grid(cfg.e_range.empty() ? default_e_range(cfg.subcommand) : cfg.e_range);
  auto e = spec.points();
  for (double& x : e) x *= cfg.hbar * cfg.omega;
  return e;
}

inline Table levels_table(const std::vector<EbkLevel>& levels, double hw) {
  Table t{{"n_r", "l", "E_over_hbar_omega", "degeneracy"}, {}};
  for (const auto& lev : levels) {
    t.add({std::int64_t{lev.n_r}, std::int64_t{lev.l}, lev.energy / hw, lev.degeneracy});
  }
  return t;
}

inline std::vector<EbkLevel> read_levels(const std::string& path, double hw) {
  std::ifstream f(resolve_output(path));
  if (!f) throw DomainError("cannot read level file " + path);
  std::string line;
  std::getline(f, line);
  if (line != "n_r,l,E_over_hbar_omega,degeneracy") throw DomainError("unexpected level file header in " + path);
  std::vector<EbkLevel> levels;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c, d;
    std::getline(row, a, ',');
    std::getline(row, b, ',');
    std::getline(row, c, ',');
    std::getline(row, d, ',');
    levels.push_back({std::stoi(a), std::stoi(b), std::stod(c) * hw, std::stoll(d)});
  }
  return levels;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline void cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
  if (cfg.alpha_max < 1) throw DomainError("--alpha-max must be >= 1");
  if (cfg.verify) {
    Table t{{"alpha", "legendre_match"}, {}};
    for (const auto& c : verify_legendre_form(cfg.alpha_max)) {
      t.add({std::int64_t{c.alpha}, std::string(c.pass ? "true" : "false")});
    }
    detail::emit_table(cfg, t, out);
    return;
  }
  Table t{{"alpha", "j", "numerator", "denominator"}, {}};
  if (!cfg.exact) t.columns.push_back("a_j");
  for (int alpha = 1; alpha <= cfg.alpha_max; ++alpha) {
    const auto& exact = action_coefficients(alpha);
    for (std::size_t j = 0; j < exact.coeffs.size(); ++j) {
      const auto& q = exact.coeffs[j];
      std::vector<Cell> row{std::int64_t{alpha}, static_cast<std::int64_t>(j),
                            boost::multiprecision::numerator(q).str(), boost::multiprecision::denominator(q).str()};
      if (!cfg.exact) row.emplace_back(to_double(q));
      t.add(std::move(row));
    }
  }
  detail::emit_table(cfg, t, out);
}

inline void cmd_modfactor(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto poly = action_polynomial(cfg.alpha);
  const auto grid = parse_grid(cfg.sigma_range).points();
  std::vector<std::string> methods;
  if (cfg.method == "all") {
    methods = {"quad", "closed", "spa"};
    if (poly.alpha < 2 || poly.alpha > 3) {
      err << "modfactor: closed form skipped for alpha=" << poly.alpha << "\n";
      methods = {"quad", "spa"};
    }
    if (poly.alpha < 2) methods = {"quad"};
  } else {
    detail::parse_method(cfg.method);
    methods = {cfg.method};
  }
  Table t;
  t.columns.push_back("x");
  for (const auto& m : methods) {
    for (const char* part : {"re_", "im_", "abs_"}) t.columns.push_back(part + m);
  }
  for (double x : grid) {
    std::vector<Cell> row{x};
    for (const auto& m : methods) {
      Complex v;
      if (m == "quad") v = modulation_quadrature(poly, x, cfg.dimension, cfg.k, cfg.order).value;
      else if (m == "closed") v = modulation_closed_form(poly, x, cfg.dimension, cfg.k).value;
      else if (x == 0.0) v = Complex(std::nan(""), std::nan(""));
      else v = modulation_spa(poly, x, cfg.dimension, cfg.k).value;
      row.insert(row.end(), {v.real(), v.imag(), std::abs(v)});
    }
    t.add(std::move(row));
  }
  detail::emit_table(cfg, t, out);
}

inline void cmd_dos(const RunConfig& cfg, std::ostream& out) {
  const auto params = cfg.system();
  const double hw = params.hbar * params.omega;
  const auto curve = dos_curve(params, detail::energy_grid(cfg), cfg.k_max, cfg.width * hw, detail::trace_options(cfg));
  Table t{{"E_over_hbar_omega", "smooth", "oscillating"}, {}};
  for (std::size_t i = 0; i < curve.size(); ++i) t.add({curve.energies[i] / hw, curve.smooth[i], curve.oscillating[i]});
  detail::emit_table(cfg, t, out);
}

inline void cmd_supershell(const RunConfig& cfg, std::ostream& out) {
  const auto nodes = supershell_nodes(cfg.system(), cfg.s_max);
  Table t{{"s", "n_s"}, {}};
  for (std::size_t s = 0; s < nodes.size(); ++s) t.add({static_cast<std::int64_t>(s + 1), nodes[s]});
  detail::emit_table(cfg, t, out);
}

inline void cmd_ebk(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto params = cfg.system();
  const int nr_max = cfg.nr_max < 0 ? 10 : cfg.nr_max;
  const int l_max = cfg.l_max < 0 ? 20 : cfg.l_max;
  std::vector<EbkLevel> levels;
  int skipped = 0;
  for (int l = 0; l <= l_max; ++l) {
    for (int n_r = 0; n_r <= nr_max; ++n_r) {
      try {
        levels.push_back(ebk_energy(params, n_r, l));
      } catch (const NoBoundStateError&) {
        ++skipped;
      }
    }
  }
  if (skipped > 0) err << "ebk: " << skipped << " levels above the barrier were excluded\n";
  const auto table = detail::levels_table(levels, params.hbar * params.omega);
  if (!cfg.levels_out.empty()) {
    RunConfig file_cfg = cfg;
    file_cfg.output = cfg.levels_out;
    file_cfg.format = "csv";
    detail::emit_table(file_cfg, table, out);
  }
  detail::emit_table(cfg, table, out);
}

inline void cmd_ebk_dos(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto params = cfg.system();
  const double hw = params.hbar * params.omega;
  const auto energies = detail::energy_grid(cfg);
  EbkDos dos;
  if (!cfg.levels_in.empty()) {
    dos = ebk_dos_from_levels(params, energies, cfg.width * hw, detail::read_levels(cfg.levels_in, hw));
  } else {
    std::optional<int> nr, l;
    if (cfg.nr_max >= 0) nr = cfg.nr_max;
    if (cfg.l_max >= 0) l = cfg.l_max;
    dos = ebk_dos(params, energies, cfg.width * hw, nr, l);
    if (dos.truncated) {
      err << "ebk-dos: warning: cutoffs omit levels within 5w of the grid; missing density <= "
          << format_double(dos.missing_weight_bound) << "\n";
    }
  }
  Table t{{"E_over_hbar_omega", "g_ebk", "g_smooth", "dg_ebk"}, {}};
  for (std::size_t i = 0; i < dos.energies.size(); ++i) {
    t.add({dos.energies[i] / hw, dos.g_ebk[i], dos.g_smooth[i], dos.dg_ebk[i]});
  }
  detail::emit_table(cfg, t, out);
}

// Oracle checks -------------------------------------------------------------

inline nlohmann::ordered_json oracle_delta_s(std::mt19937_64& rng, int cases) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const int alpha = 1 + static_cast<int>(unit(rng) * 12.0) % 12;
    const double eps = (unit(rng) - 0.5) * 0.02;
    const double omega = 0.5 + 1.5 * unit(rng);
    const double energy = std::pow(10.0, -0.5 + 2.0 * unit(rng));
    const double lt = unit(rng);
    const auto orbit = ellipse_from_energy(energy, lt, omega);
    const double oracle = delta_s_oracle(orbit, eps, alpha, 256);
    const double model = delta_s(action_polynomial(alpha), sigma_alpha(energy, eps, alpha, omega), orbit.ltilde());
    worst = std::max(worst, std::abs(oracle - model) / std::abs(oracle));
  }
  return {{"pass", worst <= 1e-10}, {"cases", cases}, {"max_rel_error", worst}};
}

inline nlohmann::ordered_json oracle_conservation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_e = 0.0, worst_l = 0.0;
  int cases = 0;
  for (int dim = 2; dim <= 4; ++dim) {
    for (int alpha = 2; alpha <= 3; ++alpha) {
      const auto params = monomial_system(dim, 0.01 * unit(rng), alpha);
      PhaseState s;
      for (int i = 0; i < dim; ++i) {
        s.q.push_back(unit(rng) - 0.5);
        s.p.push_back(unit(rng) - 0.5);
      }
      const double period = 2.0 * std::numbers::pi / params.omega;
      const auto traj = integrate_orbit(params, s, 10.0 * period, period / 4000.0, 100);
      const double e0 = hamiltonian(params, s);
      const auto l0 = angular_momentum(s);
      for (const auto& st : traj) {
        worst_e = std::max(worst_e, std::abs(hamiltonian(params, st) - e0) / std::abs(e0));
        const auto l = angular_momentum(st);
        for (std::size_t c = 0; c < l.components.size(); ++c) {
          worst_l = std::max(worst_l, std::abs(l.components[c] - l0.components[c]) / l0.magnitude);
        }
      }
      ++cases;
    }
  }
  return {{"pass", worst_e <= 1e-9 && worst_l <= 1e-9},
          {"cases", cases},
          {"max_energy_drift", worst_e},
          {"max_angular_momentum_drift", worst_l}};
}

inline void cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  if (cfg.check != "all" && cfg.check != "delta-s" && cfg.check != "conservation") {
    throw UsageError("--check must be all, delta-s or conservation");
  }
  std::mt19937_64 rng(cfg.seed);
  nlohmann::ordered_json report;
  report["seed"] = cfg.seed;
  bool pass = true;
  if (cfg.check == "all" || cfg.check == "delta-s") {
    report["delta_s"] = oracle_delta_s(rng, 100);
    pass = pass && report["delta_s"]["pass"].get<bool>();
  }
  if (cfg.check == "all" || cfg.check == "conservation") {
    report["conservation"] = oracle_conservation(rng);
    pass = pass && report["conservation"]["pass"].get<bool>();
  }
  report["pass"] = pass;
  detail::emit_text(cfg, report.dump(2) + "\n", out);
}

// Cross-pipeline comparison -------------------------------------------------

struct Comparison {
  double rms_difference = 0.0;
  double pearson = 0.0;
  std::vector<double> nodes_pert;
  std::vector<double> nodes_ebk;
};

/// Envelope nodes from the sliding maximum of |dg| over one shell period.
inline std::vector<double> shell_envelope_nodes(const std::vector<double>& e_over_hw, const std::vector<double>& dg) {
  const auto env = running_max_envelope(e_over_hw, dg, 0.5);
  return envelope_nodes(e_over_hw, env, 4.0, 0.5);
}

inline Comparison compare_pipelines(const SystemParams& params, const std::vector<double>& energies, int k_max,
                                    double width, const TraceOptions& opt) {
  const double hw = params.hbar * params.omega;
  const auto pert = dos_curve(params, energies, k_max, width, opt);
  const auto ebk = ebk_dos(params, energies, width);
  Comparison c;
  double sq = 0.0;
  std::vector<double> x;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double d = pert.oscillating[i] - ebk.dg_ebk[i];
    sq += d * d;
    x.push_back(energies[i] / hw);
  }
  c.rms_difference = std::sqrt(sq / static_cast<double>(energies.size()));
  c.pearson = pearson_correlation(pert.oscillating, ebk.dg_ebk);
  c.nodes_pert = shell_envelope_nodes(x, pert.oscillating);
  c.nodes_ebk = shell_envelope_nodes(x, ebk.dg_ebk);
  return c;
}

inline void cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const auto params = cfg.system();
  const double hw = params.hbar * params.omega;
  const auto c = compare_pipelines(params, detail::energy_grid(cfg), cfg.k_max, cfg.width * hw, detail::trace_options(cfg));
  const std::size_t pairs = std::min(c.nodes_pert.size(), c.nodes_ebk.size());
  std::vector<double> offsets;
  for (std::size_t i = 0; i < pairs; ++i) offsets.push_back(c.nodes_pert[i] - c.nodes_ebk[i]);
  if (cfg.format == "json") {
    nlohmann::ordered_json j{{"rms_difference", c.rms_difference},
                             {"pearson", c.pearson},
                             {"nodes_pert", c.nodes_pert},
                             {"nodes_ebk", c.nodes_ebk},
                             {"node_offsets", offsets}};
    detail::emit_text(cfg, j.dump(2) + "\n", out);
    return;
  }
  auto joined = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
    return s;
  };
  Table t{{"metric", "value"}, {}};
  t.add({std::string("rms_difference"), format_double(c.rms_difference)});
  t.add({std::string("pearson"), format_double(c.pearson)});
  t.add({std::string("nodes_pert"), joined(c.nodes_pert)});
  t.add({std::string("nodes_ebk"), joined(c.nodes_ebk)});
  t.add({std::string("node_offsets"), joined(offsets)});
  detail::emit_table(cfg, t, out);
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

inline void add_system_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--D", cfg.dimension, "Spatial dimension")->capture_default_str();
  sub->add_option("--omega", cfg.omega, "Trap frequency")->capture_default_str();
  sub->add_option("--hbar", cfg.hbar, "Reduced Planck constant")->capture_default_str();
  sub->add_option("--alpha", cfg.alpha, "Perturbation order alpha in eps r^(2 alpha)")->capture_default_str();
  sub->add_option("--epsilon", cfg.epsilon, "Perturbation strength")->capture_default_str();
  sub->add_option("--term", cfg.terms, "Polynomial term epsilon:alpha (repeatable; replaces --alpha/--epsilon)");
}

inline void add_output_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("-o,--output", cfg.output, "Output file (default stdout; relative paths honour HOTRACE_OUTPUT_DIR)");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

inline void configure(CLI::App& app, RunConfig& cfg) {
  app.require_subcommand(1);

  auto* coeffs = app.add_subcommand("coeffs", "Action-polynomial coefficients a_j");
  coeffs->add_option("--alpha-max", cfg.alpha_max, "Largest alpha")->capture_default_str();
  coeffs->add_flag("--exact", cfg.exact, "Print exact rationals");
  coeffs->add_flag("--verify", cfg.verify, "Check against l^alpha P_alpha(1/l) instead");
  add_output_options(coeffs, cfg);

  auto* mod = app.add_subcommand("modfactor", "Modulation factor M_k versus sigma/hbar");
  add_system_options(mod, cfg);
  mod->add_option("--k", cfg.k, "Repetition number")->capture_default_str();
  mod->add_option("--sigma-over-hbar-range", cfg.sigma_range, "Grid a:b:n of sigma/hbar")->capture_default_str();
  mod->add_option("--method", cfg.method, "Backend")->check(CLI::IsMember({"quad", "closed", "spa", "all"}))
      ->capture_default_str();
  mod->add_option("--order", cfg.order, "Gauss-Legendre order")->capture_default_str();
  add_output_options(mod, cfg);

  auto* dos = app.add_subcommand("dos", "Perturbative trace-formula density of states");
  add_system_options(dos, cfg);
  dos->add_option("--k-max", cfg.k_max, "Largest repetition number")->capture_default_str();
  dos->add_option("--width", cfg.width, "Gaussian width in units of hbar*omega")->capture_default_str();
  dos->add_option("--e-range", cfg.e_range, "Energy grid a:b:n in units of hbar*omega [1:70:3451]");
  dos->add_option("--method", cfg.method, "Modulation backend")->check(CLI::IsMember({"quad", "closed", "spa"}))
      ->capture_default_str();
  dos->add_option("--prefactor", cfg.prefactor, "Amplitude prefactor")->check(CLI::IsMember({"leading", "extended"}))
      ->capture_default_str();
  dos->add_option("--order", cfg.order, "Gauss-Legendre order")->capture_default_str();
  add_output_options(dos, cfg);

  auto* shell = app.add_subcommand("supershell", "Super-shell node energies (D=3, alpha 2 or 3)");
  add_system_options(shell, cfg);
  shell->add_option("--s-max", cfg.s_max, "Number of nodes")->capture_default_str();
  add_output_options(shell, cfg);

  auto* ebk = app.add_subcommand("ebk", "EBK levels");
  add_system_options(ebk, cfg);
  ebk->add_option("--nr-max", cfg.nr_max, "Largest radial quantum number [10]");
  ebk->add_option("--l-max", cfg.l_max, "Largest angular quantum number [20]");
  ebk->add_option("--levels-out", cfg.levels_out, "Also write the level CSV to this file");
  add_output_options(ebk, cfg);

  auto* ebk_dos_cmd = app.add_subcommand("ebk-dos", "Gaussian-smoothed EBK density of states");
  add_system_options(ebk_dos_cmd, cfg);
  ebk_dos_cmd->add_option("--width", cfg.width, "Gaussian width in units of hbar*omega")->capture_default_str();
  ebk_dos_cmd->add_option("--e-range", cfg.e_range, "Energy grid a:b:n in units of hbar*omega [1:70:3451]");
  ebk_dos_cmd->add_option("--nr-max", cfg.nr_max, "Radial cutoff [automatic]");
  ebk_dos_cmd->add_option("--l-max", cfg.l_max, "Angular cutoff [automatic]");
  ebk_dos_cmd->add_option("--levels-in", cfg.levels_in, "Read levels from a CSV written by 'ebk'");
  add_output_options(ebk_dos_cmd, cfg);

  auto* oracle = app.add_subcommand("oracle", "Classical-mechanics oracle checks (JSON report)");
  oracle->add_option("--check", cfg.check, "Which checks")->check(CLI::IsMember({"all", "delta-s", "conservation"}))
      ->capture_default_str();
  oracle->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  oracle->add_option("-o,--output", cfg.output, "Output file (default stdout)");

  auto* cmp = app.add_subcommand("compare", "Trace formula versus EBK on a shared grid");
  add_system_options(cmp, cfg);
  cmp->add_option("--k-max", cfg.k_max, "Largest repetition number")->capture_default_str();
  cmp->add_option("--width", cfg.width, "Gaussian width in units of hbar*omega")->capture_default_str();
  cmp->add_option("--e-range", cfg.e_range, "Energy grid a:b:n in units of hbar*omega [5:50:2251]");
  cmp->add_option("--method", cfg.method, "Modulation backend")->check(CLI::IsMember({"quad", "closed", "spa"}))
      ->capture_default_str();
  cmp->add_option("--order", cfg.order, "Gauss-Legendre order")->capture_default_str();
  add_output_options(cmp, cfg);
}

/// Parses args (without the program name) into a config; throws CLI::ParseError.
inline RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"hotrace"};
  configure(app, cfg);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return cfg;
}

inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& s = cfg.subcommand;
  if (s == "coeffs") cmd_coeffs(cfg, out);
  else if (s == "modfactor") cmd_modfactor(cfg, out, err);
  else if (s == "dos") cmd_dos(cfg, out);
  else if (s == "supershell") cmd_supershell(cfg, out);
  else if (s == "ebk") cmd_ebk(cfg, out, err);
  else if (s == "ebk-dos") cmd_ebk_dos(cfg, out, err);
  else if (s == "oracle") cmd_oracle(cfg, out);
  else if (s == "compare") cmd_compare(cfg, out);
  else throw UsageError("unknown subcommand '" + s + "'");
  return kExitOk;
}

/// Full command-line entry point. Exit codes: 0 success, 2 domain error,
/// 3 accuracy error, 64 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Perturbative trace formula for isotropic harmonic oscillators"};
  configure(app, cfg);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print the parsed configuration as JSON and exit");
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (print_config) {
      out << nlohmann::json(cfg).dump(2) << "\n";
      return kExitOk;
    }
    return execute(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitDomain;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace hotrace::cli
