// Command-line front door: single-point experiment commands plus the named
// check presets, JSON config merging (flags win), and self-describing output
// files. The CLI only composes library calls; no numerics live here.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dirac1d/experiments.hpp"

namespace {

using namespace dirac1d;
using json = nlohmann::json;

std::string g17(double x) { return format_g17(x); }

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok = text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (tok.empty()) throw std::invalid_argument(std::string(what) + ": empty list entry");
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(std::string(what) + ": bad number '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

LatticeWindow window_for(long n_sites) {
  if (n_sites < 2) throw std::invalid_argument("window: need at least 2 sites");
  const long lo = -(n_sites / 2);
  return LatticeWindow(lo, lo + n_sites - 1);
}

PotentialSpec make_spec(double v, double p) {
  if (v < 0.0) throw std::invalid_argument("potential amplitude must be >= 0");
  if (v == 0.0) return PotentialSpec::constant(0.0);
  PotentialSpec s = PotentialSpec::bernoulli(v);
  s.p_plus = p;
  return s;
}

// Output routing shared by every subcommand: CSV body to stdout, and the same
// body behind a provenance header when --out / --plot-data name files.
struct Sink {
  std::string outdir;  // --outdir, else $DIRAC1D_OUTDIR, else "."
  std::string out_name;
  std::string plot_name;

  std::string resolved_dir() const {
    if (!outdir.empty()) return outdir;
    if (const char* env = std::getenv("DIRAC1D_OUTDIR"); env && *env) return env;
    return ".";
  }

  void emit(const std::string& csv_body, const std::string& plot_body,
            const Provenance& kv) const {
    std::fputs(csv_body.c_str(), stdout);
    std::fflush(stdout);
    if (out_name.empty() && plot_name.empty()) return;
    const std::filesystem::path dir(resolved_dir());
    std::filesystem::create_directories(dir);
    if (!out_name.empty())
      write_text_file((dir / out_name).string(), provenance_header(kv) + csv_body);
    if (!plot_name.empty())
      write_text_file((dir / plot_name).string(), provenance_header(kv) + plot_body);
  }
};

void add_sink(CLI::App* sub, Sink& sink) {
  sub->add_option("--outdir", sink.outdir, "output directory (default: $DIRAC1D_OUTDIR or .)");
  sub->add_option("--out", sink.out_name, "write the CSV table to this file");
  sub->add_option("--plot-data", sink.plot_name, "write a gnuplot-ready two-column file");
}

// --- JSON config merging -----------------------------------------------------
//
// A config file is flat JSON (optionally with one nested object per
// subcommand). Its entries are turned into flag tokens injected right after
// the subcommand name, so explicit command-line flags always win through the
// take-last option policy.

std::string json_scalar_to_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return g17(v.get<double>());
  throw std::invalid_argument("config: unsupported value type for '" + v.dump() + "'");
}

std::string json_value_to_token(const json& v) {
  if (v.is_array()) {
    std::string joined;
    for (const auto& e : v) joined += (joined.empty() ? "" : ",") + json_scalar_to_token(e);
    if (joined.empty()) throw std::invalid_argument("config: empty array value");
    return joined;
  }
  return json_scalar_to_token(v);
}

std::vector<std::string> config_tokens(const std::string& path, const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  json doc = json::parse(in);  // json::exception maps to a usage error
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");

  std::map<std::string, std::string> merged;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) continue;  // per-subcommand sections handled below
    merged[key] = json_value_to_token(value);
  }
  if (auto it = doc.find(subcommand); it != doc.end() && it->is_object())
    for (const auto& [key, value] : it->items()) merged[key] = json_value_to_token(value);

  std::vector<std::string> tokens;
  for (const auto& [key, value] : merged) {
    std::string flag = "--" + key;
    for (char& ch : flag)
      if (ch == '_') ch = '-';
    tokens.push_back(flag + "=" + value);
  }
  return tokens;
}

// Inject config-file tokens right after the subcommand token.
std::vector<std::string> assemble_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string subcommand, config_path;
  std::size_t sub_pos = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (subcommand.empty() && !args[i].empty() && args[i][0] != '-') {
      subcommand = args[i];
      sub_pos = i;
    }
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (subcommand.empty() || config_path.empty()) return args;
  const std::vector<std::string> extra = config_tokens(config_path, subcommand);
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, extra.begin(), extra.end());
  return args;
}

// --- check presets -----------------------------------------------------------

using CriterionFn = CriterionResult (*)();

const std::vector<std::pair<std::string, std::vector<CriterionFn>>>& presets() {
  static const std::vector<std::pair<std::string, std::vector<CriterionFn>>> table = {
      {"check:theorem-3.2", {&criterion_lyapunov_signatures, &criterion_classifier_agreement}},
      {"check:theorem-3.4", {&criterion_critical_pairs}},
      {"check:theorem-3.5", {&criterion_cross_route_identity, &criterion_transport_contrast}},
      {"check:theorem-3.6", {&criterion_ballistic_ceiling}},
      {"check:theorem-2.1", {&criterion_nonrel_rate}},
      {"check:theorem-6.1", {&criterion_mass_scaling}},
  };
  return table;
}

int run_preset(const std::vector<CriterionFn>& fns) {
  bool all = true;
  for (CriterionFn fn : fns) {
    const CriterionResult res = fn();
    std::printf("[%s] criterion %2d: %s (%.1f s) %s\n", res.pass ? "PASS" : "FAIL", res.id,
                res.name.c_str(), res.seconds, res.detail.c_str());
    std::fflush(stdout);
    all = all && res.pass;
  }
  return all ? 0 : 1;
}

// --- subcommand bodies ---------------------------------------------------

struct Common {
  double m = 0.0, c = 1.0, v = 0.5, p = 0.5;
  std::uint64_t seed = 0;
  std::string config;  // consumed before parsing; registered so CLI11 accepts it
};

void add_common(CLI::App* sub, Common& par, double v_default) {
  par.v = v_default;
  sub->add_option("--m", par.m, "mass");
  sub->add_option("--c", par.c, "speed of light");
  sub->add_option("--V", par.v, "Bernoulli potential amplitude (0 = free)");
  sub->add_option("--p", par.p, "probability of +V");
  sub->add_option("--seed", par.seed, "master seed");
  sub->add_option("--config", par.config, "JSON config file merged under the flags");
}

int cmd_lyapunov(const Common& par, double e, double steps, int realizations, const Sink& sink) {
  const auto est = lyapunov(e, DiracParams(par.m, par.c), make_spec(par.v, par.p),
                            static_cast<long>(steps), realizations, par.seed);
  const Provenance kv = {{"command", "lyapunov"}, {"E", g17(e)},
                         {"V", g17(par.v)},       {"m", g17(par.m)},
                         {"c", g17(par.c)},       {"p", g17(par.p)},
                         {"steps", std::to_string(est.steps)},
                         {"realizations", std::to_string(est.realizations)},
                         {"seed", std::to_string(par.seed)}};
  std::string csv = "E,V,m,c,p,gamma,stderr,steps,realizations,seed\n";
  csv += g17(e) + "," + g17(par.v) + "," + g17(par.m) + "," + g17(par.c) + "," + g17(par.p) +
         "," + g17(est.gamma) + "," + g17(est.stderr_) + "," + std::to_string(est.steps) + "," +
         std::to_string(est.realizations) + "," + std::to_string(par.seed) + "\n";
  sink.emit(csv, g17(e) + " " + g17(est.gamma) + "\n", kv);
  return 0;
}

int cmd_classify(const Common& par, double e, const Sink& sink) {
  const auto cls = predict_localization(e, par.v, DiracParams(par.m, par.c));
  const bool zero = cls.verdict == LocalizationPrediction::Verdict::ZeroLyapunov;
  const char* reason = cls.reason == LocalizationPrediction::Reason::CriticalEnergy ? "CriticalEnergy"
                       : cls.reason == LocalizationPrediction::Reason::CriticalPair ? "CriticalPair"
                                                                                    : "None";
  const Provenance kv = {{"command", "classify"}, {"E", g17(e)},     {"V", g17(par.v)},
                         {"m", g17(par.m)},       {"c", g17(par.c)}};
  std::string csv = "E,V,m,c,verdict,reason\n";
  csv += g17(e) + "," + g17(par.v) + "," + g17(par.m) + "," + g17(par.c) + "," +
         (zero ? "ZeroLyapunov" : "PositiveLyapunov") + "," + reason + "\n";
  sink.emit(csv, g17(e) + " " + (zero ? "0" : "1") + "\n", kv);
  return 0;
}

Provenance base_kv(const char* command, const Common& par, long n_sites) {
  return {{"command", command}, {"V", g17(par.v)},
          {"m", g17(par.m)},    {"c", g17(par.c)},
          {"p", g17(par.p)},    {"N", std::to_string(n_sites)},
          {"seed", std::to_string(par.seed)}};
}

int cmd_spectrum(const Common& par, long n_sites, const Sink& sink) {
  const LatticeWindow w = window_for(n_sites);
  const auto omega = sample_realization(make_spec(par.v, par.p), w, par.seed, 0);
  const auto sys = eigensolve(build_dirac(DiracParams(par.m, par.c), omega));
  std::string csv = "index,eigenvalue\n", plot;
  for (std::size_t j = 0; j < sys.count(); ++j) {
    const std::string val = g17(sys.values[static_cast<Eigen::Index>(j)]);
    csv += std::to_string(j) + "," + val + "\n";
    plot += std::to_string(j) + " " + val + "\n";
  }
  sink.emit(csv, plot, base_kv("spectrum", par, n_sites));
  return 0;
}

int cmd_greens(const Common& par, long n_sites, double z_re, double z_im, const Sink& sink) {
  const LatticeWindow w = window_for(n_sites);
  const auto omega = sample_realization(make_spec(par.v, par.p), w, par.seed, 0);
  const auto column = greens_column(build_dirac(DiracParams(par.m, par.c), omega), {z_re, z_im});
  std::string csv = "n,G_plus_re,G_plus_im,G_minus_re,G_minus_im\n", plot;
  for (long n = w.n_min; n <= w.n_max; ++n) {
    const cdouble gp = column.plus(n), gm = column.minus(n);
    csv += std::to_string(n) + "," + g17(gp.real()) + "," + g17(gp.imag()) + "," +
           g17(gm.real()) + "," + g17(gm.imag()) + "\n";
    plot += std::to_string(n) + " " + g17(std::sqrt(std::norm(gp) + std::norm(gm))) + "\n";
  }
  Provenance kv = base_kv("greens", par, n_sites);
  kv.emplace_back("z", g17(z_re) + "+" + g17(z_im) + "i");
  sink.emit(csv, plot, kv);
  return 0;
}

int cmd_evolve(const Common& par, long n_sites, double t, const std::string& method,
               const Sink& sink) {
  const LatticeWindow w = window_for(n_sites);
  const auto omega = sample_realization(make_spec(par.v, par.p), w, par.seed, 0);
  const auto op = build_dirac(DiracParams(par.m, par.c), omega);
  if (method != "chebyshev" && method != "eigen")
    throw std::invalid_argument("evolve: method must be chebyshev or eigen");
  const Propagator prop = method == "eigen" ? eigen_propagator(op) : chebyshev_propagator(op);
  const SpinorState psi = evolve(prop, SpinorState::delta_plus(w, 0), t);
  std::string csv = "n,psi_plus_re,psi_plus_im,psi_minus_re,psi_minus_im\n", plot;
  for (long n = w.n_min; n <= w.n_max; ++n) {
    const cdouble up = psi.plus(n), dn = psi.minus(n);
    csv += std::to_string(n) + "," + g17(up.real()) + "," + g17(up.imag()) + "," +
           g17(dn.real()) + "," + g17(dn.imag()) + "\n";
    plot += std::to_string(n) + " " + g17(std::norm(up) + std::norm(dn)) + "\n";
  }
  Provenance kv = base_kv("evolve", par, n_sites);
  kv.emplace_back("t", g17(t));
  kv.emplace_back("method", method);
  sink.emit(csv, plot, kv);
  return 0;
}

long auto_half_width(const DiracParams& dp, double v, double t_max) {
  return detail::safe_half_width(dp.free_spectral_radius() + v, t_max);
}

int cmd_moments(const Common& par, long n_sites, double q, const std::string& times_text,
                const Sink& sink) {
  const std::vector<double> times = parse_list(times_text, "moments --times");
  const DiracParams dp(par.m, par.c);
  const long half = n_sites > 0 ? n_sites / 2 : auto_half_width(dp, par.v, times.back());
  const LatticeWindow w(-half, half - 1);
  const auto omega = sample_realization(make_spec(par.v, par.p), w, par.seed, 0);
  const Propagator prop = chebyshev_propagator(build_dirac(dp, omega));
  const MomentSeries series = moment_series(prop, SpinorState::delta_plus(w, 0), q, times);
  Provenance kv = base_kv("moments", par, w.sites());
  kv.emplace_back("q", g17(q));
  kv.emplace_back("boundary_contaminated", series.boundary_contaminated ? "1" : "0");
  std::string csv = "t,value\n", plot;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    csv += g17(series.times[i]) + "," + g17(series.values[i]) + "\n";
    plot += g17(series.times[i]) + " " + g17(series.values[i]) + "\n";
  }
  sink.emit(csv, plot, kv);
  return 0;
}

int cmd_laplace(const Common& par, long n_sites, double q, const std::string& horizon_text,
                const std::string& route, const Sink& sink) {
  const std::vector<double> horizons = parse_list(horizon_text, "laplace --T");
  if (route != "both" && route != "time" && route != "energy")
    throw std::invalid_argument("laplace: route must be both, time, or energy");
  const LatticeWindow w = window_for(n_sites);
  const auto omega = sample_realization(make_spec(par.v, par.p), w, par.seed, 0);
  const auto op = build_dirac(DiracParams(par.m, par.c), omega);
  const SpinorState psi = SpinorState::delta_plus(w, 0);
  Propagator prop;
  if (route != "energy") prop = chebyshev_propagator(op);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string csv = "T,A_time,A_energy,rel_diff\n", plot;
  for (double horizon : horizons) {
    double a_time = nan, a_energy = nan, rel = nan;
    if (route != "energy") a_time = laplace_moment_time(prop, psi, q, horizon).value;
    if (route != "time")
      a_energy = laplace_moment_energy(op, q, horizon, default_energy_grid(op, horizon, q)).value;
    if (route == "both") rel = std::abs(a_time - a_energy) / std::max(1e-300, std::abs(a_energy));
    csv += g17(horizon) + "," + g17(a_time) + "," + g17(a_energy) + "," + g17(rel) + "\n";
    plot += g17(horizon) + " " + g17(route == "energy" ? a_energy : a_time) + "\n";
  }
  Provenance kv = base_kv("laplace", par, n_sites);
  kv.emplace_back("q", g17(q));
  kv.emplace_back("route", route);
  sink.emit(csv, plot, kv);
  return 0;
}

int cmd_nonrel(const Common& par, long n_sites, double z_re, double z_im,
               const std::string& c_list_text, const Sink& sink) {
  const std::vector<double> speeds = parse_list(c_list_text, "nonrel-limit --c-list");
  const LatticeWindow w = window_for(n_sites);
  const auto omega = sample_realization(make_spec(par.v, par.p), w, par.seed, 0);
  std::string csv = "c,error,ratio\n", plot;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double speed : speeds) {
    const double err = nonrel_limit_error(speed, par.m, {z_re, z_im}, omega);
    csv += g17(speed) + "," + g17(err) + "," + g17(err / prev) + "\n";
    plot += g17(speed) + " " + g17(err) + "\n";
    prev = err;
  }
  Provenance kv = base_kv("nonrel-limit", par, n_sites);
  kv.emplace_back("z", g17(z_re) + "+" + g17(z_im) + "i");
  sink.emit(csv, plot, kv);
  return 0;
}

int cmd_compare_mass(const Common& par, long n_sites, double m_prime, double q,
                     const std::string& times_text, const Sink& sink) {
  const std::vector<double> times = parse_list(times_text, "compare-mass --times");
  const DiracParams wide(std::max(par.m, m_prime), par.c);
  const long half = n_sites > 0 ? n_sites / 2 : auto_half_width(wide, par.v, times.back());
  const LatticeWindow w(-half, half - 1);
  const auto omega = sample_realization(make_spec(par.v, par.p), w, par.seed, 0);
  const MassComparison cmp = mass_comparison(par.m, m_prime, par.c, omega, q, times);
  Provenance kv = base_kv("compare-mass", par, w.sites());
  kv.emplace_back("m_prime", g17(m_prime));
  kv.emplace_back("q", g17(q));
  kv.emplace_back("t_exponent", g17(cmp.t_exponent));
  kv.emplace_back("boundary_contaminated", cmp.boundary_contaminated ? "1" : "0");
  std::string csv = "T,sup_diff\n", plot;
  for (std::size_t i = 0; i < cmp.T_values.size(); ++i) {
    csv += g17(cmp.T_values[i]) + "," + g17(cmp.sup_diff[i]) + "\n";
    plot += g17(cmp.T_values[i]) + " " + g17(cmp.sup_diff[i]) + "\n";
  }
  sink.emit(csv, plot, kv);
  return 0;
}

int cmd_wegner(const Common& par, const std::string& l_list_text, double e, double theta,
               double tau, long realizations, const Sink& sink) {
  const std::vector<double> boxes = parse_list(l_list_text, "wegner --L");
  std::string csv = "L,probability,stderr,exact,samples,threshold\n", plot;
  for (double box : boxes) {
    const long box_l = static_cast<long>(box);
    const auto res = wegner_probability(e, box_l, theta, tau, DiracParams(par.m, par.c),
                                        make_spec(par.v, par.p), realizations, par.seed);
    csv += std::to_string(box_l) + "," + g17(res.probability) + "," + g17(res.stderr_) + "," +
           (res.exact ? "1" : "0") + "," + std::to_string(res.samples) + "," +
           g17(res.threshold) + "\n";
    plot += std::to_string(box_l) + " " + g17(res.probability) + "\n";
  }
  Provenance kv = {{"command", "wegner"},   {"E", g17(e)},
                   {"theta", g17(theta)},   {"tau", g17(tau)},
                   {"V", g17(par.v)},       {"m", g17(par.m)},
                   {"c", g17(par.c)},       {"p", g17(par.p)},
                   {"realizations", std::to_string(realizations)},
                   {"seed", std::to_string(par.seed)}};
  sink.emit(csv, plot, kv);
  return 0;
}

int cmd_critical_window(const Common& par, long n_sites, double lambda, double e,
                        const Sink& sink) {
  const LatticeWindow w(0, n_sites - 1);
  const auto omega = sample_realization(make_spec(par.v, par.p), w, par.seed, 0);
  const double critical_energy = std::isnan(e) ? par.v : e;
  const double log_sup =
      critical_window_supremum(omega, n_sites, lambda, DiracParams(par.m, par.c), critical_energy);
  Provenance kv = base_kv("critical-window", par, n_sites);
  kv.emplace_back("lambda", g17(lambda));
  kv.emplace_back("E", g17(critical_energy));
  std::string csv = "N,lambda,E,log_sup\n";
  csv += std::to_string(n_sites) + "," + g17(lambda) + "," + g17(critical_energy) + "," +
         g17(log_sup) + "\n";
  sink.emit(csv, std::to_string(n_sites) + " " + g17(log_sup) + "\n", kv);
  return 0;
}

int run_cli(int argc, char** argv) {
  // Presets bypass flag parsing: they are fixed experiments.
  if (argc >= 2 && std::string(argv[1]).rfind("check:", 0) == 0) {
    for (const auto& [name, fns] : presets())
      if (name == argv[1]) return run_preset(fns);
    std::fprintf(stderr, "unknown preset '%s'; available:\n", argv[1]);
    for (const auto& [name, fns] : presets()) std::fprintf(stderr, "  %s\n", name.c_str());
    return 2;
  }

  CLI::App app{
      "dirac1d: 1D discrete Dirac operator with Bernoulli disorder.\n"
      "Presets: check:theorem-3.2 check:theorem-3.4 check:theorem-3.5\n"
      "         check:theorem-3.6 check:theorem-2.1 check:theorem-6.1\n"
      "Output: CSV on stdout; --out/--plot-data write provenance-stamped files."};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  int rc = 0;

  auto* ly = app.add_subcommand("lyapunov", "Lyapunov exponent at one (E, V, m, c) point");
  Common ly_par;
  Sink ly_sink;
  double ly_e = 0.0, ly_steps = 1e6;
  int ly_reals = 16;
  add_common(ly, ly_par, 0.5);
  ly->add_option("--E", ly_e, "energy");
  ly->add_option("--steps", ly_steps, "transfer steps per realization");
  ly->add_option("--realizations", ly_reals, "disorder realizations");
  add_sink(ly, ly_sink);
  ly->callback([&] { rc = cmd_lyapunov(ly_par, ly_e, ly_steps, ly_reals, ly_sink); });

  auto* cl = app.add_subcommand("classify", "Zero- vs positive-exponent prediction at (E, V)");
  Common cl_par;
  Sink cl_sink;
  double cl_e = 0.0;
  add_common(cl, cl_par, 0.5);
  cl->add_option("--E", cl_e, "energy");
  add_sink(cl, cl_sink);
  cl->callback([&] { rc = cmd_classify(cl_par, cl_e, cl_sink); });

  auto* sp = app.add_subcommand("spectrum", "Dense spectrum of one finite-volume realization");
  Common sp_par;
  Sink sp_sink;
  long sp_n = 200;
  add_common(sp, sp_par, 1.0);
  sp->add_option("--N", sp_n, "window sites");
  add_sink(sp, sp_sink);
  sp->callback([&] { rc = cmd_spectrum(sp_par, sp_n, sp_sink); });

  auto* gr = app.add_subcommand("greens", "Green's-function column (D - z)^-1 delta_0^+");
  Common gr_par;
  Sink gr_sink;
  long gr_n = 200;
  double gr_zre = 0.0, gr_zim = 1.0;
  add_common(gr, gr_par, 1.0);
  gr->add_option("--N", gr_n, "window sites");
  gr->add_option("--z-re", gr_zre, "Re z");
  gr->add_option("--z-im", gr_zim, "Im z (nonzero)");
  add_sink(gr, gr_sink);
  gr->callback([&] { rc = cmd_greens(gr_par, gr_n, gr_zre, gr_zim, gr_sink); });

  auto* ev = app.add_subcommand("evolve", "Evolve delta_0^+ to time t");
  Common ev_par;
  Sink ev_sink;
  long ev_n = 400;
  double ev_t = 10.0;
  std::string ev_method = "chebyshev";
  add_common(ev, ev_par, 0.5);
  ev->add_option("--N", ev_n, "window sites");
  ev->add_option("--t", ev_t, "evolution time");
  ev->add_option("--method", ev_method, "chebyshev or eigen");
  add_sink(ev, ev_sink);
  ev->callback([&] { rc = cmd_evolve(ev_par, ev_n, ev_t, ev_method, ev_sink); });

  auto* mo = app.add_subcommand("moments", "Position-moment series M^(q)(t)");
  Common mo_par;
  Sink mo_sink;
  long mo_n = 0;
  double mo_q = 2.0;
  std::string mo_times = "5,10,20,40,80";
  add_common(mo, mo_par, 0.5);
  mo->add_option("--N", mo_n, "window sites (0 = boundary-safe automatic width)");
  mo->add_option("--q", mo_q, "moment order q > 0");
  mo->add_option("--times", mo_times, "comma-separated increasing times");
  add_sink(mo, mo_sink);
  mo->callback([&] { rc = cmd_moments(mo_par, mo_n, mo_q, mo_times, mo_sink); });

  auto* la = app.add_subcommand("laplace", "Laplace-averaged moment A^(q)(T), both routes");
  Common la_par;
  Sink la_sink;
  long la_n = 64;
  double la_q = 2.0;
  std::string la_t = "4", la_route = "both";
  add_common(la, la_par, 0.5);
  la->add_option("--N", la_n, "window sites");
  la->add_option("--q", la_q, "moment order");
  la->add_option("--T", la_t, "comma-separated horizons");
  la->add_option("--route", la_route, "both, time, or energy");
  add_sink(la, la_sink);
  la->callback([&] { rc = cmd_laplace(la_par, la_n, la_q, la_t, la_route, la_sink); });

  auto* nr = app.add_subcommand("nonrel-limit", "Resolvent distance to the projected Schroedinger limit");
  Common nr_par;
  Sink nr_sink;
  long nr_n = 60;
  double nr_zre = 0.0, nr_zim = 1.0;
  std::string nr_clist = "8,16,32,64";
  add_common(nr, nr_par, 1.0);
  nr_par.m = 1.0;
  nr->add_option("--N", nr_n, "window sites");
  nr->add_option("--z-re", nr_zre, "Re z");
  nr->add_option("--z-im", nr_zim, "Im z (nonzero)");
  nr->add_option("--c-list", nr_clist, "comma-separated light speeds");
  add_sink(nr, nr_sink);
  nr->callback([&] { rc = cmd_nonrel(nr_par, nr_n, nr_zre, nr_zim, nr_clist, nr_sink); });

  auto* cm = app.add_subcommand("compare-mass", "Sup moment difference between masses m and m'");
  Common cm_par;
  Sink cm_sink;
  long cm_n = 0;
  double cm_mp = 0.0, cm_q = 2.0;
  std::string cm_times = "8,11,15,21,29,40";
  add_common(cm, cm_par, 0.5);
  cm_par.m = 1e-3;
  cm->add_option("--m-prime", cm_mp, "comparison mass m'");
  cm->add_option("--N", cm_n, "window sites (0 = boundary-safe automatic width)");
  cm->add_option("--q", cm_q, "moment order q > 0");
  cm->add_option("--times", cm_times, "comma-separated increasing horizons");
  add_sink(cm, cm_sink);
  cm->callback([&] { rc = cmd_compare_mass(cm_par, cm_n, cm_mp, cm_q, cm_times, cm_sink); });

  auto* we = app.add_subcommand("wegner", "Probability that the box spectrum comes near E");
  Common we_par;
  Sink we_sink;
  double we_e = 0.2, we_theta = 0.5, we_tau = 0.1;
  long we_reals = 2000;
  std::string we_llist = "20,40,80";
  add_common(we, we_par, 1.0);
  we_par.m = 1.0;
  we->add_option("--E", we_e, "target energy");
  we->add_option("--L", we_llist, "comma-separated box half-widths");
  we->add_option("--theta", we_theta, "stretching exponent in (0,1)");
  we->add_option("--tau", we_tau, "threshold rate tau > 0");
  we->add_option("--realizations", we_reals, "Monte Carlo realizations");
  add_sink(we, we_sink);
  we->callback([&] { rc = cmd_wegner(we_par, we_llist, we_e, we_theta, we_tau, we_reals, we_sink); });

  auto* cw = app.add_subcommand("critical-window", "Sup of transfer norms over a shrinking window");
  Common cw_par;
  Sink cw_sink;
  long cw_n = 1000;
  double cw_lambda = 1.0, cw_e = std::numeric_limits<double>::quiet_NaN();
  add_common(cw, cw_par, 0.5);
  cw->add_option("--N", cw_n, "number of sites [0, N-1]");
  cw->add_option("--lambda", cw_lambda, "window shrink exponent");
  cw->add_option("--E", cw_e, "window center (default: the critical energy V)");
  add_sink(cw, cw_sink);
  cw->callback([&] { rc = cmd_critical_window(cw_par, cw_n, cw_lambda, cw_e, cw_sink); });

  std::vector<std::string> args = assemble_args(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the error and usage hint to stderr
    return 2;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const dirac1d::ContractError& e) {
    std::fprintf(stderr, "numerical contract violation: %s\n", e.what());
    return 3;
  } catch (const dirac1d::StepTooLarge& e) {
    std::fprintf(stderr, "numerical contract violation: %s\n", e.what());
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
