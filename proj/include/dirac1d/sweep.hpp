#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dirac1d/compare.hpp"
#include "dirac1d/laplace.hpp"
#include "dirac1d/moments.hpp"
#include "dirac1d/nonrel.hpp"
#include "dirac1d/transfer.hpp"
#include "dirac1d/wegner.hpp"

namespace dirac1d {

// Cartesian parameter grid plus per-sweep scalars. Empty axis lists collapse
// to a single default value. Loop order (outer to inner): E, V, m, c, q, L, T.
struct SweepConfig {
  std::vector<double> energies;    // E
  std::vector<double> potentials;  // V (Bernoulli amplitude)
  std::vector<double> masses;      // m
  std::vector<double> speeds;      // c
  std::vector<double> qs;          // moment order q
  std::vector<long> lengths;       // L: window half-width (Wegner: box size)
  std::vector<double> horizons;    // T

  double p_plus = 0.5;       // Bernoulli up-probability
  long steps = 1'000'000;    // lyapunov step budget
  double lambda = 1.0;       // critical-window shrink rate
  double theta = 0.5;        // wegner exponent
  double tau = 0.1;          // wegner rate
  double m_prime = 0.0;      // compare: second mass
  int realizations = 1;
  std::uint64_t master_seed = 0;
  int parallelism = 1;
};

struct GridPoint {
  double E = 0.0;
  double V = 1.0;
  double m = 0.0;
  double c = 1.0;
  double q = 2.0;
  long L = 0;
  double T = 1.0;
  std::size_t index = 0;
};

struct Aggregate {
  double mean = 0.0;
  double median = 0.0;
  double stderr_ = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  bool degenerate = false;  // single-sample flag
};

// Order-independent statistics: values are sorted before every reduction, so
// any permutation of the input produces bit-identical fields. Median of even
// counts takes the lower-mid element; stderr is sample stdev (n-1) / sqrt(n).
inline Aggregate aggregate(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate: empty input");
  std::sort(values.begin(), values.end());
  Aggregate a;
  a.count = values.size();
  a.degenerate = values.size() == 1;
  a.min = values.front();
  a.max = values.back();
  a.median = values[(values.size() - 1) / 2];
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.stderr_ = std::sqrt(ss / static_cast<double>(values.size() - 1)) /
                std::sqrt(static_cast<double>(values.size()));
  }
  return a;
}

struct SweepResult {
  std::string task;
  std::uint64_t master_seed = 0;
  int realizations = 0;
  std::vector<GridPoint> points;
  std::vector<std::vector<double>> records;  // [point][realization]
  std::vector<Aggregate> aggregates;
};

namespace detail {

inline std::vector<GridPoint> grid_points(const SweepConfig& cfg) {
  auto axis = [](const std::vector<double>& v, double dflt) {
    return v.empty() ? std::vector<double>{dflt} : v;
  };
  const std::vector<double> es = axis(cfg.energies, 0.0);
  const std::vector<double> vs = axis(cfg.potentials, 1.0);
  const std::vector<double> ms = axis(cfg.masses, 0.0);
  const std::vector<double> cs = axis(cfg.speeds, 1.0);
  const std::vector<double> qs = axis(cfg.qs, 2.0);
  const std::vector<long> ls = cfg.lengths.empty() ? std::vector<long>{0} : cfg.lengths;
  const std::vector<double> ts = axis(cfg.horizons, 1.0);
  std::vector<GridPoint> pts;
  pts.reserve(es.size() * vs.size() * ms.size() * cs.size() * qs.size() * ls.size() * ts.size());
  for (double e : es)
    for (double v : vs)
      for (double m : ms)
        for (double c : cs)
          for (double q : qs)
            for (long l : ls)
              for (double t : ts) {
                GridPoint p{e, v, m, c, q, l, t, pts.size()};
                pts.push_back(p);
              }
  return pts;
}

inline double run_task_point(const std::string& task, const SweepConfig& cfg, const GridPoint& pt,
                             std::uint64_t stream) {
  const DiracParams par(pt.m, pt.c);
  const PotentialSpec spec = PotentialSpec::bernoulli(pt.V, cfg.p_plus);
  if (task == "lyapunov")
    return lyapunov_single(pt.E, par, spec, cfg.steps, cfg.master_seed, stream);
  if (task == "wegner") {
    const LatticeWindow w = wegner_window(pt.L);
    const auto omega = sample_realization(spec, w, cfg.master_seed, stream);
    const auto sys = eigensolve(build_dirac(par, omega));
    double dist = 1e300;
    for (Eigen::Index j = 0; j < sys.values.size(); ++j)
      dist = std::min(dist, std::abs(sys.values(j) - pt.E));
    return dist <= wegner_threshold(pt.L, cfg.theta, cfg.tau) ? 1.0 : 0.0;
  }
  if (task == "moments") {
    const LatticeWindow w(-pt.L, pt.L);
    const auto omega = sample_realization(spec, w, cfg.master_seed, stream);
    const Propagator prop = chebyshev_propagator(build_dirac(par, omega));
    const SpinorState psi = evolve_split(prop, SpinorState::delta_plus(w, 0), pt.T);
    return moment(psi, pt.q);
  }
  if (task == "laplace") {
    const LatticeWindow w(-pt.L, pt.L);
    const auto omega = sample_realization(spec, w, cfg.master_seed, stream);
    const auto op = build_dirac(par, omega);
    return laplace_moment_energy(op, pt.q, pt.T, default_energy_grid(op, pt.T, pt.q)).value;
  }
  if (task == "nonrel") {
    const LatticeWindow w(-pt.L, pt.L);
    const auto omega = sample_realization(spec, w, cfg.master_seed, stream);
    return nonrel_limit_error(pt.c, pt.m, cdouble(0.0, 1.0), omega);
  }
  if (task == "compare") {
    const LatticeWindow w(-pt.L, pt.L);
    const auto omega = sample_realization(spec, w, cfg.master_seed, stream);
    return mass_comparison(pt.m, cfg.m_prime, pt.c, omega, pt.q, {pt.T}).sup_diff[0];
  }
  if (task == "critical_window") {
    const LatticeWindow w(0, pt.L - 1);
    const auto omega = sample_realization(spec, w, cfg.master_seed, stream);
    return critical_window_supremum(omega, pt.L, cfg.lambda, par, pt.E);
  }
  throw std::invalid_argument("run_sweep: unknown task '" + task + "'");
}

}  // namespace detail

// Runs task over grid x realizations. Slot r of point i uses RNG stream
// i * realizations + r keyed by the master seed, and every slot lands at a
// fixed index, so the result is identical at any parallelism degree.
inline SweepResult run_sweep(const SweepConfig& cfg, const std::string& task) {
  static const std::vector<std::string> known{"lyapunov", "wegner",  "moments",        "laplace",
                                              "nonrel",   "compare", "critical_window"};
  if (std::find(known.begin(), known.end(), task) == known.end())
    throw std::invalid_argument("run_sweep: unknown task '" + task + "'");
  if (cfg.realizations < 1) throw std::invalid_argument("run_sweep: realizations must be >= 1");

  SweepResult res;
  res.task = task;
  res.master_seed = cfg.master_seed;
  res.realizations = cfg.realizations;
  res.points = detail::grid_points(cfg);

  const std::size_t n_real = static_cast<std::size_t>(cfg.realizations);
  const std::size_t total = res.points.size() * n_real;
  std::vector<double> slots(total);

  const std::size_t workers =
      std::min<std::size_t>(std::max(cfg.parallelism, 1), std::max<std::size_t>(total, 1));
  std::vector<std::exception_ptr> errors(workers);
  auto body = [&](std::size_t w) {
    try {
      for (std::size_t s = w; s < total; s += workers) {
        const GridPoint& pt = res.points[s / n_real];
        slots[s] = detail::run_task_point(task, cfg, pt, s);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers <= 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  res.records.reserve(res.points.size());
  res.aggregates.reserve(res.points.size());
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    std::vector<double> vals(slots.begin() + static_cast<std::ptrdiff_t>(i * n_real),
                             slots.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_real));
    res.records.push_back(vals);
    res.aggregates.push_back(aggregate(std::move(vals)));
  }
  return res;
}

}  // namespace dirac1d
