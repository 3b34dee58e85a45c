#pragma once

// Model parameters, lattice windows and random two-valued potentials for the
// one-dimensional discrete Dirac operator D(m,c) = c*B + m*c^2*sigma_3 + V.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dirac1d {

using cdouble = std::complex<double>;

// Violation of a numerical guarantee at runtime (lost unitarity, solver
// breakdown, resolvent bound breach). The CLI maps this to exit code 3.
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DiracParams {
  double mass = 0.0;         // m >= 0
  double light_speed = 1.0;  // c > 0

  DiracParams() = default;
  DiracParams(double m, double c) : mass(m), light_speed(c) {
    if (!(mass >= 0.0)) throw std::invalid_argument("DiracParams: mass must be >= 0");
    if (!(light_speed > 0.0)) throw std::invalid_argument("DiracParams: light_speed must be > 0");
  }

  double mc2() const { return mass * light_speed * light_speed; }

  // Outer edge c*sqrt(4 + m^2 c^2) of the free spectrum
  // [-c*sqrt(4+m^2c^2), -m c^2] U [m c^2, c*sqrt(4+m^2c^2)].
  double free_spectral_radius() const {
    const double mc = mass * light_speed;
    return light_speed * std::sqrt(4.0 + mc * mc);
  }
};

struct LatticeWindow {
  long n_min = 0;
  long n_max = 0;

  LatticeWindow() = default;
  LatticeWindow(long lo, long hi) : n_min(lo), n_max(hi) {
    if (n_min > n_max) throw std::invalid_argument("LatticeWindow: n_min > n_max");
  }
  static LatticeWindow centered(long half_width) {
    if (half_width < 0) throw std::invalid_argument("LatticeWindow: negative half width");
    return LatticeWindow(-half_width, half_width);
  }

  long sites() const { return n_max - n_min + 1; }
  bool contains(long n) const { return n >= n_min && n <= n_max; }
  bool contains(const LatticeWindow& w) const { return w.n_min >= n_min && w.n_max <= n_max; }
  std::size_t index(long n) const { return static_cast<std::size_t>(n - n_min); }
  long site_at(std::size_t i) const { return n_min + static_cast<long>(i); }

  bool operator==(const LatticeWindow& o) const = default;
};

enum class PotentialKind { Bernoulli, Constant, Explicit };

// Site potential law. Bernoulli: V_n = +V with probability p, -V otherwise,
// i.i.d. over sites. Constant and Explicit are deterministic.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Bernoulli;
  double amplitude = 1.0;  // V > 0 (Bernoulli)
  double p_plus = 0.5;     // probability of +V
  double value = 0.0;      // Constant
  std::vector<double> values;  // Explicit, aligned with the sampling window

  static PotentialSpec bernoulli(double V, double p = 0.5) {
    if (!(V > 0.0)) throw std::invalid_argument("PotentialSpec: Bernoulli amplitude must be > 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("PotentialSpec: p outside [0,1]");
    PotentialSpec s;
    s.kind = PotentialKind::Bernoulli;
    s.amplitude = V;
    s.p_plus = p;
    return s;
  }
  static PotentialSpec constant(double v) {
    PotentialSpec s;
    s.kind = PotentialKind::Constant;
    s.value = v;
    return s;
  }
  static PotentialSpec explicit_values(std::vector<double> vals) {
    PotentialSpec s;
    s.kind = PotentialKind::Explicit;
    s.values = std::move(vals);
    return s;
  }

  // Upper bound for |V_n|, used in spectral radius bounds.
  double sup_abs() const {
    switch (kind) {
      case PotentialKind::Bernoulli: return amplitude;
      case PotentialKind::Constant: return std::abs(value);
      case PotentialKind::Explicit: {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
      }
    }
    return 0.0;
  }
};

namespace rng {

// SplitMix64 finalizer. The potential value at a site is a pure function of
// (master seed, realization index, site index), so draws do not depend on
// traversal order or parallel schedule.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t zigzag(long n) {
  return n >= 0 ? 2ull * static_cast<std::uint64_t>(n)
                : 2ull * static_cast<std::uint64_t>(-(n + 1)) + 1ull;
}

// Per-realization stream head; hoisting it out of site loops saves one mix.
inline std::uint64_t stream_head(std::uint64_t master, std::uint64_t realization) {
  return splitmix64(splitmix64(master) ^ splitmix64(realization + 0x632BE59BD9B4E019ull));
}

inline std::uint64_t site_hash(std::uint64_t head, long site) {
  return splitmix64(head ^ splitmix64(zigzag(site) + 0x9E3779B97F4A7C15ull));
}

inline double uniform01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double site_uniform(std::uint64_t master, std::uint64_t realization, long site) {
  return uniform01(site_hash(stream_head(master, realization), site));
}

}  // namespace rng

struct SeedRecord {
  std::uint64_t master = 0;
  std::uint64_t realization = 0;
  bool operator==(const SeedRecord& o) const = default;
};

// A concrete potential on a window together with the seeds that produced it.
struct Realization {
  LatticeWindow window;
  std::vector<double> values;  // one per site, window order
  SeedRecord seed;

  double at(long n) const {
    if (!window.contains(n)) throw std::out_of_range("Realization::at: site outside window");
    return values[window.index(n)];
  }
};

inline Realization sample_realization(const PotentialSpec& spec, const LatticeWindow& window,
                                      std::uint64_t master_seed, std::uint64_t realization_index = 0) {
  Realization r;
  r.window = window;
  r.seed = {master_seed, realization_index};
  const std::size_t n = static_cast<std::size_t>(window.sites());
  r.values.resize(n);
  switch (spec.kind) {
    case PotentialKind::Bernoulli: {
      const std::uint64_t head = rng::stream_head(master_seed, realization_index);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = rng::uniform01(rng::site_hash(head, window.site_at(i)));
        r.values[i] = u < spec.p_plus ? spec.amplitude : -spec.amplitude;
      }
      break;
    }
    case PotentialKind::Constant:
      for (std::size_t i = 0; i < n; ++i) r.values[i] = spec.value;
      break;
    case PotentialKind::Explicit:
      if (spec.values.size() != n)
        throw std::invalid_argument("sample_realization: explicit value list does not match window");
      r.values = spec.values;
      break;
  }
  return r;
}

// Full-precision decimal formatting; round-trips doubles exactly.
inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_realization(std::ostream& os, const Realization& r) {
  os << "# dirac1d potential realization\n";
  os << "# seed " << r.seed.master << " " << r.seed.realization << "\n";
  os << "# window " << r.window.n_min << " " << r.window.n_max << "\n";
  for (long n = r.window.n_min; n <= r.window.n_max; ++n)
    os << n << "\t" << format_g17(r.values[r.window.index(n)]) << "\n";
}

inline Realization read_realization(std::istream& is) {
  Realization r;
  bool have_window = false;
  std::string line;
  std::vector<std::pair<long, double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "seed") ls >> r.seed.master >> r.seed.realization;
      else if (key == "window") {
        long lo, hi;
        ls >> lo >> hi;
        r.window = LatticeWindow(lo, hi);
        have_window = true;
      }
      continue;
    }
    std::istringstream ls(line);
    long n;
    double v;
    if (!(ls >> n >> v)) throw std::invalid_argument("read_realization: malformed row: " + line);
    rows.emplace_back(n, v);
  }
  if (!have_window) throw std::invalid_argument("read_realization: missing window header");
  if (rows.size() != static_cast<std::size_t>(r.window.sites()))
    throw std::invalid_argument("read_realization: row count does not match window");
  r.values.resize(rows.size());
  for (const auto& [n, v] : rows) {
    if (!r.window.contains(n)) throw std::invalid_argument("read_realization: site outside window");
    r.values[r.window.index(n)] = v;
  }
  return r;
}

}  // namespace dirac1d
