#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dirac1d/moments.hpp"
#include "dirac1d/sweep.hpp"

namespace dirac1d {

using Provenance = std::vector<std::pair<std::string, std::string>>;

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

// Comment header carrying the full parameter provenance and a hash of it, so
// every output file is self-describing and cheap to diff.
inline std::string provenance_header(const Provenance& kv) {
  std::string canon;
  for (const auto& [k, v] : kv) canon += k + "=" + v + ";";
  std::string out;
  for (const auto& [k, v] : kv) out += "# " + k + "=" + v + "\n";
  out += "# config_hash=" + hex64(fnv1a(canon)) + "\n";
  return out;
}

inline std::string moment_series_csv(const MomentSeries& s, const Provenance& kv) {
  Provenance full = kv;
  full.emplace_back("q", format_g17(s.q));
  full.emplace_back("boundary_contaminated", s.boundary_contaminated ? "1" : "0");
  full.emplace_back("empty_projection", s.empty_projection ? "1" : "0");
  std::string out = provenance_header(full);
  out += "t,value\n";
  for (std::size_t i = 0; i < s.times.size(); ++i)
    out += format_g17(s.times[i]) + "," + format_g17(s.values[i]) + "\n";
  return out;
}

inline std::string laplace_sweep_csv(const std::vector<double>& t_values,
                                     const std::vector<double>& a_time,
                                     const std::vector<double>& a_energy, const Provenance& kv) {
  if (t_values.size() != a_time.size() || t_values.size() != a_energy.size())
    throw std::invalid_argument("laplace_sweep_csv: length mismatch");
  std::string out = provenance_header(kv);
  out += "T,A_time,A_energy,rel_diff\n";
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    const double denom = std::max(std::abs(a_energy[i]), 1e-300);
    out += format_g17(t_values[i]) + "," + format_g17(a_time[i]) + "," +
           format_g17(a_energy[i]) + "," +
           format_g17(std::abs(a_time[i] - a_energy[i]) / denom) + "\n";
  }
  return out;
}

namespace detail {

inline Provenance sweep_provenance(const SweepConfig& cfg, const std::string& task) {
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_g17(v[i]);
    return s;
  };
  std::string ls;
  for (std::size_t i = 0; i < cfg.lengths.size(); ++i)
    ls += (i ? " " : "") + std::to_string(cfg.lengths[i]);
  return Provenance{{"task", task},
                    {"E", join(cfg.energies)},
                    {"V", join(cfg.potentials)},
                    {"m", join(cfg.masses)},
                    {"c", join(cfg.speeds)},
                    {"q", join(cfg.qs)},
                    {"L", ls},
                    {"T", join(cfg.horizons)},
                    {"p", format_g17(cfg.p_plus)},
                    {"steps", std::to_string(cfg.steps)},
                    {"lambda", format_g17(cfg.lambda)},
                    {"theta", format_g17(cfg.theta)},
                    {"tau", format_g17(cfg.tau)},
                    {"m_prime", format_g17(cfg.m_prime)},
                    {"realizations", std::to_string(cfg.realizations)},
                    {"seed", std::to_string(cfg.master_seed)},
                    {"stats", "stderr=sample-stdev(n-1)/sqrt(n); median=lower-mid"}};
}

}  // namespace detail

// One aggregate row per grid point.
inline std::string sweep_aggregate_csv(const SweepResult& res, const SweepConfig& cfg) {
  std::string out = provenance_header(detail::sweep_provenance(cfg, res.task));
  out += "E,V,m,c,q,L,T,count,mean,median,stderr,min,max,degenerate\n";
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    const GridPoint& p = res.points[i];
    const Aggregate& a = res.aggregates[i];
    out += format_g17(p.E) + "," + format_g17(p.V) + "," + format_g17(p.m) + "," +
           format_g17(p.c) + "," + format_g17(p.q) + "," + std::to_string(p.L) + "," +
           format_g17(p.T) + "," + std::to_string(a.count) + "," + format_g17(a.mean) + "," +
           format_g17(a.median) + "," + format_g17(a.stderr_) + "," + format_g17(a.min) + "," +
           format_g17(a.max) + "," + (a.degenerate ? "1" : "0") + "\n";
  }
  return out;
}

// One JSON object per raw record.
inline std::string sweep_records_jsonl(const SweepResult& res, const SweepConfig& cfg) {
  std::string canon;
  for (const auto& [k, v] : detail::sweep_provenance(cfg, res.task)) canon += k + "=" + v + ";";
  const std::string hash = hex64(fnv1a(canon));
  std::string out;
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    const GridPoint& p = res.points[i];
    for (std::size_t r = 0; r < res.records[i].size(); ++r) {
      out += "{\"task\":\"" + res.task + "\",\"config_hash\":\"" + hash +
             "\",\"point\":" + std::to_string(i) + ",\"realization\":" + std::to_string(r) +
             ",\"E\":" + format_g17(p.E) + ",\"V\":" + format_g17(p.V) +
             ",\"m\":" + format_g17(p.m) + ",\"c\":" + format_g17(p.c) +
             ",\"q\":" + format_g17(p.q) + ",\"L\":" + std::to_string(p.L) +
             ",\"T\":" + format_g17(p.T) + ",\"value\":" + format_g17(res.records[i][r]) + "}\n";
    }
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dirac1d
