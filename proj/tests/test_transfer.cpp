#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dirac1d/transfer.hpp"

using namespace dirac1d;
using Catch::Approx;

namespace {

double rel_diff(const RMat2& x, const RMat2& y) {
  return (x - y).frobenius() / std::max(1e-300, y.frobenius());
}

}  // namespace

TEST_CASE("single step closed forms") {
  // massless step at E equal to the site value is the identity
  const RMat2 id = single_step(0.5, 0.5, DiracParams(0.0, 1.0));
  REQUIRE(id.a == 1.0);
  REQUIRE(id.b == 0.0);
  REQUIRE(id.c == 0.0);
  REQUIRE(id.d == 1.0);

  const RMat2 t = single_step(0.0, 0.0, DiracParams(1.0, 1.0));
  REQUIRE(t.a == 2.0);
  REQUIRE(t.b == 1.0);
  REQUIRE(t.c == 1.0);
  REQUIRE(t.d == 1.0);

  // complex energies evaluate the same formula
  const Mat2 tc = single_step(cdouble(0.0, 0.25), 0.0, DiracParams(1.0, 1.0));
  REQUIRE(tc.d == cdouble(1.0));
  REQUIRE(std::abs(tc.a - (cdouble(1.0) + (1.0 - cdouble(0.0, 0.25) * cdouble(0.0, 0.25)))) < 1e-15);
}

TEST_CASE("determinant one over random parameter draws") {
  std::mt19937 gen(12345);
  std::uniform_real_distribution<double> uE(-4.0, 4.0), uv(-2.0, 2.0), um(0.0, 2.0),
      uc(0.5, 4.0);
  for (int i = 0; i < 10000; ++i) {
    const RMat2 t = single_step(uE(gen), uv(gen), DiracParams(um(gen), uc(gen)));
    REQUIRE(std::abs(t.det() - 1.0) < 1e-12);
  }
}

TEST_CASE("trace of the squared step is a quartic in E - V") {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> uE(-2.0, 2.0), uv(-2.0, 2.0), um(0.0, 2.0),
      uc(0.7, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double E = uE(gen), v = uv(gen), m = um(gen), c = uc(gen);
    const RMat2 t = single_step(E, v, DiracParams(m, c));
    const double got = (t * t).trace();
    const double alpha = E - v, a2 = alpha * alpha, c2 = c * c;
    const double want = a2 * a2 / (c2 * c2) - (2.0 * m * m + 4.0 / c2) * a2 +
                        m * m * c2 * (4.0 + m * m * c2) + 2.0;
    REQUIRE(got == Approx(want).margin(1e-10 * (1.0 + std::abs(want))));
  }
}

TEST_CASE("empty product is the identity with zero log scale") {
  Realization omega;
  omega.window = LatticeWindow(-3, 3);
  omega.values.assign(7, 0.25);
  const auto p = product(0.7, omega, 2, 2, DiracParams(1.0, 1.0));
  REQUIRE(p.log_scale == 0.0);
  REQUIRE(p.matrix.a == 1.0);
  REQUIRE(p.matrix.b == 0.0);
  REQUIRE(p.matrix.c == 0.0);
  REQUIRE(p.matrix.d == 1.0);
}

TEST_CASE("massless product at E = V over a constant +V stretch stays identity") {
  const auto omega = sample_realization(PotentialSpec::constant(0.5), LatticeWindow(0, 39), 0);
  const auto p = product(0.5, omega, 0, 40, DiracParams(0.0, 1.0));
  const double s = std::exp(p.log_scale);
  REQUIRE(p.matrix.a * s == Approx(1.0).margin(1e-12));
  REQUIRE(p.matrix.d * s == Approx(1.0).margin(1e-12));
  REQUIRE(std::abs(p.matrix.b * s) < 1e-12);
  REQUIRE(std::abs(p.matrix.c * s) < 1e-12);
}

TEST_CASE("product equals the naive product at short range") {
  const auto omega = sample_realization(PotentialSpec::bernoulli(1.0), LatticeWindow(0, 29), 17, 0);
  const DiracParams par(0.5, 1.0);
  const double E = 0.4;
  RMat2 naive = RMat2::identity();
  for (long l = 0; l < 30; ++l) naive = single_step(E, omega.at(l), par) * naive;
  const auto p = product(E, omega, 0, 30, par);
  const RMat2 rescaled = p.matrix.scaled(std::exp(p.log_scale));
  REQUIRE(rel_diff(rescaled, naive) < 1e-10);
}

TEST_CASE("products compose") {
  const auto omega = sample_realization(PotentialSpec::bernoulli(0.8), LatticeWindow(-40, 45), 23, 0);
  const DiracParams par(0.3, 1.2);
  const double E = 0.7;
  const long j = -35, k = -2, n = 41;
  const auto tkn = product(E, omega, k, n, par);
  const auto tjk = product(E, omega, j, k, par);
  const auto tjn = product(E, omega, j, n, par);
  const RMat2 combined = tkn.matrix * tjk.matrix;
  const double s = std::exp(tkn.log_scale + tjk.log_scale - tjn.log_scale);
  REQUIRE(rel_diff(combined.scaled(s), tjn.matrix) < 1e-10);
}

TEST_CASE("product rejects sites outside the realization") {
  Realization omega;
  omega.window = LatticeWindow(-5, 5);
  omega.values.assign(11, 0.5);
  const DiracParams par(0.0, 1.0);
  REQUIRE_THROWS_AS(product(0.0, omega, -6, 0, par), std::invalid_argument);
  REQUIRE_THROWS_AS(product(0.0, omega, 0, 7, par), std::invalid_argument);
  REQUIRE_THROWS_AS(product(0.0, omega, 3, 1, par), std::invalid_argument);
}

TEST_CASE("classification of the three trace regimes") {
  // trace 1 at the flipped site of the massless critical energy
  const RMat2 ell = single_step(0.5, -0.5, DiracParams(0.0, 1.0));
  REQUIRE(ell.trace() == Approx(1.0));
  REQUIRE(classify(ell) == MatrixClass::Elliptic);

  // alpha = mc^2 gives the unit shear
  const RMat2 par = single_step(1.0, 0.0, DiracParams(1.0, 1.0));
  REQUIRE(par.a == 1.0);
  REQUIRE(par.b == 2.0);
  REQUIRE(par.c == 0.0);
  REQUIRE(classify(par) == MatrixClass::Parabolic);

  const RMat2 hyp = single_step(0.0, 0.0, DiracParams(1.0, 1.0));
  REQUIRE(hyp.trace() == Approx(3.0));
  REQUIRE(classify(hyp) == MatrixClass::Hyperbolic);

  // explicit tolerance widens the parabolic band
  const RMat2 near_par{1.0, 2.0, 1e-4, 1.0};  // trace 2, det != 1 irrelevant here
  REQUIRE(classify(near_par, 1e-3) == MatrixClass::Parabolic);

  Mat2 complex_trace{cdouble(1.0, 0.5), cdouble(0.0), cdouble(0.0), cdouble(1.0)};
  REQUIRE_THROWS_AS(classify(complex_trace), std::invalid_argument);
}

TEST_CASE("classification is conjugation invariant") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(0.5, 2.0), ub(-1.0, 1.0);
  const std::vector<RMat2> reps = {
      single_step(0.5, -0.5, DiracParams(0.0, 1.0)),  // elliptic
      single_step(1.0, 0.0, DiracParams(1.0, 1.0)),   // parabolic
      single_step(0.0, 0.0, DiracParams(1.0, 1.0)),   // hyperbolic
  };
  for (const RMat2& t : reps) {
    const MatrixClass want = classify(t);
    for (int i = 0; i < 50; ++i) {
      const double a = u(gen), b = ub(gen), c = ub(gen);
      const RMat2 g{a, b, c, (1.0 + b * c) / a};  // det 1 by construction
      REQUIRE(classify(g * t * g.adjugate()) == want);
    }
  }
}

TEST_CASE("lyapunov of the zero potential at band center is zero") {
  const auto est = lyapunov(0.0, DiracParams(0.0, 1.0), PotentialSpec::constant(0.0), 100000);
  REQUIRE(std::abs(est.gamma) < 1e-15);
  REQUIRE(est.stderr_ == 0.0);
  REQUIRE(est.realizations == 1);
}

TEST_CASE("lyapunov of constant potentials matches the closed-form spectral radius") {
  // hyperbolic step, trace 3: growth rate log((3 + sqrt 5) / 2)
  const auto hyp = lyapunov(0.0, DiracParams(1.0, 1.0), PotentialSpec::constant(0.0), 100000);
  REQUIRE(hyp.gamma == Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)).margin(1e-6));

  // elliptic step, trace 1: bounded orbits
  const auto ell = lyapunov(1.0, DiracParams(0.0, 1.0), PotentialSpec::constant(0.0), 100000);
  REQUIRE(std::abs(ell.gamma) < 1e-4);

  // parabolic step: linear growth, log n / n
  const auto par = lyapunov(1.0, DiracParams(1.0, 1.0), PotentialSpec::constant(0.0), 100000);
  REQUIRE(std::abs(par.gamma) < 1e-3);
}

TEST_CASE("lyapunov vanishes at the massless critical energy") {
  const auto est = lyapunov(0.5, DiracParams(0.0, 1.0), PotentialSpec::bernoulli(0.5), 100000, 8, 7);
  REQUIRE(std::abs(est.gamma) < 1e-3);
}

TEST_CASE("lyapunov at band center matches the frozen long-product value") {
  // Frozen from a 1e7-step, 32-realization pre-build run with an independent
  // generator and per-step renormalization; tolerance 5%.
  const double frozen = 0.0309391717;
  const auto est = lyapunov(0.0, DiracParams(0.0, 1.0), PotentialSpec::bernoulli(0.5));
  REQUIRE(est.gamma > 3.0 * est.stderr_);
  REQUIRE(est.gamma == Approx(frozen).epsilon(0.05));
}

TEST_CASE("localization classifier verdicts") {
  using V = LocalizationPrediction::Verdict;
  using R = LocalizationPrediction::Reason;
  const DiracParams m0(0.0, 1.0), m1(1.0, 1.0);

  auto p = predict_localization(0.5, 0.5, m0);
  REQUIRE(p.verdict == V::ZeroLyapunov);
  REQUIRE(p.reason == R::CriticalEnergy);
  p = predict_localization(-0.5, 0.5, m0);
  REQUIRE(p.reason == R::CriticalEnergy);

  p = predict_localization(0.0, std::sqrt(2.0), m0);
  REQUIRE(p.verdict == V::ZeroLyapunov);
  REQUIRE(p.reason == R::CriticalPair);

  REQUIRE(predict_localization(0.5, 0.5, m1).verdict == V::PositiveLyapunov);

  // exceptional pairs at V = c / sqrt 2, both masses
  const double vstar = 1.0 / std::sqrt(2.0);
  for (double m : {0.0, 1.0}) {
    const DiracParams par(m, 1.0);
    const double estar = std::sqrt(2.0 + m * m);
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) {
        p = predict_localization(s1 * estar + s2 * vstar, vstar, par);
        REQUIRE(p.verdict == V::ZeroLyapunov);
        REQUIRE(p.reason == R::CriticalPair);
      }
  }
  // E = +/-V at V = c / sqrt 2 is one of the exceptional pairs, not a
  // critical energy
  p = predict_localization(vstar, vstar, m0);
  REQUIRE(p.verdict == V::ZeroLyapunov);
  REQUIRE(p.reason == R::CriticalPair);

  // massive pair at E = 0
  p = predict_localization(0.0, std::sqrt(3.0), m1);
  REQUIRE(p.reason == R::CriticalPair);

  // positives: wrong V for the pair, E off the critical set, V beyond c
  REQUIRE(predict_localization(0.0, std::sqrt(3.0), m0).verdict == V::PositiveLyapunov);
  REQUIRE(predict_localization(0.3, vstar, m0).verdict == V::PositiveLyapunov);
  REQUIRE(predict_localization(1.5, 1.5, m0).verdict == V::PositiveLyapunov);
  REQUIRE(predict_localization(0.2, 0.5, m0).verdict == V::PositiveLyapunov);

  REQUIRE_THROWS_AS(predict_localization(0.0, 0.0, m0), std::invalid_argument);
  REQUIRE_THROWS_AS(predict_localization(0.0, -1.0, m0), std::invalid_argument);
}

TEST_CASE("energy perturbation identity") {
  const auto omega = sample_realization(PotentialSpec::bernoulli(0.5), LatticeWindow(0, 24), 31, 0);
  const DiracParams par(0.0, 1.0);

  SECTION("zeta = 0 cancels exactly") {
    REQUIRE(perturbation_identity_residual(0.3, cdouble(0.0), omega, 0, 20, par) == 0.0);
  }
  SECTION("single step") {
    REQUIRE(perturbation_identity_residual(0.3, cdouble(0.02, 0.05), omega, 4, 5, par) < 1e-12);
    REQUIRE(perturbation_identity_residual(-1.1, cdouble(-0.07, 0.01), omega, 0, 1, par) < 1e-12);
  }
  SECTION("twenty steps at zeta = i/10") {
    REQUIRE(perturbation_identity_residual(0.3, cdouble(0.0, 0.1), omega, 0, 20, par) < 1e-9);
  }
  SECTION("twenty steps, massive, generic complex shift") {
    const DiracParams heavy(0.7, 1.3);
    REQUIRE(perturbation_identity_residual(0.9, cdouble(0.03, -0.06), omega, 2, 22, heavy) < 1e-9);
  }
  SECTION("degenerate range rejected") {
    REQUIRE_THROWS_AS(perturbation_identity_residual(0.3, cdouble(0.1), omega, 5, 5, par),
                      std::invalid_argument);
  }
}

TEST_CASE("window supremum over a constant critical stretch is one") {
  // At the critical energy itself every factor is the identity; the off-center
  // grid energies sit within N^(-3/2) of it and contribute only O(alpha^2).
  const auto omega = sample_realization(PotentialSpec::constant(0.5), LatticeWindow(0, 49), 0);
  const double sup = critical_window_supremum(omega, 50, 1.0, DiracParams(0.0, 1.0), 0.5);
  REQUIRE(sup >= 1.0 - 1e-12);
  REQUIRE(sup == Approx(1.0).margin(1e-3));
}

TEST_CASE("window supremum rejects parameters off the critical regime") {
  const auto omega = sample_realization(PotentialSpec::bernoulli(0.5), LatticeWindow(0, 99), 3, 0);
  REQUIRE_THROWS_AS(critical_window_supremum(omega, 100, 1.0, DiracParams(1.0, 1.0), 0.5),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(critical_window_supremum(omega, 100, 1.0, DiracParams(0.0, 1.0), 0.3),
                    std::invalid_argument);
  const auto strong = sample_realization(PotentialSpec::bernoulli(1.5), LatticeWindow(0, 99), 3, 0);
  REQUIRE_THROWS_AS(critical_window_supremum(strong, 100, 1.0, DiracParams(0.0, 1.0), 1.5),
                    std::invalid_argument);
  const double vstar = 1.0 / std::sqrt(2.0);
  const auto star = sample_realization(PotentialSpec::bernoulli(vstar), LatticeWindow(0, 99), 3, 0);
  REQUIRE_THROWS_AS(critical_window_supremum(star, 100, 1.0, DiracParams(0.0, 1.0), vstar),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(critical_window_supremum(omega, 100, 1.0, DiracParams(0.0, 1.0), 0.5, 8),
                    std::invalid_argument);
}

TEST_CASE("shrinking-window supremum stays bounded as the box grows") {
  const auto omega = sample_realization(PotentialSpec::bernoulli(0.5), LatticeWindow(0, 9999), 1, 0);
  const DiracParams par(0.0, 1.0);
  const double s100 = critical_window_supremum(omega, 100, 1.0, par, 0.5);
  const double s10000 = critical_window_supremum(omega, 10000, 1.0, par, 0.5);
  REQUIRE(s100 >= 1.0);
  REQUIRE(s10000 >= 1.0);
  REQUIRE(s10000 / s100 <= 1.5);
}

TEST_CASE("fixed-window supremum at fixed distance obeys an exponential bound") {
  const auto omega = sample_realization(PotentialSpec::bernoulli(0.5), LatticeWindow(0, 1999), 2, 0);
  const DiracParams par(0.0, 1.0);
  const double delta = 0.05;
  const std::vector<long> dist = {20, 40, 60, 80, 100};
  std::vector<double> lg;
  for (long d : dist)
    lg.push_back(std::log(critical_window_supremum_fixed_distance(omega, 2000, delta, d, par, 0.5)));

  // smallest C >= 0 with sup(d) <= C exp(C delta d), per distance, by bisection
  double cstar = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double lo = 1e-6, hi = 50.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (std::log(mid) + mid * delta * static_cast<double>(dist[i]) >= lg[i] ? hi : lo) = mid;
    }
    cstar = std::max(cstar, hi);
  }
  REQUIRE(cstar < 5.0);

  REQUIRE_THROWS_AS(
      critical_window_supremum_fixed_distance(omega, 2000, delta, 0, par, 0.5),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      critical_window_supremum_fixed_distance(omega, 2000, delta, 3000, par, 0.5),
      std::invalid_argument);
}
