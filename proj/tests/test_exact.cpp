#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dirac1d/exact.hpp"
#include "dirac1d/transfer.hpp"

using namespace dirac1d;
using namespace dirac1d::exactring;
using Catch::Approx;

TEST_CASE("quad ring arithmetic hits golden products") {
  CHECK(quad(1, 1) * quad(1, 0, 1) == quad(1, 1, 1, 1));  // (1+s2)(1+s3)
  CHECK(quad(2, 0, 0, 1) * quad(2, 0, 0, 1) == quad(10, 0, 0, 4));  // (2+s6)^2
  CHECK(quad(0, 1) * quad(0, 1) == quad(2));
  CHECK(quad(0, 0, 1) * quad(0, 0, 0, 1) == quad(0, 3));  // s3*s6 = 3 s2
  CHECK(quad(3, -1) - quad(3, -1) == quad(0));
  CHECK(is_zero(quad(5) - quad(5)));
}

TEST_CASE("log_abs evaluates values and survives cancellation") {
  const double v = 1 + std::sqrt(2.0) + std::sqrt(3.0) + std::sqrt(6.0);
  CHECK(log_abs(quad(1, 1, 1, 1)) == Approx(std::log(v)).margin(1e-12));
  CHECK(log_abs(quad(0)) == -std::numeric_limits<double>::infinity());
  CHECK(value_of(quad(1, 1, 1, 1)) == Approx(v).margin(1e-12));

  // (sqrt2 - 1)^40: coordinates ~2^51 cancel down to a value ~2^-51.
  Quad q = quad(1);
  for (int k = 0; k < 40; ++k) q = q * quad(-1, 1);
  CHECK(log_abs(q) == Approx(40.0 * std::log(std::sqrt(2.0) - 1.0)).margin(1e-9));
}

TEST_CASE("exact transfer steps have unit determinant and identity case") {
  const std::array<std::pair<Quad, long>, 6> steps = {{
      {quad(0, 1), 0},       // offset sqrt2
      {quad(0, 2), 0},       // offset 2 sqrt2
      {quad(0, 0, 1), 1},    // offset sqrt3
      {quad(0, 1, 1), 1},    // offset sqrt2 + sqrt3
      {quad(0, -1, 1), 1},   // offset sqrt3 - sqrt2
      {quad(0, -1), 0},      // offset -sqrt2
  }};
  for (const auto& [x, m] : steps) CHECK(det(exact_step(x, m)) == quad(1));

  const QuadMat2 id = exact_step(quad(0), 0);  // massless step at E = V(site)
  CHECK(id.a == quad(1));
  CHECK(is_zero(id.b));
  CHECK(is_zero(id.c));
  CHECK(id.d == quad(1));
  CHECK(log_fro_norm(quad_identity()) == Approx(0.5 * std::log(2.0)).margin(1e-12));
}

TEST_CASE("exact product matches the double-precision product at short length") {
  // Floating products track the exact word only until it first revisits a
  // deep cancellation (around n ~ 150 for this seed); at n = 100 both are
  // still clean to ~1e-9.
  const long n = 100;
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  DiracParams par;
  par.mass = 1.0;
  PotentialSpec pot;
  pot.amplitude = 1.0 / s2;
  const double E = s3 + 1.0 / s2;

  const double gamma_f = lyapunov_single(E, par, pot, n, 42, 0);
  const double gamma_e =
      exact_lyapunov_single(quad(0, 0, 1), quad(0, 1, 1), 1, 0.5, n, 42, 0, 1L << 20);
  CHECK(gamma_e == Approx(gamma_f).margin(1e-6));
}

TEST_CASE("exact_lyapunov reports small rates on a zero-exponent pair") {
  const auto est = exact_lyapunov(quad(0, 0, 1), quad(0, 1, 1), 1, 0.5, 4000, 3, 0);
  CHECK(std::abs(est.gamma) < 0.06);
  CHECK(est.stderr_ >= 0.0);
  CHECK(est.steps == 4000);
  CHECK(est.realizations == 3);

  const auto rerun = exact_lyapunov(quad(0, 0, 1), quad(0, 1, 1), 1, 0.5, 4000, 3, 0);
  CHECK(rerun.gamma == est.gamma);
}

TEST_CASE("exact_lyapunov rejects bad budgets and runaway growth") {
  CHECK_THROWS_AS(exact_lyapunov(quad(0, 1), quad(0, 1), 0, 0.5, 0, 2, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(exact_lyapunov(quad(0, 1), quad(0, 1), 0, 0.5, 100, 0, 0),
                  std::invalid_argument);
  // E = 3, V = 0 is hyperbolic: coordinates grow linearly in n and must trip
  // the subexponential budget.
  CHECK_THROWS_AS(exact_lyapunov(quad(3), quad(3), 0, 0.5, 5000, 1, 0, 4096), ContractError);
}
