#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "dirac1d/operator.hpp"
#include "dirac1d/params.hpp"

using namespace dirac1d;

TEST_CASE("bernoulli sampling is a pure function of spec, window and seeds") {
  const auto spec = PotentialSpec::bernoulli(0.5, 0.5);
  const LatticeWindow w(-100, 99);
  const Realization a = sample_realization(spec, w, 42, 3);
  const Realization b = sample_realization(spec, w, 42, 3);
  REQUIRE(a.values == b.values);
  REQUIRE(a.seed == b.seed);

  const Realization c = sample_realization(spec, w, 42, 4);
  REQUIRE(a.values != c.values);
  const Realization d = sample_realization(spec, w, 43, 3);
  REQUIRE(a.values != d.values);
}

TEST_CASE("sampling a subwindow reproduces the same site values") {
  // Values are keyed by site index, not by position within the window.
  const auto spec = PotentialSpec::bernoulli(1.0);
  const Realization big = sample_realization(spec, LatticeWindow(-50, 50), 7, 0);
  const Realization small = sample_realization(spec, LatticeWindow(-10, 10), 7, 0);
  for (long n = -10; n <= 10; ++n) REQUIRE(big.at(n) == small.at(n));
}

TEST_CASE("bernoulli values are +/-V with near-zero sample mean at p = 1/2") {
  const double V = 0.5;
  const long N = 100000;
  const auto r = sample_realization(PotentialSpec::bernoulli(V), LatticeWindow(1, N), 2024, 0);
  double mean = 0.0;
  for (double v : r.values) {
    REQUIRE((v == V || v == -V));
    mean += v;
  }
  mean /= static_cast<double>(N);
  REQUIRE(std::abs(mean) <= 3.0 * V / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("degenerate probabilities give constant sequences") {
  const auto all_up = sample_realization(PotentialSpec::bernoulli(0.5, 1.0), LatticeWindow(-5, 5), 1, 0);
  for (double v : all_up.values) REQUIRE(v == 0.5);
  const auto all_dn = sample_realization(PotentialSpec::bernoulli(0.5, 0.0), LatticeWindow(-5, 5), 1, 0);
  for (double v : all_dn.values) REQUIRE(v == -0.5);
}

TEST_CASE("explicit potential list must match the window") {
  const auto spec = PotentialSpec::explicit_values({1.0, -1.0, 0.5});
  REQUIRE_NOTHROW(sample_realization(spec, LatticeWindow(0, 2), 0));
  REQUIRE_THROWS_AS(sample_realization(spec, LatticeWindow(0, 3), 0), std::invalid_argument);
}

TEST_CASE("realization text round trip is bit exact") {
  Realization r;
  r.window = LatticeWindow(-3, 2);
  r.seed = {123456789012345ull, 7ull};
  r.values = {1.0 / 3.0, -0.1, 2.5e-17, 0.7000000000000001, -4.0, 1e300};
  std::stringstream ss;
  write_realization(ss, r);
  const Realization back = read_realization(ss);
  REQUIRE(back.window == r.window);
  REQUIRE(back.seed == r.seed);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    REQUIRE(back.values[i] == r.values[i]);
  }
}

TEST_CASE("keyed rng golden values") {
  // splitmix64(0) is the published reference output of the generator.
  REQUIRE(rng::splitmix64(0) == 16294208416658607535ull);
  REQUIRE(rng::splitmix64(42) == 13679457532755275413ull);
  const std::uint64_t head = rng::stream_head(42, 3);
  REQUIRE(head == 10367972690334203829ull);
  REQUIRE(rng::site_hash(head, -5) == 11614714791318708874ull);
  REQUIRE(rng::site_hash(head, 0) == 16776380465866926990ull);
  REQUIRE(rng::site_hash(head, 7) == 11977860520114723497ull);
  REQUIRE(rng::uniform01(rng::site_hash(head, 0)) == 0.90944940737681501);
  const auto r = sample_realization(PotentialSpec::bernoulli(0.5), LatticeWindow(-2, 2), 42, 3);
  REQUIRE(r.values == std::vector<double>{-0.5, -0.5, -0.5, 0.5, 0.5});
}

TEST_CASE("uniform01 lands in [0, 1)") {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = rng::uniform01(rng::splitmix64(i));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("parameter validation") {
  REQUIRE_THROWS_AS(DiracParams(-1.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(DiracParams(1.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(PotentialSpec::bernoulli(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(PotentialSpec::bernoulli(1.0, 1.5), std::invalid_argument);
  REQUIRE_THROWS_AS(LatticeWindow(3, 2), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// operator assembly

namespace {

std::vector<double> dense_of(const OperatorMatrix& op) {
  const std::size_t n = op.dim();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = op.entry(i, j);
  return a;
}

}  // namespace

TEST_CASE("single site dirac matrix") {
  Realization r;
  r.window = LatticeWindow(0, 0);
  r.values = {0.0};
  const auto op = build_dirac(DiracParams(1.0, 1.0), r);
  REQUIRE(op.dim() == 2);
  REQUIRE(op.entry(0, 0) == 1.0);
  REQUIRE(op.entry(0, 1) == -1.0);
  REQUIRE(op.entry(1, 0) == -1.0);
  REQUIRE(op.entry(1, 1) == -1.0);
  // closed-form eigenvalues +/- sqrt(2)
  const double tr = op.entry(0, 0) + op.entry(1, 1);
  const double det = op.entry(0, 0) * op.entry(1, 1) - op.entry(0, 1) * op.entry(1, 0);
  REQUIRE(tr == 0.0);
  REQUIRE(det == -2.0);
}

TEST_CASE("free stencil moves a plus delta into the minus component") {
  const LatticeWindow w(-2, 2);
  Realization r;
  r.window = w;
  r.values.assign(5, 0.0);
  const auto op = build_dirac(DiracParams(0.0, 1.0), r);
  const auto out = op.apply(SpinorState::delta_plus(w, 0));
  for (long n = -2; n <= 2; ++n) {
    REQUIRE(out.plus(n) == cdouble(0.0));
    if (n == -1) REQUIRE(out.minus(n) == cdouble(1.0));
    else if (n == 0) REQUIRE(out.minus(n) == cdouble(-1.0));
    else REQUIRE(out.minus(n) == cdouble(0.0));
  }
}

TEST_CASE("coupling signs against the dense matrix") {
  const auto r = sample_realization(PotentialSpec::bernoulli(0.7), LatticeWindow(-4, 4), 11, 0);
  const auto op = build_dirac(DiracParams(0.5, 2.0), r);
  const auto a = dense_of(op);
  const std::size_t n = op.dim();
  // symmetry
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) REQUIRE(a[i * n + j] == a[j * n + i]);
  // diagonal blocks diag(mc^2 + V_n, -mc^2 + V_n), off-diagonal couplings -c, +c
  const double mc2 = 0.5 * 4.0, c = 2.0;
  for (long site = -4; site <= 4; ++site) {
    const std::size_t i = 2 * op.window.index(site);
    REQUIRE(a[i * n + i] == mc2 + r.at(site));
    REQUIRE(a[(i + 1) * n + i + 1] == -mc2 + r.at(site));
    REQUIRE(a[i * n + i + 1] == -c);
    if (site < 4) REQUIRE(a[(i + 1) * n + (i + 2)] == c);
  }
  // apply agrees with the dense product on a random state
  SpinorState psi(op.window);
  for (std::size_t i = 0; i < psi.amp.size(); ++i)
    psi.amp[i] = cdouble(std::cos(1.0 + 3.7 * i), std::sin(0.2 * i));
  const auto got = op.apply(psi);
  for (std::size_t i = 0; i < n; ++i) {
    cdouble want = 0.0;
    for (std::size_t j = 0; j < n; ++j) want += a[i * n + j] * psi.amp[j];
    REQUIRE(std::abs(got.amp[i] - want) < 1e-14);
  }
}

TEST_CASE("schrodinger limit operator") {
  const auto r = sample_realization(PotentialSpec::bernoulli(1.0), LatticeWindow(0, 9), 5, 0);
  REQUIRE_THROWS_AS(build_schrodinger_limit(0.0, r), std::invalid_argument);
  const double m = 1.0, k = 1.0 / (2.0 * m);
  const auto h = build_schrodinger_limit(m, r);
  REQUIRE(h.bandwidth == 2);
  const auto a = dense_of(h);
  const std::size_t n = h.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) REQUIRE(a[i * n + j] == a[j * n + i]);
  // interior rows: diagonal 2k + V_n on the upper component, off-diagonal -k
  for (long site = 1; site <= 8; ++site) {
    const std::size_t i = 2 * h.window.index(site);
    REQUIRE(a[i * n + i] == 2.0 * k + r.at(site));
    REQUIRE(a[(i + 1) * n + i + 1] == 2.0 * k);
    REQUIRE(a[i * n + (i + 2)] == -k);
    REQUIRE(a[(i + 1) * n + (i + 3)] == -k);
  }
  // upper and lower blocks decouple
  for (long site = 0; site <= 9; ++site) {
    const std::size_t i = 2 * h.window.index(site);
    REQUIRE(a[i * n + i + 1] == 0.0);
    if (site < 9) REQUIRE(a[(i + 1) * n + (i + 2)] == 0.0);
  }
  // truncated-hopping corners: upper block at n_min, lower block at n_max
  REQUIRE(a[0] == 1.0 * k + r.at(0));
  const std::size_t last = n - 1;
  REQUIRE(a[last * n + last] == 1.0 * k);
}

TEST_CASE("boundary operator blocks and exact decomposition") {
  const LatticeWindow outer(-8, 8), inner(0, 4);
  const double c = 2.0;
  const auto f = boundary_operator(outer, inner, c);
  REQUIRE(f.edges == 2);
  REQUIRE(f.blocks.size() == 4);

  // F has the advertised blocks at (0,-1) and (4,5) plus transposes.
  bool saw_left = false, saw_right = false;
  for (const auto& blk : f.blocks) {
    if (blk.j == 0 && blk.k == -1) {
      saw_left = true;
      REQUIRE(blk.w[0][1] == -c);
      REQUIRE(blk.w[0][0] == 0.0);
      REQUIRE(blk.w[1][0] == 0.0);
      REQUIRE(blk.w[1][1] == 0.0);
    }
    if (blk.j == 4 && blk.k == 5) {
      saw_right = true;
      REQUIRE(blk.w[1][0] == -c);
    }
  }
  REQUIRE(saw_left);
  REQUIRE(saw_right);

  // D_full = D_inner (+) D_complement - F, entrywise exact.
  const auto omega = sample_realization(PotentialSpec::bernoulli(1.0), outer, 99, 1);
  const auto full = build_dirac(DiracParams(1.0, c), omega);
  const std::size_t n = full.dim();
  std::vector<double> lhs = dense_of(full);
  std::vector<double> rhs(n * n, 0.0);
  auto place = [&](const LatticeWindow& part) {
    const auto sub = build_dirac(DiracParams(1.0, c), {part, std::vector<double>(
        omega.values.begin() + omega.window.index(part.n_min),
        omega.values.begin() + omega.window.index(part.n_max) + 1), omega.seed});
    const std::size_t off = 2 * outer.index(part.n_min);
    for (std::size_t i = 0; i < sub.dim(); ++i)
      for (std::size_t j = 0; j < sub.dim(); ++j) rhs[(off + i) * n + off + j] += sub.entry(i, j);
  };
  place(inner);
  place(LatticeWindow(-8, -1));
  place(LatticeWindow(5, 8));
  for (const auto& blk : f.blocks) {
    const std::size_t bi = 2 * outer.index(blk.j), bj = 2 * outer.index(blk.k);
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) rhs[(bi + s) * n + bj + t] -= blk.w[s][t];
  }
  for (std::size_t i = 0; i < n * n; ++i) REQUIRE(lhs[i] == rhs[i]);
}

TEST_CASE("boundary operator degenerate windows") {
  const LatticeWindow outer(-5, 5);
  const auto zero = boundary_operator(outer, outer, 1.0);
  REQUIRE(zero.edges == 0);
  REQUIRE(zero.blocks.empty());
  // flush on one side only: a single edge
  const auto one = boundary_operator(outer, LatticeWindow(-5, 0), 1.0);
  REQUIRE(one.edges == 1);
  REQUIRE_THROWS_AS(boundary_operator(LatticeWindow(0, 3), LatticeWindow(0, 4), 1.0),
                    std::invalid_argument);
}

TEST_CASE("position weights vanish at the origin for positive order") {
  const auto w = position_weights(2.0, LatticeWindow(-3, 3));
  const std::vector<double> want = {9, 4, 1, 0, 1, 4, 9};
  REQUIRE(w == want);
  const auto w1 = position_weights(1.0, LatticeWindow(-2, 2));
  REQUIRE(w1 == std::vector<double>{2, 1, 0, 1, 2});
  // q = 0 keeps every site so the zeroth moment is the squared norm.
  const auto w0 = position_weights(0.0, LatticeWindow(-1, 1));
  REQUIRE(w0 == std::vector<double>{1, 1, 1});
  REQUIRE_THROWS_AS(position_weights(-1.0, LatticeWindow(0, 1)), std::invalid_argument);
}

TEST_CASE("restriction keeps diagonals and drops cut hops") {
  const auto omega = sample_realization(PotentialSpec::bernoulli(0.3), LatticeWindow(-6, 6), 3, 0);
  const auto op = build_dirac(DiracParams(0.0, 1.5), omega);
  const auto sub = restrict_to(op, LatticeWindow(-2, 3));
  REQUIRE(sub.window == LatticeWindow(-2, 3));
  for (long s = -2; s <= 3; ++s) {
    REQUIRE(sub.entry(2 * sub.window.index(s), 2 * sub.window.index(s)) ==
            op.entry(2 * op.window.index(s), 2 * op.window.index(s)));
  }
  REQUIRE(sub.spectral_radius_bound() <= op.spectral_radius_bound());
}
