#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "ffg/analytic_example.hpp"
#include "ffg/magnus.hpp"
#include "test_oracles.hpp"

using namespace ffg;
using linalg::CMat;
using magnus::DriveStack;
using magnus::HarmonicSet;
using ncft::NcftCoefficient;

namespace {
SystemParams params60() {
  SystemParams p;
  p.lambda = 2.5;
  p.n_sym = 2;
  p.beta = 0.5;
  p.n_fock = 60;
  return p;
}
} // namespace

TEST_CASE("harmonics of the monochromatic drive") {
  auto p = params60();
  p.n_fock = 40;
  const NcftCoefficient f(ncft::ncft_monochromatic(p));
  const HarmonicSet h = magnus::extract_harmonics(f, p.l_max, p);

  // conjugation invariant H_{-l} = H_l^dag
  CHECK(h.conjugation_deviation() < 1e-12);

  // l = 0 harmonic is the RWA target (independent closed-form builder)
  const CMat target = mono::rwa_target(p, p.n_fock);
  CHECK(linalg::max_abs(h.at(0) - target) < 1e-8);

  // band structure: V_l carries bands m - n in {n_sym - l, -n_sym - l};
  // every |l| <= l_max harmonic is populated for this drive
  for (int l = -p.l_max; l <= p.l_max; ++l) {
    CHECK(linalg::max_abs(h.at(l)) > 1e-12);
    for (int n = 0; n < p.n_fock; ++n)
      for (int m = 0; m < p.n_fock; ++m) {
        const int d = m - n;
        if (d != p.n_sym - l && d != -p.n_sym - l) CHECK(std::abs(h.at(l)(n, m)) < 1e-14);
      }
  }
}

TEST_CASE("zero drive extracts zero harmonics") {
  auto p = params60();
  p.n_fock = 12;
  const HarmonicSet h = magnus::extract_harmonics(NcftCoefficient{}, 4, p);
  for (int l = -4; l <= 4; ++l) CHECK(linalg::max_abs(h.at(l)) == 0.0);
}

TEST_CASE("aliasing guard on the tau grid") {
  auto p = params60();
  p.n_fock = 12;
  p.tau_grid = 32;
  const NcftCoefficient f(ncft::ncft_monochromatic(p));
  CHECK_THROWS_AS(magnus::extract_harmonics(f, 10, p), std::runtime_error);
}

TEST_CASE("first-order Magnus term: trivial and structural cases") {
  auto p = params60();
  const int dim = 16;

  // only l = 0 populated: no commutators survive
  HarmonicSet h(3, dim);
  h.at(0) = oracle::random_hermitian(dim, dim, 21u);
  CHECK(linalg::max_abs(magnus::magnus_first_order(h, p)) == 0.0);

  // generic harmonics: result Hermitian
  HarmonicSet g(2, dim);
  g.at(0) = oracle::random_hermitian(dim, 12, 5u);
  CMat up = CMat::Zero(dim, dim);
  up.topLeftCorner(12, 12) = oracle::random_hermitian(12, 12, 9u) +
                             I * oracle::random_hermitian(12, 12, 10u);
  g.at(1) = up;
  g.at(-1) = up.adjoint();
  g.at(2) = 0.3 * up * up;
  g.at(-2) = g.at(2).adjoint().eval();
  const CMat m1 = magnus::magnus_first_order(g, p);
  CHECK(linalg::herm_deviation(m1) < 1e-10);

  // t0-shift covariance: the Floquet Hamiltonian referenced at t0 equals
  // the reference-0 one of the advanced drive H(t + t0)
  SystemParams pt = p;
  pt.t0 = 0.37 * pt.period();
  const CMat a = magnus::magnus_first_order(g, pt);
  SystemParams p0 = p;
  p0.t0 = 0.0;
  const CMat b = magnus::magnus_first_order(g.shifted(pt.t0, p.omega), p0);
  CHECK(linalg::max_abs(a - b) < 1e-12);
}

TEST_CASE("second-order Magnus term: trivial cases, hermiticity, homogeneity") {
  auto p = params60();
  p.t0 = 0.11 * p.period();
  const int dim = 14;

  HarmonicSet h0(3, dim), zero(3, dim);
  h0.at(0) = oracle::random_hermitian(dim, 10, 3u);
  CMat up = CMat::Zero(dim, dim);
  up.topLeftCorner(10, 10) = oracle::random_hermitian(10, 10, 4u) +
                             I * oracle::random_hermitian(10, 10, 6u);
  h0.at(1) = up;
  h0.at(-1) = up.adjoint();
  h0.at(3) = 0.2 * up.adjoint() * up;
  h0.at(-3) = h0.at(3).adjoint().eval();

  // only l = 0: zero
  HarmonicSet only0(3, dim);
  only0.at(0) = oracle::random_hermitian(dim, dim, 8u);
  CHECK(linalg::max_abs(magnus::magnus_second_order(only0, zero, p)) == 0.0);

  // h1 = 0 reduces to the standard expression
  const CMat full = magnus::magnus_second_order(h0, zero, p);
  const CMat standard = magnus::magnus_second_order_standard(h0, p);
  CHECK(linalg::max_abs(full - standard) == 0.0);
  CHECK(linalg::herm_deviation(standard) < 1e-9);

  // homogeneity: scaling h0 by s scales the standard part by s^3
  HarmonicSet h0s = h0;
  h0s *= 2.0;
  const CMat scaled = magnus::magnus_second_order_standard(h0s, p);
  CHECK(linalg::rel_frobenius(scaled, (8.0 * standard).eval()) < 1e-10);

  // cross terms are Hermitian too
  HarmonicSet h1(3, dim);
  CMat c1 = CMat::Zero(dim, dim);
  c1.topLeftCorner(10, 10) = oracle::random_hermitian(10, 10, 14u) +
                             I * oracle::random_hermitian(10, 10, 15u);
  h1.at(2) = c1;
  h1.at(-2) = c1.adjoint();
  h1.at(0) = oracle::random_hermitian(dim, 10, 16u);
  CHECK(linalg::herm_deviation(magnus::magnus_second_order(h0, h1, p)) < 1e-9);
}

TEST_CASE("bracket transform of identical line inputs vanishes") {
  auto p = params60();
  const auto base = ncft::ncft_monochromatic(p);
  const auto fa = ncft::shift_harmonics(base, 1);
  const NcftCoefficient br = magnus::bracket_transform(NcftCoefficient(fa), NcftCoefficient(fa), p);
  for (double k : {0.3, 0.9, 1.7}) {
    for (double tau : {0.1, 2.0}) CHECK(std::abs(br(k, tau)) < 1e-14);
  }
}

TEST_CASE("bracket transform matches the closed form for [V_l, V_{-l}]") {
  auto p = params60();
  const auto base = ncft::ncft_monochromatic(p);
  for (int l : {1, 2, 3}) {
    const NcftCoefficient fa(ncft::shift_harmonics(base, l));
    const NcftCoefficient fb(ncft::shift_harmonics(base, -l));
    const NcftCoefficient br = magnus::bracket_transform(fa, fb, p);
    for (double k : {-1.7, -0.6, 0.25, 0.8, 1.5, 1.95}) {
      for (double tau : {0.0, 0.7, 3.9}) {
        const cplx expected = mono::f00_l_minus_l(l, k, tau, p);
        CHECK(std::abs(br(k, tau) - expected) < 1e-8 * std::max(1.0, std::abs(expected)));
      }
    }
    // support cutoff: zero outside |k| < 2
    CHECK(br(2.3, 0.4) == cplx{0.0});
    CHECK(br(-2.05, 1.4) == cplx{0.0});
  }
}

TEST_CASE("bracket antisymmetry (pointwise)") {
  auto p = params60();
  const auto base = ncft::ncft_monochromatic(p);
  const NcftCoefficient fa(ncft::shift_harmonics(base, 2));
  const NcftCoefficient fb(ncft::shift_harmonics(base, -1));
  const NcftCoefficient ab = magnus::bracket_transform(fa, fb, p);
  const NcftCoefficient ba = magnus::bracket_transform(fb, fa, p);
  for (double k : {0.2, 0.9, 1.6, -1.2}) {
    for (double tau : {0.0, 1.1, 4.0}) {
      CHECK(std::abs(ab(k, tau) + ba(k, tau)) < 1e-10 * std::max(1.0, std::abs(ab(k, tau))));
    }
  }
}

TEST_CASE("dual route: analytic bracket equals brute-force Fock commutator") {
  auto p = params60();
  p.n_fock = 40;
  const NcftCoefficient drive(ncft::ncft_monochromatic(p));
  const HarmonicSet h = magnus::extract_harmonics(drive, p.l_max, p);
  const auto base = ncft::ncft_monochromatic(p);

  for (int l : {1, 2}) {
    // analytic route: delta-root bracket, reconstructed to a Fock operator
    const NcftCoefficient fa(ncft::shift_harmonics(base, l));
    const NcftCoefficient fb(ncft::shift_harmonics(base, -l));
    const NcftCoefficient br = magnus::bracket_transform(fa, fb, p);
    const CMat analytic = ncft::inverse_ncft(br, p);

    // brute-force route: commutator of the extracted harmonic matrices
    const CMat brute = h.at(l) * h.at(-l) - h.at(-l) * h.at(l);

    const CMat a = linalg::trusted_block(analytic);
    const CMat b = linalg::trusted_block(brute);
    CHECK(linalg::rel_frobenius(a, b) < 1e-6);
  }
}

TEST_CASE("Fock-backed bracket route is the plain commutator") {
  auto p = params60();
  p.n_fock = 16;
  const CMat a = oracle::random_hermitian(p.n_fock, 9, 31u);
  const CMat b = oracle::random_hermitian(p.n_fock, 9, 32u);
  const NcftCoefficient fa(ncft::ncft_forward(a, p));
  const NcftCoefficient fb(ncft::ncft_forward(b, p));
  const NcftCoefficient br = magnus::bracket_transform(fa, fb, p);
  const auto* fc = std::get_if<ncft::FockBackedCoefficient>(&br.form());
  REQUIRE(fc != nullptr);
  CHECK(linalg::max_abs(fc->coeffs - (a * b - b * a)) < 1e-14);

  CHECK_THROWS_AS(magnus::bracket_transform(fa, NcftCoefficient(ncft::ncft_monochromatic(p)), p),
                  std::invalid_argument);
}

TEST_CASE("correction loop: zero target, order bookkeeping, stack serialization") {
  auto p = params60();
  p.n_fock = 30;

  // zero target: all orders vanish
  const DriveStack zero_stack = magnus::correction_loop(NcftCoefficient{}, 2, p);
  REQUIRE(zero_stack.orders.size() == 3);
  for (std::size_t i = 1; i < zero_stack.orders.size(); ++i) {
    const auto* f = std::get_if<ncft::FockBackedCoefficient>(&zero_stack.orders[i].form());
    REQUIRE(f != nullptr);
    CHECK(linalg::max_abs(f->coeffs) == 0.0);
  }

  // homogeneity: f^(1) scales as beta^2
  SystemParams p1 = p, p2 = p;
  p1.beta = 0.2;
  p2.beta = 0.4;
  const DriveStack s1 = magnus::correction_loop(NcftCoefficient(ncft::ncft_monochromatic(p1)), 1, p1);
  const DriveStack s2 = magnus::correction_loop(NcftCoefficient(ncft::ncft_monochromatic(p2)), 1, p2);
  const auto* f1a = std::get_if<ncft::FockBackedCoefficient>(&s1.orders[1].form());
  const auto* f1b = std::get_if<ncft::FockBackedCoefficient>(&s2.orders[1].form());
  REQUIRE(f1a != nullptr);
  REQUIRE(f1b != nullptr);
  CHECK(linalg::rel_frobenius((4.0 * f1a->coeffs).eval(), f1b->coeffs) < 1e-10);

  // JSON round trip preserves payloads
  std::stringstream ss;
  magnus::write_stack_json(s1, ss);
  const DriveStack back = magnus::read_stack_json(ss);
  REQUIRE(back.orders.size() == 2);
  const auto* lines = back.orders[0].lines();
  REQUIRE(lines != nullptr);
  CHECK(lines->lines.size() == 2);
  const auto* fb = std::get_if<ncft::FockBackedCoefficient>(&back.orders[1].form());
  REQUIRE(fb != nullptr);
  CHECK(linalg::max_abs(fb->coeffs - f1a->coeffs) < 1e-15);
}

TEST_CASE("second-order correction loop produces a beta^3 term") {
  auto p = params60();
  p.n_fock = 24;
  p.l_max = 6;
  SystemParams pa = p, pb = p;
  pa.beta = 0.2;
  pb.beta = 0.4;
  const DriveStack sa = magnus::correction_loop(NcftCoefficient(ncft::ncft_monochromatic(pa)), 2, pa);
  const DriveStack sb = magnus::correction_loop(NcftCoefficient(ncft::ncft_monochromatic(pb)), 2, pb);
  const auto* f2a = std::get_if<ncft::FockBackedCoefficient>(&sa.orders[2].form());
  const auto* f2b = std::get_if<ncft::FockBackedCoefficient>(&sb.orders[2].form());
  REQUIRE(f2a != nullptr);
  REQUIRE(f2b != nullptr);
  CHECK(linalg::rel_frobenius((8.0 * f2a->coeffs).eval(), f2b->coeffs) < 1e-9);
}
