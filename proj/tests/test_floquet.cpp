#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ffg/analytic_example.hpp"
#include "ffg/floquet_solver.hpp"
#include "test_oracles.hpp"

using namespace ffg;
using floquet::QuasienergySolution;
using linalg::CMat;
using linalg::CVec;
using magnus::DriveStack;
using ncft::NcftCoefficient;

namespace {
SystemParams params_small() {
  SystemParams p;
  p.lambda = 2.5;
  p.n_sym = 2;
  p.beta = 0.5;
  p.n_fock = 40;
  p.l_max = 8;
  p.m_max = 8;
  return p;
}

DriveStack mono_stack(const SystemParams& p, int order) {
  const NcftCoefficient target(ncft::ncft_monochromatic(p));
  if (order == 0) {
    DriveStack s;
    s.orders.push_back(target);
    return s;
  }
  return magnus::correction_loop(target, order, p);
}
} // namespace

TEST_CASE("quasienergy fold") {
  CHECK(floquet::fold_quasienergy(0.3, 2.5) == doctest::Approx(0.3));
  CHECK(floquet::fold_quasienergy(2.6, 2.5) == doctest::Approx(0.1));
  CHECK(floquet::fold_quasienergy(-1.3, 2.5) == doctest::Approx(1.2));
  CHECK(floquet::fold_quasienergy(1.25, 2.5) == doctest::Approx(1.25)); // right edge included
  CHECK(floquet::fold_quasienergy(-1.25, 2.5) == doctest::Approx(1.25));
  CHECK(floquet::fold_distance(1.24, -1.24, 2.5) == doctest::Approx(0.02));
}

TEST_CASE("zero drive: detuning multiples, pure basis modes") {
  auto p = params_small();
  p.n_fock = 10;
  const magnus::HarmonicSet h(3, p.n_fock);
  const QuasienergySolution sol = floquet::quasienergy_solve(h, 3, p);
  // raw eigenvalues are lambda[(1-Omega) m + M Omega] = lambda M at Omega = 1
  for (int i = 0; i < sol.dim(); ++i) {
    const double eps = sol.epsilon_raw(i);
    CHECK(std::abs(eps / p.lambda - std::round(eps / p.lambda)) < 1e-12);
    CHECK(std::abs(sol.epsilon(i)) < 1e-12); // all fold to zero at Omega = 1
  }
  // modes are pure |m> x |e^{iM Omega t}>: a single unit entry
  for (int a = 0; a < sol.dim(); ++a) {
    const Eigen::VectorXd c = sol.modes.col(a).cwiseAbs();
    CHECK(c.maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.sum() == doctest::Approx(1.0).epsilon(1e-10));
  }
  // micromotion of a pure mode is time independent
  const auto phi0 = sol.micromotion(0, 0.0);
  const auto phi1 = sol.micromotion(0, 0.4 * p.period());
  CHECK((phi0.amp.cwiseAbs() - phi1.amp.cwiseAbs()).norm() < 1e-12);
}

TEST_CASE("quasienergies approach the target spectrum as beta -> 0") {
  auto p = params_small();
  double prev_err = 0.0;
  int idx = 0;
  for (double beta : {0.4, 0.1}) {
    SystemParams pb = p;
    pb.beta = beta;
    const CMat tb = mono::rwa_target(pb, pb.n_fock);
    const auto tsb = linalg::eigh(tb);
    const QuasienergySolution sol = floquet::quasienergy_solve(mono_stack(pb, 0), pb.m_max, pb);
    const auto match = floquet::match_levels(sol, {tsb.vectors.col(0)}, pb.t0);
    const double err = floquet::fold_distance(sol.epsilon(match[0].mode), tsb.values(0), sol.zone());
    if (idx++ > 0) CHECK(err < 0.3 * prev_err); // shrinks faster than linearly
    prev_err = err;
    CHECK(match[0].overlap > 0.99);
  }
}

TEST_CASE("folded spectrum invariant under drive time shift, modes are not") {
  auto p = params_small();
  p.n_fock = 24;
  p.l_max = 6;
  p.m_max = 6;
  const auto h = magnus::extract_harmonics(NcftCoefficient(ncft::ncft_monochromatic(p)), p.l_max, p);
  const QuasienergySolution a = floquet::quasienergy_solve(h, p.m_max, p);
  const QuasienergySolution b =
      floquet::quasienergy_solve(h.shifted(p.period() / 8.0, p.omega), p.m_max, p);

  Eigen::VectorXd ea = a.epsilon, eb = b.epsilon;
  std::sort(ea.data(), ea.data() + ea.size());
  std::sort(eb.data(), eb.data() + eb.size());
  double dmax = 0.0;
  for (Eigen::Index i = 0; i < ea.size(); ++i)
    dmax = std::max(dmax, floquet::fold_distance(ea(i), eb(i), a.zone()));
  CHECK(dmax < 1e-8);

  // modes do change: micromotion snapshots of the matched ground mode have
  // visibly different amplitude profiles at fixed t
  const CMat target = mono::rwa_target(p, p.n_fock);
  const auto tsol = linalg::eigh(target);
  const auto ma = floquet::match_levels(a, {tsol.vectors.col(0)}, 0.0);
  const auto mb = floquet::match_levels(b, {tsol.vectors.col(0)}, 0.0);
  const auto phia = a.micromotion(ma[0].mode, 0.0);
  const auto phib = b.micromotion(mb[0].mode, 0.0);
  CHECK((phia.amp.cwiseAbs() - phib.amp.cwiseAbs()).norm() > 1e-4);
}

TEST_CASE("micromotion periodicity and normalization") {
  auto p = params_small();
  p.n_fock = 24;
  p.l_max = 6;
  p.m_max = 6;
  const QuasienergySolution sol = floquet::quasienergy_solve(mono_stack(p, 0), p.m_max, p);
  const int alpha = sol.dim() / 2;
  const auto at0 = sol.micromotion(alpha, 0.3);
  const auto atT = sol.micromotion(alpha, 0.3 + p.period());
  CHECK((at0.amp - atT.amp).norm() < 1e-12);
  CHECK(std::abs(at0.amp.norm() - 1.0) < 1e-12);
}

TEST_CASE("propagator: zero drive, group property, unitarity") {
  auto p = params_small();
  p.n_fock = 16;
  const magnus::HarmonicSet zero(3, p.n_fock);
  const auto res = floquet::propagator(zero, 0.0, p, 64, 1e-9, 1 << 10);
  CHECK(res.converged);
  CHECK(linalg::max_abs(res.unitary - CMat::Identity(p.n_fock, p.n_fock)) < 1e-12);

  // group property: one period equals the product of two half intervals
  p.n_fock = 30;
  const auto harm = magnus::extract_harmonics(mono_stack(p, 0), p.l_max, p);
  const int steps = 1 << 12;
  const double dt = p.period() / steps;
  auto partial = [&](double a, int nsteps) {
    CMat u = CMat::Identity(p.n_fock, p.n_fock);
    for (int j = 0; j < nsteps; ++j)
      u = linalg::expm((-I * dt / p.lambda) * harm.assemble(a + (j + 0.5) * dt, p.omega)) * u;
    return u;
  };
  const CMat full = partial(0.0, steps);
  const CMat halves = partial(p.period() / 2.0, steps / 2) * partial(0.0, steps / 2);
  CHECK(linalg::max_abs(full - halves) < 1e-12);

  const auto res2 = floquet::propagator(harm, 0.0, p, 64, 1e-9, 1 << 13);
  const CMat gram = res2.unitary.adjoint() * res2.unitary - CMat::Identity(p.n_fock, p.n_fock);
  CHECK(linalg::max_abs(linalg::trusted_block(gram)) < 1e-9);
  CHECK(res2.convergence < 1e-6); // well on its way at beta = 0.5
}

TEST_CASE("propagator eigenphases match quasienergies (cross-method)") {
  auto p = params_small();
  p.n_fock = 36;
  p.l_max = 8;
  p.m_max = 10;
  const auto stack = mono_stack(p, 0);
  const auto res = floquet::propagator(stack, p.t0, p, 256, 1e-9, 1 << 13);
  const Eigen::VectorXd eps_u = floquet::propagator_quasienergies(res.unitary, p);
  const QuasienergySolution sol = floquet::quasienergy_solve(stack, p.m_max, p);

  double worst = 0.0;
  for (Eigen::Index i = 0; i < eps_u.size(); ++i) {
    double best = 1e99;
    for (Eigen::Index j = 0; j < sol.epsilon.size(); ++j)
      best = std::min(best, floquet::fold_distance(eps_u(i), sol.epsilon(j), sol.zone()));
    worst = std::max(worst, best);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("propagator approaches exp(-i T H_T / lambda) at small beta") {
  auto p = params_small();
  p.n_fock = 30;
  double prev = 0.0;
  int idx = 0;
  for (double beta : {0.2, 0.1}) {
    SystemParams pb = p;
    pb.beta = beta;
    const auto res = floquet::propagator(mono_stack(pb, 0), 0.0, pb, 256, 1e-10, 1 << 13);
    const CMat target = mono::rwa_target(pb, pb.n_fock);
    const CMat ref = oracle::expm_pade((-I * pb.period() / pb.lambda) * target);
    const double err = linalg::max_abs(linalg::trusted_block(res.unitary - ref, 12));
    if (idx++ > 0) {
      // deviation shrinks like beta^2 (the beta^2 H_F^(1) term dominates)
      const double ratio = prev / err;
      CHECK(ratio > 2.5);
      CHECK(ratio < 6.0);
    }
    prev = err;
  }
}

TEST_CASE("cat-state fidelity of trivial unitaries") {
  const int n = 60;
  const cplx alpha = 1.538;
  const CMat id = CMat::Identity(n, n);
  CHECK(floquet::fidelity_cats(id, 4, alpha, n) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(floquet::fidelity_cats((std::exp(I * 0.7) * id).eval(), 4, alpha, n) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("state fidelity and amplitude profile") {
  fock::FockState a, b;
  a.amp = CVec::Zero(6);
  a.amp(2) = 1.0;
  b.amp = CVec::Zero(6);
  b.amp(3) = 1.0;
  CHECK(floquet::state_fidelity(a, a) == doctest::Approx(1.0));
  CHECK(floquet::state_fidelity(a, b) == doctest::Approx(0.0));
  const auto d = floquet::amplitude_profile_delta(a, a);
  for (double v : d) CHECK(v == 0.0);
  fock::FockState c;
  c.amp = CVec::Zero(4);
  CHECK_THROWS_AS(floquet::state_fidelity(a, c), std::invalid_argument);
}

TEST_CASE("state propagation agrees with the full propagator") {
  auto p = params_small();
  p.n_fock = 24;
  const auto harm = magnus::extract_harmonics(mono_stack(p, 0), p.l_max, p);
  const auto full = floquet::propagator(harm, 0.0, p, 512, 1e-11, 1 << 11);
  std::vector<CVec> states{fock::coherent_state(0.7, p.n_fock).amp,
                           fock::coherent_state(cplx(0.0, -0.4), p.n_fock).amp};
  const auto sp = floquet::propagate_states(harm, 0.0, p, states, 512, 1e-11, 1 << 11);
  CHECK(sp.step_count == full.step_count);
  for (std::size_t i = 0; i < states.size(); ++i)
    CHECK((sp.states[i] - full.unitary * states[i]).norm() < 1e-9);
}

TEST_CASE("dimension guard") {
  auto p = params_small();
  p.n_fock = 2001;
  const magnus::HarmonicSet h(1, p.n_fock);
  CHECK_THROWS_AS(floquet::quasienergy_solve(h, 5, p), std::invalid_argument);
}

TEST_CASE("corrected quasi-ground state has a smaller amplitude-profile delta") {
  // Delta|<m|0>| against the target ground state, uncorrected vs corrected
  auto p = params_small();
  p.n_fock = 60;
  p.l_max = 10;
  p.m_max = 10;
  const CMat target = mono::rwa_target(p, p.n_fock);
  const auto ts = linalg::eigh(target);
  fock::FockState ground;
  ground.amp = ts.vectors.col(0);

  auto profile_max = [&](const DriveStack& stack) {
    const auto sol = floquet::quasienergy_solve(stack, p.m_max, p);
    const auto match = floquet::match_levels(sol, {ground.amp}, p.t0);
    const auto delta = floquet::amplitude_profile_delta(sol.micromotion(match[0].mode, p.t0), ground);
    double mx = 0.0;
    for (double v : delta) mx = std::max(mx, std::abs(v));
    return mx;
  };
  const double orig = profile_max(mono_stack(p, 0));
  const double corrected = profile_max(mono_stack(p, 1));
  CHECK(corrected < orig);
  CHECK(corrected < 0.5 * orig); // the correction is substantial at beta = 0.5
}

TEST_CASE("cat fidelity: matrix route equals state route on a real propagator") {
  SystemParams p;
  p.lambda = 0.25;
  p.q_fold = 4;
  p.alpha0 = 1.198;
  p.gamma = 0.25;
  p.beta = 0.01;
  p.n_fock = 50;
  p.l_max = 6;
  p.m_max = 6;
  const ncft::NcftCoefficient target(ncft::ncft_cat_lattice(p.q_fold, p.alpha0, p.gamma, p));
  DriveStack stack;
  stack.orders.push_back(target);
  const auto harm = magnus::extract_harmonics(stack, p.l_max, p);
  const auto prop = floquet::propagator(harm, 0.0, p, 256, 1e-9, 1 << 12);

  const cplx alpha_cat = p.alpha0 * std::exp(p.gamma);
  const double f_matrix = floquet::fidelity_cats(prop.unitary, p.q_fold, alpha_cat, p.n_fock);
  CHECK(f_matrix > 0.99);
  CHECK(f_matrix <= 1.0 + 1e-12);

  std::vector<CVec> cats;
  for (int s = 0; s < 4; ++s) cats.push_back(fock::cat_state(4, s, alpha_cat, p.n_fock).amp);
  const auto sp = floquet::propagate_states(harm, 0.0, p, cats, 256, 1e-9, 1 << 12);
  double f_states = 0.0;
  for (int s = 0; s < 4; ++s) f_states += std::abs(cats[s].dot(sp.states[s]));
  f_states /= 4.0;
  CHECK(f_matrix == doctest::Approx(f_states).epsilon(1e-9));
}
