#pragma once

// Noncommutative Fourier transform: coefficient representations f(k, tau)
// for target Hamiltonians, the |n><m| basis coefficients, synthesis of
// real-space drives, and reconstruction of rotating-frame operators.
//
// Conventions.  An operator C decomposes over phase-space plane waves as
//   C = (1/2pi) int dtau int dk (|k|/2) f(k,tau) e^{ik(x cos tau + p sin tau)},
// with the extended domain f(k,tau) = f*(-k,tau) for k < 0.  The rotating
// frame Hamiltonian of a drive with coefficient f is
//   H(t) = int dk (|k|/2) f(k, Omega t) e^{ik(x cos Omega t + p sin Omega t)}.

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "ffg/fockspace.hpp"
#include "ffg/linalg.hpp"
#include "ffg/params.hpp"

namespace ffg::ncft {

using linalg::CMat;
using linalg::CVec;

// ---------------------------------------------------------------------------
// Coefficient representations

// Finite set of spectral lines: f(k,tau) = sum_j delta(k - k_j) w_j(tau),
// w_j(tau) = sum_h c_{j,h} e^{i h tau}.
struct SpectralLine {
  double k = 0.0;
  std::map<int, cplx> harmonics;
  cplx weight(double tau) const;
};

struct SpectralLineSet {
  std::vector<SpectralLine> lines;
  // Hermiticity closure: for every line (k, w) there is (-k, w*).
  bool conjugate_closed(double tol = 1e-12) const;
};

// Closed-form coefficient of the q-fold rotational lattice target
//   H_T = (beta/|a0|^{2q}) e^{-g n}(a^dag q - a0*^q)(a^q - a0^q) e^{-g n}.
// The tau dependence sits entirely in e^{+-iq tau} bands.
struct CatLatticeForm {
  int q = 4;
  cplx alpha0{1.198, 0.0};
  double gamma = 0.25;
  double beta = 1.0;
  double lambda = 0.25;
  double sigma2() const; // 1/(1 - e^{-2 gamma})
  cplx eval(double k, double tau) const;
  cplx band_radial(int d, double k) const; // d in {0, -q, +q}
};

// Coefficient backed by a Fock matrix: f(k,tau) = sum_nm c_nm f_nm(k,tau).
struct FockBackedCoefficient {
  CMat coeffs;
  double lambda = 1.0;
  cplx eval(double k, double tau) const;
};

// Analytic delta-root bracket of two spectral-line sets (NcFT coefficient of
// the commutator of the corresponding rotating-frame harmonics).
struct LineBracketForm {
  SpectralLineSet fa, fb; // inputs with their harmonic phases folded in
  double lambda = 1.0;
  cplx eval(double k, double tau) const;
};

// Generic analytic form: point evaluation plus optional exact tau bands.
// k_edges marks non-smooth radial points (support boundaries); quadrature
// panels are split there.
struct CallbackForm {
  std::function<cplx(double, double)> eval;
  std::vector<std::pair<int, std::function<cplx(double)>>> bands;
  std::vector<double> k_edges;
};

class NcftCoefficient {
 public:
  using Form =
      std::variant<SpectralLineSet, CatLatticeForm, FockBackedCoefficient, LineBracketForm, CallbackForm>;

  NcftCoefficient() : form_(SpectralLineSet{}) {}
  NcftCoefficient(Form f) : form_(std::move(f)) {}

  // Smooth-part point evaluation.  Spectral lines carry their content as a
  // delta measure, so their smooth part is identically zero.
  cplx operator()(double k, double tau) const;

  const SpectralLineSet* lines() const { return std::get_if<SpectralLineSet>(&form_); }
  const Form& form() const { return form_; }
  Form& form() { return form_; }

  bool is_zero() const {
    const auto* l = lines();
    return l != nullptr && l->lines.empty();
  }

 private:
  Form form_;
};

// ---------------------------------------------------------------------------
// Basis coefficients and forward transform

// NcFT coefficient f_nm(k,tau) of |n><m|.  Equal to
//   e^{lambda k^2/4} sqrt(n!/m!) (i e^{i tau} sqrt(2/lambda)/k)^{m-n}
//     lambda M~(1+n; 1-m+n; -lambda k^2/2),
// evaluated through the cancellation-free Laguerre form
//   lambda * conj(<n|e^{ik(x cos tau + p sin tau)}|m>).
// Throws std::domain_error when |k| exceeds the configured k_max (overflow
// guard of the direct e^{lambda k^2/4} form).  The m > n limit at k -> 0 is
// finite and handled explicitly.
cplx fnm_coefficient(int n, int m, double k, double tau, const SystemParams& p);

// Forward transform of a Fock operator (trivial in this representation).
FockBackedCoefficient ncft_forward(const CMat& op, const SystemParams& p);

// Spectral lines of the monochromatic drive beta cos(x + n Omega t):
// lines at k = +-1 carrying e^{+-i n tau}.
SpectralLineSet ncft_monochromatic(const SystemParams& p);

// Cat-lattice closed form; gamma <= 0 is rejected.
CatLatticeForm ncft_cat_lattice(int q, cplx alpha0, double gamma, const SystemParams& p);

// The line set of f(k,tau) e^{-i l tau}: every harmonic index shifted by -l.
// This is the l-th-harmonic integrand fed to the bracket transform.
SpectralLineSet shift_harmonics(const SpectralLineSet& s, int l);

// ---------------------------------------------------------------------------
// Band machinery
//
// Every coefficient here is a finite sum of tau harmonics,
// f(k,tau) = sum_d e^{i d tau} F_d(k).  With G_d = int dk (|k|/2) F_d(k) M(k)
// (M(k) the tau=0 plane-wave matrix) the rotating-frame Hamiltonian is
//   H(t) = R(Omega t)^dag [ sum_d e^{i d Omega t} G_d ] R(Omega t),
// which makes harmonics, propagation and inverse transforms cheap and exact
// in tau.

struct BandGenerators {
  int dim = 0;
  double omega = 1.0;
  std::map<int, CMat> g;

  CMat assemble(double t) const; // H(t)
  void add_scaled(const BandGenerators& other, double factor);
};

// Build generators by Gauss-Legendre quadrature over [-k_max, k_max]
// (spectral lines contribute exact finite sums instead).  node_override
// replaces params.k_nodes when positive.
BandGenerators band_generators(const NcftCoefficient& f, const SystemParams& p, int node_override = 0);

// Rotating-frame Hamiltonian H(t) of a drive coefficient.  Verifies the
// k-quadrature by comparing two node counts; throws std::runtime_error on
// non-convergence.
CMat rotating_frame_hamiltonian(const NcftCoefficient& f, double t, const SystemParams& p,
                                double quad_tol = 1e-9);

// Inverse transform: the operator whose NcFT coefficient is f (equivalently
// the l = 0 harmonic of the corresponding rotating-frame Hamiltonian).
CMat inverse_ncft(const NcftCoefficient& f, const SystemParams& p);

// ---------------------------------------------------------------------------
// Real-space drive synthesis

struct DriveSpec {
  struct Grid {
    std::vector<double> k;       // k > 0 quadrature nodes
    std::vector<double> weights; // matching quadrature weights
    std::vector<double> t;       // one period
    Eigen::MatrixXd amplitude;   // A(k_i, t_j) >= 0
    Eigen::MatrixXd phase;       // phi(k_i, t_j)
  };
  std::optional<SpectralLineSet> lines;
  std::optional<Grid> grid;
  double omega = 1.0;
};

// A(k,t) = |k f(k, Omega t)|, phi = Arg f(k, Omega t); V(x,t) =
// int_0^inf A cos(kx + phi) dk.  Lines stay exact; smooth coefficients are
// sampled on the quadrature grid over one period.
DriveSpec synth_drive(const NcftCoefficient& f, const SystemParams& p, int t_samples = 64);

double drive_potential(const DriveSpec& spec, double x, double t);

// CSV columns (k, t, amplitude, phase) for grid specs; JSON
// {lines: [{k, harmonics: {h: [re, im]}}]} for spectral lines.
void write_drive_csv(const DriveSpec& spec, std::ostream& os);
void write_lines_json(const SpectralLineSet& lines, std::ostream& os);
SpectralLineSet read_lines_json(std::istream& is);

} // namespace ffg::ncft
