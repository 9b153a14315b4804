#pragma once

// Floquet-Magnus machinery: harmonic extraction, first- and second-order
// expansion terms, the commutator bracket transform, and the iterative
// correction-drive loop.

#include <istream>
#include <ostream>
#include <vector>

#include "ffg/ncft.hpp"

namespace ffg::magnus {

using linalg::CMat;
using ncft::NcftCoefficient;

// Rotating-frame harmonics H_l, l in [-l_max, l_max], with H_{-l} = H_l^dag.
class HarmonicSet {
 public:
  HarmonicSet() = default;
  HarmonicSet(int l_max, int dim)
      : l_max_(l_max), dim_(dim), table_(2 * l_max + 1, CMat::Zero(dim, dim)) {}

  int l_max() const { return l_max_; }
  int dim() const { return dim_; }
  const CMat& at(int l) const { return table_.at(l + l_max_); }
  CMat& at(int l) { return table_.at(l + l_max_); }

  // max over l of || H_{-l} - H_l^dag ||_max
  double conjugation_deviation() const;

  // H(t) = sum_l H_l e^{i l Omega t} (the l_max-truncated rotating-frame
  // Hamiltonian this set represents).
  CMat assemble(double t, double omega) const;

  // Harmonics of the time-shifted drive H(t + t0): H_l -> H_l e^{i l Omega t0}.
  HarmonicSet shifted(double t0, double omega) const;

  HarmonicSet& operator+=(const HarmonicSet& other);
  HarmonicSet& operator*=(double s);

 private:
  int l_max_ = 0;
  int dim_ = 0;
  std::vector<CMat> table_;
};

// Per-order drive coefficients f^(0), f^(1), ...; order m >= 1 coefficients
// are NcFT transforms of Magnus terms and enter the total drive with a
// minus sign.
struct DriveStack {
  std::vector<NcftCoefficient> orders;
  static double sign(std::size_t order) { return order == 0 ? 1.0 : -1.0; }
};

// V_l = (1/T) int_0^T H(t) e^{-il Omega t} dt on a uniform tau grid
// (spectrally exact for the band-limited integrands here).  Throws on an
// under-resolved grid: requires tau_grid >= 8 l_max and, for Fock-backed
// coefficients, tau_grid > 2(N-1) + l_max.
HarmonicSet extract_harmonics(const NcftCoefficient& f, int l_max, const SystemParams& p);
HarmonicSet extract_harmonics(const DriveStack& stack, int l_max, const SystemParams& p);
HarmonicSet extract_harmonics(const ncft::BandGenerators& bg, int l_max, const SystemParams& p);

// Combined band generators of a stack (orders applied with their signs).
ncft::BandGenerators stack_generators(const DriveStack& stack, const SystemParams& p);

// First-order Floquet-Magnus term
//   H_F^(1) = (1/lambda Omega) sum_{l>=1} [ (1/2l)[H_l, H_{-l}]
//             + (1/l)[H_{-l}, H_0] e^{il Omega t0} ] + h.c.
CMat magnus_first_order(const HarmonicSet& h, const SystemParams& p);

// Second-order term of the corrected drive: the standard second-order
// expansion from the zeroth-order harmonics plus the two first-order cross
// terms,
//   H~_F^(2) = H_F^(2)[h0] + (1/lambda Omega) sum_{l != 0} (1/l) [h0_l, h1_{-l}]
//              + (1/lambda Omega) sum_{l != 0} (1/l) [h1_{-l}, h0_0] e^{il Omega t0}.
CMat magnus_second_order(const HarmonicSet& h0, const HarmonicSet& h1, const SystemParams& p);

// Standard second-order Floquet-Magnus sum alone (all nested commutators).
CMat magnus_second_order_standard(const HarmonicSet& h0, const SystemParams& p);

// NcFT coefficient of [V_{l'}, V_{l''}].  Spectral-line inputs (carrying
// their harmonic phases) use the analytic delta-root transform; Fock-backed
// inputs go through the Fock commutator of the backing matrices.
NcftCoefficient bracket_transform(const NcftCoefficient& fa, const NcftCoefficient& fb,
                                  const SystemParams& p);

// The six-step correction loop: f^(0) = target, f^(m) = NcFT of the m-th
// Magnus term of the drive assembled so far (m <= order_max <= 2).
DriveStack correction_loop(const NcftCoefficient& target, int order_max, const SystemParams& p);

// JSON round trip: [{order, type, payload}].  Line sets, cat forms and
// Fock-backed coefficients serialize; analytic bracket forms do not.
void write_stack_json(const DriveStack& stack, std::ostream& os);
DriveStack read_stack_json(std::istream& is);

} // namespace ffg::magnus
