#include "ffg/ncft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "ffg/specfun.hpp"

namespace ffg::ncft {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Spectral lines

cplx SpectralLine::weight(double tau) const {
  cplx w = 0.0;
  for (const auto& [h, c] : harmonics) w += c * std::exp(I * static_cast<double>(h) * tau);
  return w;
}

bool SpectralLineSet::conjugate_closed(double tol) const {
  for (const auto& a : lines) {
    bool matched = false;
    for (const auto& b : lines) {
      if (std::abs(a.k + b.k) > tol) continue;
      // need w_b(tau) = conj(w_a(tau)): harmonics c_{b,-h} = conj(c_{a,h})
      bool ok = true;
      for (const auto& [h, c] : a.harmonics) {
        const auto it = b.harmonics.find(-h);
        const cplx cb = (it == b.harmonics.end()) ? cplx{0.0} : it->second;
        if (std::abs(cb - std::conj(c)) > tol) {
          ok = false;
          break;
        }
      }
      if (ok) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cat lattice closed form

double CatLatticeForm::sigma2() const { return 1.0 / (1.0 - std::exp(-2.0 * gamma)); }

cplx CatLatticeForm::band_radial(int d, double k) const {
  const double s2 = sigma2();
  const double z = lambda * s2 * k * k / 2.0;
  // e^{lambda k^2/4} 1F1-terms rewritten through e^{-z} L_q(z): the net
  // Gaussian envelope is exp(-lambda coth(gamma) k^2/4), finite for all k.
  const double envelope = std::exp(lambda * k * k / 4.0 - z);
  const double a_mag = std::abs(alpha0) * std::exp(gamma);
  const double pref = beta * lambda * std::pow(s2, q + 1) / std::pow(a_mag, 2 * q);

  if (d == 0) {
    const double qfact = std::exp(std::lgamma(q + 1.0));
    const double lag = specfun::laguerre_assoc(q, 0, z);
    const double corner = std::pow(a_mag / std::sqrt(s2), 2 * q);
    return pref * envelope * (qfact * lag + corner);
  }
  if (d == -q) {
    const cplx amp = -I * alpha0 * std::exp(gamma) * std::sqrt(lambda / 2.0) * k;
    return -pref * envelope * std::pow(amp, q);
  }
  if (d == q) {
    const cplx amp = -I * std::conj(alpha0) * std::exp(gamma) * std::sqrt(lambda / 2.0) * k;
    return -pref * envelope * std::pow(amp, q);
  }
  return 0.0;
}

cplx CatLatticeForm::eval(double k, double tau) const {
  cplx f = band_radial(0, k);
  f += band_radial(-q, k) * std::exp(-I * static_cast<double>(q) * tau);
  f += band_radial(q, k) * std::exp(I * static_cast<double>(q) * tau);
  return f;
}

// ---------------------------------------------------------------------------
// Fock-backed coefficient

namespace {

// Radial part of f_nm: f_nm(k,tau) = rho_nm(k) e^{i(m-n)tau}, with
// rho(k) = lambda * conj(M(k)) elementwise (M the tau = 0 plane wave).
CMat fnm_radial_matrix(double k, double lambda, int n_fock) {
  return lambda * fock::planewave_core(k, lambda, n_fock).conjugate();
}

} // namespace

cplx FockBackedCoefficient::eval(double k, double tau) const {
  const int n_fock = static_cast<int>(coeffs.rows());
  const CMat rho = fnm_radial_matrix(k, lambda, n_fock);
  cplx f = 0.0;
  for (int n = 0; n < n_fock; ++n)
    for (int m = 0; m < n_fock; ++m) {
      const cplx c = coeffs(n, m);
      if (c == cplx{0.0}) continue;
      f += c * rho(n, m) * std::exp(I * static_cast<double>(m - n) * tau);
    }
  return f;
}

// ---------------------------------------------------------------------------
// Analytic delta-root bracket

cplx LineBracketForm::eval(double k, double tau) const {
  double kk = k;
  if (std::abs(kk) < 1e-12) kk = 1e-12; // continuity limit; |k|/2 weight kills k=0 anyway

  cplx sum = 0.0;
  for (const auto& la : fa.lines) {
    for (const auto& lb : fb.lines) {
      const double ka = la.k, kb = lb.k;
      if (ka == 0.0 || kb == 0.0) continue;
      const double lo = std::abs(std::abs(ka) - std::abs(kb));
      const double hi = std::abs(ka) + std::abs(kb);
      if (std::abs(kk) <= lo || std::abs(kk) >= hi) continue; // outside support
      const double c1 = (kk * kk + ka * ka - kb * kb) / (2.0 * ka * kk);
      if (std::abs(c1) >= 1.0) continue;
      const double alpha = std::acos(c1);
      for (const int sgn : {+1, -1}) {
        const double tp = tau + sgn * alpha;
        const double vx = kk * std::cos(tau) - ka * std::cos(tp);
        const double vy = kk * std::sin(tau) - ka * std::sin(tp);
        double tpp = std::atan2(vy, vx);
        if (kb < 0.0) tpp += PI;
        const double s = std::sin(tp - tpp);
        // kernel sin(lambda ka kb s / 2) / |s| with its removable limit
        const double kern = (std::abs(s) < 1e-8)
                                ? 0.5 * lambda * ka * kb * (s >= 0.0 ? 1.0 : -1.0)
                                : std::sin(0.5 * lambda * ka * kb * s) / std::abs(s);
        sum += kern * la.weight(tp) * lb.weight(tpp);
      }
    }
  }
  return I / (4.0 * PI) * sum;
}

// ---------------------------------------------------------------------------
// NcftCoefficient

cplx NcftCoefficient::operator()(double k, double tau) const {
  return std::visit(
      [&](const auto& f) -> cplx {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SpectralLineSet>) {
          return 0.0; // delta measure: smooth part vanishes
        } else if constexpr (std::is_same_v<T, CallbackForm>) {
          return f.eval(k, tau);
        } else {
          return f.eval(k, tau);
        }
      },
      form_);
}

// ---------------------------------------------------------------------------
// Basis coefficient and transforms

cplx fnm_coefficient(int n, int m, double k, double tau, const SystemParams& p) {
  if (n < 0 || m < 0 || n >= p.n_fock || m >= p.n_fock)
    throw std::invalid_argument("fnm_coefficient: Fock index out of range");
  const double guard = p.k_cutoff(true);
  if (std::abs(k) > guard)
    throw std::domain_error("fnm_coefficient: |k| beyond configured k_max (e^{lambda k^2/4} overflow guard)");
  if (k == 0.0) {
    // finite limit: lambda for n = m, zero otherwise (series cancellation)
    return n == m ? cplx{p.lambda} : cplx{0.0};
  }
  const double z = p.lambda * k * k / 2.0;
  const double gauss = std::exp(-z / 2.0);
  const int d = std::abs(m - n);
  const int lo = std::min(n, m);
  const cplx base = std::pow(-I * k * std::sqrt(p.lambda / 2.0), d);
  const cplx phase = std::exp(I * static_cast<double>(m - n) * tau);
  return p.lambda * gauss * base * specfun::sqrt_factorial_ratio(lo, std::max(n, m)) *
         specfun::laguerre_assoc(lo, d, z) * phase;
}

FockBackedCoefficient ncft_forward(const CMat& op, const SystemParams& p) {
  if (op.rows() != op.cols()) throw std::invalid_argument("ncft_forward: operator not square");
  return FockBackedCoefficient{op, p.lambda};
}

SpectralLineSet ncft_monochromatic(const SystemParams& p) {
  SpectralLineSet s;
  SpectralLine plus;
  plus.k = 1.0;
  plus.harmonics[p.n_sym] = p.beta;
  SpectralLine minus;
  minus.k = -1.0;
  minus.harmonics[-p.n_sym] = p.beta;
  s.lines = {plus, minus};
  return s;
}

SpectralLineSet shift_harmonics(const SpectralLineSet& s, int l) {
  SpectralLineSet out;
  out.lines.reserve(s.lines.size());
  for (const auto& line : s.lines) {
    SpectralLine shifted;
    shifted.k = line.k;
    for (const auto& [h, c] : line.harmonics) shifted.harmonics[h - l] = c;
    out.lines.push_back(std::move(shifted));
  }
  return out;
}

CatLatticeForm ncft_cat_lattice(int q, cplx alpha0, double gamma, const SystemParams& p) {
  if (q < 2) throw std::invalid_argument("ncft_cat_lattice: q must be >= 2");
  if (gamma <= 0.0) throw std::invalid_argument("ncft_cat_lattice: gamma must be > 0");
  CatLatticeForm f;
  f.q = q;
  f.alpha0 = alpha0;
  f.gamma = gamma;
  f.beta = p.beta;
  f.lambda = p.lambda;
  return f;
}

// ---------------------------------------------------------------------------
// Band machinery

CMat BandGenerators::assemble(double t) const {
  CMat x = CMat::Zero(dim, dim);
  for (const auto& [d, gd] : g) x += std::exp(I * static_cast<double>(d) * omega * t) * gd;
  CVec u(dim);
  for (int m = 0; m < dim; ++m) u(m) = std::exp(I * omega * t * static_cast<double>(m));
  return u.asDiagonal() * x * u.conjugate().asDiagonal();
}

void BandGenerators::add_scaled(const BandGenerators& other, double factor) {
  if (dim == 0) {
    dim = other.dim;
    omega = other.omega;
  }
  if (other.dim != dim) throw std::invalid_argument("BandGenerators: dimension mismatch");
  for (const auto& [d, gd] : other.g) {
    auto it = g.find(d);
    if (it == g.end())
      g[d] = factor * gd;
    else
      it->second += factor * gd;
  }
}

namespace {

struct BandVisitor {
  const SystemParams& p;
  int nodes;

  BandGenerators lines(const SpectralLineSet& s) const {
    BandGenerators bg;
    bg.dim = p.n_fock;
    bg.omega = p.omega;
    for (const auto& line : s.lines) {
      const CMat m = fock::planewave_core(line.k, p.lambda, p.n_fock);
      for (const auto& [h, c] : line.harmonics) {
        auto it = bg.g.find(h);
        if (it == bg.g.end()) bg.g[h] = CMat::Zero(p.n_fock, p.n_fock);
        bg.g[h] += (std::abs(line.k) / 2.0) * c * m;
      }
    }
    return bg;
  }

  // Mirrored panel rule over |k| in [edges_0, edges_last]; panels split at
  // every edge (the |k| measure kink at 0 and any support boundaries).
  // cosine_map substitutes k = mid - half cos(theta), which turns the
  // sqrt-type endpoint behavior of arccos(k/2)-family integrands into an
  // analytic one and restores spectral convergence.
  linalg::Quadrature panel_rule(std::vector<double> edges, bool cosine_map = false) const {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                edges.end());
    linalg::Quadrature quad;
    const int panels = std::max<int>(1, edges.size() - 1);
    const int per_panel = std::max(8, nodes / (2 * panels));
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      for (double sign : {1.0, -1.0}) {
        const double a = sign > 0 ? edges[e] : -edges[e + 1];
        const double b = sign > 0 ? edges[e + 1] : -edges[e];
        if (cosine_map) {
          const auto theta = linalg::gauss_legendre(per_panel, 0.0, PI);
          const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
          for (int i = 0; i < per_panel; ++i) {
            quad.nodes.push_back(mid - half * std::cos(theta.nodes[i]));
            quad.weights.push_back(theta.weights[i] * half * std::sin(theta.nodes[i]));
          }
        } else {
          const auto panel = linalg::gauss_legendre(per_panel, a, b);
          quad.nodes.insert(quad.nodes.end(), panel.nodes.begin(), panel.nodes.end());
          quad.weights.insert(quad.weights.end(), panel.weights.begin(), panel.weights.end());
        }
      }
    }
    return quad;
  }

  BandGenerators accumulate(const std::vector<int>& bands,
                            const std::function<cplx(int, double)>& radial,
                            const linalg::Quadrature& quad) const {
    BandGenerators bg;
    bg.dim = p.n_fock;
    bg.omega = p.omega;
    for (int d : bands) bg.g[d] = CMat::Zero(p.n_fock, p.n_fock);
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
      const double k = quad.nodes[i];
      const double w = quad.weights[i] * std::abs(k) / 2.0;
      const CMat m = fock::planewave_core(k, p.lambda, p.n_fock);
      for (int d : bands) {
        const cplx f = radial(d, k);
        if (f != cplx{0.0}) bg.g[d] += (w * f) * m;
      }
    }
    return bg;
  }

  // Quadrature over smooth band radials F_d: G_d = int (|k|/2) F_d(k) M(k) dk
  BandGenerators smooth(const std::vector<int>& bands,
                        const std::function<cplx(int, double)>& radial, bool cat_envelope) const {
    return accumulate(bands, radial, panel_rule({0.0, p.k_cutoff(cat_envelope)}));
  }

  BandGenerators operator()(const SpectralLineSet& s) const { return lines(s); }

  BandGenerators operator()(const CatLatticeForm& f) const {
    return smooth({0, -f.q, f.q}, [&](int d, double k) { return f.band_radial(d, k); }, true);
  }

  BandGenerators operator()(const FockBackedCoefficient& f) const {
    const int n_fock = static_cast<int>(f.coeffs.rows());
    // Bands actually present in c_nm (d = m - n), negligible ones dropped.
    const double cmax = f.coeffs.cwiseAbs().maxCoeff();
    const double cut = 1e-16 * cmax;
    std::vector<int> bands;
    int n_sig = 0; // largest Fock index carrying > 1e-8 relative content
    for (int d = -(n_fock - 1); d <= n_fock - 1; ++d) {
      double bmax = 0.0;
      for (int n = std::max(0, -d); n < n_fock && n + d < n_fock; ++n) {
        const double a = std::abs(f.coeffs(n, n + d));
        bmax = std::max(bmax, a);
        if (a > 1e-8 * cmax) n_sig = std::max({n_sig, n, n + d});
      }
      if (bmax > cut && bmax > 0.0) bands.push_back(d);
    }

    BandGenerators bg;
    bg.dim = p.n_fock;
    bg.omega = p.omega;
    // The radial functions rho_nm oscillate out to z = lambda k^2/2 ~ 4 n
    // and their Airy tails stay relevant to z ~ 10 n; clip beyond the
    // significant support of c and resolve the extra oscillations.
    const double kmax = (p.k_max > 0.0)
                            ? p.k_max
                            : std::max(p.k_cutoff(true), std::sqrt((20.0 * n_sig + 60.0) / f.lambda));
    const int eff_nodes = std::max(nodes, 8 * n_sig + 240);
    auto quad = linalg::gauss_legendre(eff_nodes / 2, 0.0, kmax);
    {
      const auto neg = linalg::gauss_legendre(eff_nodes / 2, -kmax, 0.0);
      quad.nodes.insert(quad.nodes.end(), neg.nodes.begin(), neg.nodes.end());
      quad.weights.insert(quad.weights.end(), neg.weights.begin(), neg.weights.end());
    }
    for (int d : bands) bg.g[d] = CMat::Zero(p.n_fock, p.n_fock);
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
      const double k = quad.nodes[i];
      const double w = quad.weights[i] * std::abs(k) / 2.0;
      const CMat rho = fnm_radial_matrix(k, f.lambda, n_fock);
      const CMat m = fock::planewave_core(k, p.lambda, p.n_fock);
      for (int d : bands) {
        cplx fd = 0.0;
        for (int n = std::max(0, -d); n < n_fock && n + d < n_fock; ++n)
          fd += f.coeffs(n, n + d) * rho(n, n + d);
        bg.g[d] += (w * fd) * m;
      }
    }
    return bg;
  }

  BandGenerators operator()(const LineBracketForm& f) const {
    // The delta-root bracket lives on |k| in [lo, hi] per line pair and is
    // non-smooth at those support edges; integrate panel by panel.
    std::vector<double> edges{0.0};
    for (const auto& la : f.fa.lines)
      for (const auto& lb : f.fb.lines) {
        edges.push_back(std::abs(std::abs(la.k) - std::abs(lb.k)));
        edges.push_back(std::abs(la.k) + std::abs(lb.k));
      }
    return accumulate(bracket_bands(f),
                      [&](int d, double k) { return bracket_radial(f, d, k); },
                      panel_rule(edges, true));
  }

  BandGenerators operator()(const CallbackForm& f) const {
    if (f.bands.empty())
      throw std::invalid_argument("band_generators: callback form carries no band decomposition");
    std::vector<int> ds;
    for (const auto& [d, fn] : f.bands) ds.push_back(d);
    std::vector<double> edges = f.k_edges;
    edges.push_back(0.0);
    if (edges.size() < 2) edges.push_back(p.k_cutoff(false));
    return accumulate(ds,
                      [&](int d, double k) -> cplx {
                        for (const auto& [dd, fn] : f.bands)
                          if (dd == d) return fn(k);
                        return 0.0;
                      },
                      panel_rule(edges, !f.k_edges.empty()));
  }

  // tau bands of a line bracket by projecting the closed-form evaluation;
  // the band list is the sums of input harmonic indices.
  static std::vector<int> bracket_bands(const LineBracketForm& f) {
    std::vector<int> bands;
    for (const auto& la : f.fa.lines)
      for (const auto& lb : f.fb.lines)
        for (const auto& [ha, ca] : la.harmonics)
          for (const auto& [hb, cb] : lb.harmonics) {
            const int d = ha + hb;
            if (std::find(bands.begin(), bands.end(), d) == bands.end()) bands.push_back(d);
          }
    std::sort(bands.begin(), bands.end());
    return bands;
  }

  static cplx bracket_radial(const LineBracketForm& f, int d, double k) {
    // Project e^{-i d tau} over one period; the integrand is a short trig
    // polynomial, a modest uniform grid is exact.
    const int grid = 64;
    cplx acc = 0.0;
    for (int j = 0; j < grid; ++j) {
      const double tau = 2.0 * PI * j / grid;
      acc += f.eval(k, tau) * std::exp(-I * static_cast<double>(d) * tau);
    }
    return acc / static_cast<double>(grid);
  }
};

} // namespace

BandGenerators band_generators(const NcftCoefficient& f, const SystemParams& p, int node_override) {
  const int nodes = node_override > 0 ? node_override : p.k_nodes;
  return std::visit(BandVisitor{p, nodes}, f.form());
}

CMat rotating_frame_hamiltonian(const NcftCoefficient& f, double t, const SystemParams& p,
                                double quad_tol) {
  const CMat h = band_generators(f, p).assemble(t);
  if (f.lines() != nullptr) return h; // exact finite sum
  const CMat h2 = band_generators(f, p, p.k_nodes + p.k_nodes / 2).assemble(t);
  const double scale = std::max(1.0, linalg::max_abs(h));
  if (linalg::max_abs(h - h2) > quad_tol * scale)
    throw std::runtime_error("rotating_frame_hamiltonian: k-quadrature not converged; raise k_nodes");
  return h;
}

CMat inverse_ncft(const NcftCoefficient& f, const SystemParams& p) {
  const BandGenerators bg = band_generators(f, p);
  CMat c = CMat::Zero(bg.dim, bg.dim);
  // l = 0 harmonic of H(t): entry (n, m) takes band d = m - n.
  for (const auto& [d, gd] : bg.g) {
    for (int n = std::max(0, -d); n < bg.dim && n + d < bg.dim; ++n) c(n, n + d) += gd(n, n + d);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Drive synthesis

DriveSpec synth_drive(const NcftCoefficient& f, const SystemParams& p, int t_samples) {
  DriveSpec spec;
  spec.omega = p.omega;
  if (const auto* l = f.lines()) {
    if (!l->conjugate_closed(1e-9))
      throw std::invalid_argument("synth_drive: spectral lines are not hermiticity-closed");
    spec.lines = *l;
    return spec;
  }
  const bool cat = std::holds_alternative<CatLatticeForm>(f.form());
  const double kmax = p.k_cutoff(cat);
  const auto quad = linalg::gauss_legendre(p.k_nodes, 0.0, kmax);
  DriveSpec::Grid grid;
  grid.k = quad.nodes;
  grid.weights = quad.weights;
  grid.t.resize(t_samples);
  grid.amplitude.resize(p.k_nodes, t_samples);
  grid.phase.resize(p.k_nodes, t_samples);
  for (int j = 0; j < t_samples; ++j) {
    const double t = p.period() * j / t_samples;
    grid.t[j] = t;
    for (int i = 0; i < p.k_nodes; ++i) {
      const cplx fk = f(grid.k[i], p.omega * t);
      grid.amplitude(i, j) = std::abs(grid.k[i] * fk);
      grid.phase(i, j) = std::arg(fk);
    }
  }
  spec.grid = std::move(grid);
  return spec;
}

double drive_potential(const DriveSpec& spec, double x, double t) {
  if (spec.lines) {
    // V(x,t) = sum_j (|k_j|/2) w_j(Omega t) e^{i k_j x}; real by closure
    cplx v = 0.0;
    for (const auto& line : spec.lines->lines)
      v += std::abs(line.k) / 2.0 * line.weight(spec.omega * t) * std::exp(I * line.k * x);
    return v.real();
  }
  if (!spec.grid) return 0.0;
  const auto& g = *spec.grid;
  // locate bracketing time samples (periodic), interpolate A e^{i phi}
  const double period = 2.0 * PI / spec.omega;
  double tt = std::fmod(t, period);
  if (tt < 0.0) tt += period;
  const int nt = static_cast<int>(g.t.size());
  const double step = period / nt;
  const int j0 = static_cast<int>(std::floor(tt / step)) % nt;
  const int j1 = (j0 + 1) % nt;
  const double frac = (tt - g.t[j0]) / step;

  double v = 0.0;
  for (std::size_t i = 0; i < g.k.size(); ++i) {
    const cplx c0 = g.amplitude(i, j0) * std::exp(I * g.phase(i, j0));
    const cplx c1 = g.amplitude(i, j1) * std::exp(I * g.phase(i, j1));
    const cplx c = (1.0 - frac) * c0 + frac * c1;
    v += g.weights[i] * (std::abs(c) * std::cos(g.k[i] * x + std::arg(c)));
  }
  return v;
}

void write_drive_csv(const DriveSpec& spec, std::ostream& os) {
  if (!spec.grid) throw std::invalid_argument("write_drive_csv: grid representation required");
  const auto& g = *spec.grid;
  os << "k,t,amplitude,phase\n";
  char buf[160];
  for (std::size_t i = 0; i < g.k.size(); ++i)
    for (std::size_t j = 0; j < g.t.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", g.k[i], g.t[j],
                    g.amplitude(i, j), g.phase(i, j));
      os << buf;
    }
}

void write_lines_json(const SpectralLineSet& lines, std::ostream& os) {
  json j;
  j["lines"] = json::array();
  for (const auto& line : lines.lines) {
    json jl;
    jl["k"] = line.k;
    json h = json::object();
    for (const auto& [hh, c] : line.harmonics) h[std::to_string(hh)] = {c.real(), c.imag()};
    jl["harmonics"] = h;
    j["lines"].push_back(jl);
  }
  os << j.dump(2) << "\n";
}

SpectralLineSet read_lines_json(std::istream& is) {
  json j;
  is >> j;
  SpectralLineSet s;
  for (const auto& jl : j.at("lines")) {
    SpectralLine line;
    line.k = jl.at("k").get<double>();
    for (const auto& [key, val] : jl.at("harmonics").items())
      line.harmonics[std::stoi(key)] = cplx(val.at(0).get<double>(), val.at(1).get<double>());
    s.lines.push_back(line);
  }
  return s;
}

} // namespace ffg::ncft
