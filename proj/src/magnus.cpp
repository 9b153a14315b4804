#include "ffg/magnus.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace ffg::magnus {

using json = nlohmann::json;
using ncft::BandGenerators;

double HarmonicSet::conjugation_deviation() const {
  double dev = 0.0;
  for (int l = 0; l <= l_max_; ++l)
    dev = std::max(dev, linalg::max_abs(at(-l) - at(l).adjoint()));
  return dev;
}

CMat HarmonicSet::assemble(double t, double omega) const {
  CMat h = at(0);
  for (int l = 1; l <= l_max_; ++l) {
    const cplx ph = std::exp(I * static_cast<double>(l) * omega * t);
    h += ph * at(l) + std::conj(ph) * at(-l);
  }
  return h;
}

HarmonicSet HarmonicSet::shifted(double t0, double omega) const {
  HarmonicSet out(l_max_, dim_);
  for (int l = -l_max_; l <= l_max_; ++l)
    out.at(l) = at(l) * std::exp(I * static_cast<double>(l) * omega * t0);
  return out;
}

HarmonicSet& HarmonicSet::operator+=(const HarmonicSet& other) {
  if (other.l_max_ != l_max_ || other.dim_ != dim_)
    throw std::invalid_argument("HarmonicSet: shape mismatch");
  for (std::size_t i = 0; i < table_.size(); ++i) table_[i] += other.table_[i];
  return *this;
}

HarmonicSet& HarmonicSet::operator*=(double s) {
  for (auto& m : table_) m *= s;
  return *this;
}

HarmonicSet extract_harmonics(const ncft::BandGenerators& bg, int l_max, const SystemParams& p) {
  if (l_max < 1) throw std::invalid_argument("extract_harmonics: l_max must be >= 1");
  const int grid = p.tau_grid;
  if (grid < 8 * l_max)
    throw std::runtime_error("extract_harmonics: tau grid under-resolves l_max (need >= 8 l_max)");
  int band_span = 0;
  for (const auto& [d, gd] : bg.g) band_span = std::max(band_span, std::abs(d));
  if (band_span + (bg.dim - 1) + l_max >= grid)
    throw std::runtime_error("extract_harmonics: tau grid aliases the coefficient band content");

  HarmonicSet h(l_max, bg.dim);
  // H(tau_j) on the uniform grid, then a DFT projection; exact for these
  // trigonometric-polynomial integrands.
  const double omega = p.omega;
  for (int j = 0; j < grid; ++j) {
    const double tau = 2.0 * PI * j / grid;
    const CMat hj = bg.assemble(tau / omega);
    for (int l = -l_max; l <= l_max; ++l)
      h.at(l) += hj * (std::exp(-I * static_cast<double>(l) * tau) / static_cast<double>(grid));
  }
  return h;
}

HarmonicSet extract_harmonics(const NcftCoefficient& f, int l_max, const SystemParams& p) {
  return extract_harmonics(ncft::band_generators(f, p), l_max, p);
}

ncft::BandGenerators stack_generators(const DriveStack& stack, const SystemParams& p) {
  BandGenerators total;
  for (std::size_t i = 0; i < stack.orders.size(); ++i)
    total.add_scaled(ncft::band_generators(stack.orders[i], p), DriveStack::sign(i));
  if (total.dim == 0) {
    total.dim = p.n_fock;
    total.omega = p.omega;
  }
  return total;
}

HarmonicSet extract_harmonics(const DriveStack& stack, int l_max, const SystemParams& p) {
  return extract_harmonics(stack_generators(stack, p), l_max, p);
}

namespace {

inline CMat comm(const CMat& a, const CMat& b) { return a * b - b * a; }

} // namespace

CMat magnus_first_order(const HarmonicSet& h, const SystemParams& p) {
  // Direct Magnus computation of U(t0+T, t0) fixes the reference-time
  // phases at e^{-il Omega t0}; the micromotion-fidelity peak then sits at
  // t = t0, which pins this sign operationally.
  const int dim = h.dim();
  CMat sum = CMat::Zero(dim, dim);
  for (int l = 1; l <= h.l_max(); ++l) {
    const cplx t0_phase = std::exp(-I * static_cast<double>(l) * p.omega * p.t0);
    sum += comm(h.at(l), h.at(-l)) / (2.0 * l);
    sum += t0_phase / static_cast<double>(l) * comm(h.at(-l), h.at(0));
  }
  sum /= (p.lambda * p.omega);
  return sum + sum.adjoint().eval();
}

CMat magnus_second_order_standard(const HarmonicSet& h, const SystemParams& p) {
  const int dim = h.dim();
  const int lm = h.l_max();
  const CMat& v0 = h.at(0);
  CMat sum = CMat::Zero(dim, dim);

  auto phase = [&](int l) { return std::exp(-I * static_cast<double>(l) * p.omega * p.t0); };

  for (int l = -lm; l <= lm; ++l) {
    if (l == 0) continue;
    const double dl = l;
    sum += comm(h.at(-l), comm(v0, h.at(l))) / (2.0 * dl * dl);
    sum -= phase(l) / (dl * dl) * comm(v0, comm(v0, h.at(-l)));
    for (int lp = -lm; lp <= lm; ++lp) {
      if (lp == 0) continue;
      const double dlp = lp;
      if (lp != l && std::abs(lp - l) <= lm)
        sum += comm(h.at(-lp), comm(h.at(lp - l), h.at(l))) / (3.0 * dl * dlp);
      sum -= phase(l) / (3.0 * dl * dlp) * comm(h.at(lp), comm(h.at(-lp), h.at(-l)));
      sum += phase(l) / (3.0 * dl * dlp) * comm(h.at(-l), comm(h.at(lp), h.at(-lp)));
      if (lp != l && std::abs(lp - l) <= lm)
        sum -= phase(l) / (2.0 * dl * dlp) * comm(v0, comm(h.at(lp - l), h.at(-lp)));
      sum += phase(l + lp) / (2.0 * dl * dlp) * comm(v0, comm(h.at(-lp), h.at(-l)));
      sum -= phase(l + lp) / (2.0 * dl * dlp) * comm(h.at(-lp), comm(v0, h.at(-l)));
    }
  }
  return sum / (p.lambda * p.lambda * p.omega * p.omega);
}

CMat magnus_second_order(const HarmonicSet& h0, const HarmonicSet& h1, const SystemParams& p) {
  if (h0.l_max() != h1.l_max() || h0.dim() != h1.dim())
    throw std::invalid_argument("magnus_second_order: harmonic sets must share l_max and dim");
  CMat sum = magnus_second_order_standard(h0, p);
  const int lm = h0.l_max();
  CMat cross = CMat::Zero(h0.dim(), h0.dim());
  for (int l = -lm; l <= lm; ++l) {
    if (l == 0) continue;
    const cplx t0_phase = std::exp(-I * static_cast<double>(l) * p.omega * p.t0);
    cross += comm(h0.at(l), h1.at(-l)) / static_cast<double>(l);
    cross += t0_phase / static_cast<double>(l) * comm(h1.at(-l), h0.at(0));
  }
  return sum + cross / (p.lambda * p.omega);
}

NcftCoefficient bracket_transform(const NcftCoefficient& fa, const NcftCoefficient& fb,
                                  const SystemParams& p) {
  const auto* la = fa.lines();
  const auto* lb = fb.lines();
  if (la != nullptr && lb != nullptr) {
    ncft::LineBracketForm f;
    f.fa = *la;
    f.fb = *lb;
    f.lambda = p.lambda;
    return NcftCoefficient(std::move(f));
  }
  const auto* ca = std::get_if<ncft::FockBackedCoefficient>(&fa.form());
  const auto* cb = std::get_if<ncft::FockBackedCoefficient>(&fb.form());
  if (ca != nullptr && cb != nullptr) {
    ncft::FockBackedCoefficient f;
    f.coeffs = comm(ca->coeffs, cb->coeffs);
    f.lambda = ca->lambda;
    return NcftCoefficient(std::move(f));
  }
  throw std::invalid_argument(
      "bracket_transform: inputs must both be spectral lines or both Fock-backed");
}

DriveStack correction_loop(const NcftCoefficient& target, int order_max, const SystemParams& p) {
  if (order_max < 1 || order_max > 2)
    throw std::invalid_argument("correction_loop: order_max must be 1 or 2");
  DriveStack stack;
  stack.orders.push_back(target);

  const HarmonicSet h0 = extract_harmonics(target, p.l_max, p);
  const CMat h1_op = magnus_first_order(h0, p);
  stack.orders.push_back(NcftCoefficient(ncft::ncft_forward(h1_op, p)));

  if (order_max == 2) {
    // Harmonics of the order-1 potential carry the correction-drive minus sign.
    HarmonicSet h1 = extract_harmonics(stack.orders[1], p.l_max, p);
    h1 *= DriveStack::sign(1);
    const CMat h2_op = magnus_second_order(h0, h1, p);
    stack.orders.push_back(NcftCoefficient(ncft::ncft_forward(h2_op, p)));
  }
  return stack;
}

void write_stack_json(const DriveStack& stack, std::ostream& os) {
  json j = json::array();
  for (std::size_t i = 0; i < stack.orders.size(); ++i) {
    json jo;
    jo["order"] = i;
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, ncft::SpectralLineSet>) {
            jo["type"] = "lines";
            json lines = json::array();
            for (const auto& line : f.lines) {
              json h = json::object();
              for (const auto& [hh, c] : line.harmonics) h[std::to_string(hh)] = {c.real(), c.imag()};
              lines.push_back({{"k", line.k}, {"harmonics", h}});
            }
            jo["payload"] = lines;
          } else if constexpr (std::is_same_v<T, ncft::CatLatticeForm>) {
            jo["type"] = "cat_lattice";
            jo["payload"] = {{"q", f.q},
                             {"alpha0", {f.alpha0.real(), f.alpha0.imag()}},
                             {"gamma", f.gamma},
                             {"beta", f.beta},
                             {"lambda", f.lambda}};
          } else if constexpr (std::is_same_v<T, ncft::FockBackedCoefficient>) {
            jo["type"] = "fock";
            json rows = json::array();
            for (int r = 0; r < f.coeffs.rows(); ++r) {
              json row = json::array();
              for (int c = 0; c < f.coeffs.cols(); ++c)
                row.push_back({f.coeffs(r, c).real(), f.coeffs(r, c).imag()});
              rows.push_back(row);
            }
            jo["payload"] = {{"lambda", f.lambda}, {"coeffs", rows}};
          } else {
            throw std::invalid_argument("write_stack_json: analytic bracket forms do not serialize");
          }
        },
        stack.orders[i].form());
    j.push_back(jo);
  }
  os << j.dump(2) << "\n";
}

DriveStack read_stack_json(std::istream& is) {
  json j;
  is >> j;
  DriveStack stack;
  for (const auto& jo : j) {
    const std::string type = jo.at("type").get<std::string>();
    if (type == "lines") {
      ncft::SpectralLineSet s;
      for (const auto& jl : jo.at("payload")) {
        ncft::SpectralLine line;
        line.k = jl.at("k").get<double>();
        for (const auto& [key, val] : jl.at("harmonics").items())
          line.harmonics[std::stoi(key)] = cplx(val.at(0).get<double>(), val.at(1).get<double>());
        s.lines.push_back(line);
      }
      stack.orders.emplace_back(std::move(s));
    } else if (type == "cat_lattice") {
      ncft::CatLatticeForm f;
      const auto& pl = jo.at("payload");
      f.q = pl.at("q").get<int>();
      f.alpha0 = cplx(pl.at("alpha0").at(0).get<double>(), pl.at("alpha0").at(1).get<double>());
      f.gamma = pl.at("gamma").get<double>();
      f.beta = pl.at("beta").get<double>();
      f.lambda = pl.at("lambda").get<double>();
      stack.orders.emplace_back(std::move(f));
    } else if (type == "fock") {
      ncft::FockBackedCoefficient f;
      const auto& pl = jo.at("payload");
      f.lambda = pl.at("lambda").get<double>();
      const auto& rows = pl.at("coeffs");
      const int n = static_cast<int>(rows.size());
      f.coeffs.resize(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          f.coeffs(r, c) = cplx(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
      stack.orders.emplace_back(std::move(f));
    } else {
      throw std::runtime_error("read_stack_json: unknown coefficient type " + type);
    }
  }
  return stack;
}

} // namespace ffg::magnus
