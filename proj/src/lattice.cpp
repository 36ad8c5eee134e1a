#include "gapkit/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gapkit/chern.hpp"
#include "gapkit/conventions.hpp"
#include "gapkit/parallel.hpp"

namespace gapkit {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

double PotentialSpec::operator()(const std::vector<double>& x) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::cosine: {
      double v = 0.0;
      for (size_t axis = 0; axis < x.size() && axis < cosine_coeffs.size(); ++axis)
        for (size_t g = 0; g < cosine_coeffs[axis].size(); ++g)
          v += cosine_coeffs[axis][g] * std::cos(kTwoPi * static_cast<double>(g) * x[axis]);
      return v;
    }
    case Kind::gaussian_wells: {
      // depth * (1 - theta(x)/theta(0)) with wrapped Gaussians at lattice points.
      double acc = 1.0;
      for (double xi : x) {
        double s = 0.0, s0 = 0.0;
        double f = xi - std::floor(xi);
        for (int n = -4; n <= 4; ++n) {
          s += std::exp(-0.5 * (f - n) * (f - n) / (width * width));
          s0 += std::exp(-0.5 * n * n / (width * width));
        }
        acc *= s / s0;
      }
      return depth * (1.0 - acc);
    }
  }
  return 0.0;
}

int LatticeConfig::cells_x() const {
  if (supercell_x > 0) return supercell_x;
  if (dimension == 2 && !flux.is_zero()) return gauge == "landau_x" ? 1 : static_cast<int>(flux.q);
  return 1;
}

int LatticeConfig::cells_y() const {
  if (dimension == 1) return 1;
  if (supercell_y > 0) return supercell_y;
  if (!flux.is_zero()) return gauge == "landau_x" ? static_cast<int>(flux.q) : 1;
  return 1;
}

double LatticeConfig::field() const { return kFieldSign * kTwoPi * flux.value(); }

void LatticeConfig::validate() const {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("LatticeConfig: dimension must be 1 or 2");
  if (grid_per_cell < 16)
    throw std::invalid_argument("LatticeConfig: grid too coarse (need >= 16 points per cell)");
  if (kpoints < 1) throw std::invalid_argument("LatticeConfig: kpoints must be >= 1");
  if (mu <= 0.0) throw std::invalid_argument("LatticeConfig: mu must be > 0");
  if (flux.q <= 0) throw std::invalid_argument("LatticeConfig: flux denominator must be positive");
  if (dimension == 1 && !flux.is_zero())
    throw std::invalid_argument("LatticeConfig: flux requires dimension 2");
  if (gauge != "landau_y" && gauge != "landau_x")
    throw std::invalid_argument("LatticeConfig: unknown gauge '" + gauge + "'");
  if ((endo - endo.adjoint()).norm() > 1e-12)
    throw std::invalid_argument("LatticeConfig: endomorphism must be Hermitian");
  if (dimension == 2 && !flux.is_zero()) {
    std::int64_t cells = static_cast<std::int64_t>(cells_x()) * cells_y();
    if ((cells * flux.p) % flux.q != 0)
      throw std::invalid_argument(
          "LatticeConfig: flux denominator must divide the magnetic supercell");
  }
  // Potential sanity on the grid: V >= 0, declared wells are resolved minima.
  const int m = grid_per_cell;
  std::vector<double> x(static_cast<size_t>(dimension), 0.0);
  double vmax = 0.0;
  if (dimension == 1) {
    for (int i = 0; i < m; ++i) {
      x[0] = static_cast<double>(i) / m;
      double v = potential(x);
      vmax = std::max(vmax, v);
      if (v < -1e-12) throw std::invalid_argument("LatticeConfig: potential takes negative values");
    }
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        x[0] = static_cast<double>(i) / m;
        x[1] = static_cast<double>(j) / m;
        double v = potential(x);
        vmax = std::max(vmax, v);
        if (v < -1e-12)
          throw std::invalid_argument("LatticeConfig: potential takes negative values");
      }
  }
  for (const auto& w : wells) {
    if (static_cast<int>(w.size()) != dimension)
      throw std::invalid_argument("LatticeConfig: well dimension mismatch");
    double v0 = potential(w);
    if (std::abs(v0) > 1e-9 * std::max(1.0, vmax))
      throw std::invalid_argument("LatticeConfig: declared well does not sit at V = 0");
  }
}

GaugeData GaugeData::from_config(const LatticeConfig& c) {
  GaugeData g;
  g.dimension = c.dimension;
  g.flux = c.flux;
  g.field = c.field();
  return g;
}

double GaugeData::psi(const GroupElem& gamma, const std::vector<double>& x) const {
  if (dimension != 2 || gamma.size() != 2 || x.size() != 2) return 0.0;
  return 0.5 * field *
         (static_cast<double>(gamma[0]) * x[1] - static_cast<double>(gamma[1]) * x[0]);
}

Complex GaugeData::sigma(const GroupElem& g1, const GroupElem& g2) const {
  // sigma(g1,g2) = exp(-i psi_{g1}(g2 . x0)) with x0 = 0.
  std::vector<double> x = {static_cast<double>(g2.size() > 0 ? g2[0] : 0),
                           static_cast<double>(g2.size() > 1 ? g2[1] : 0)};
  return std::exp(Complex(0.0, -psi(g1, x)));
}

Multiplier GaugeData::multiplier() const {
  if (dimension == 1 || flux.is_zero()) return Multiplier::trivial(dimension);
  // -psi_gamma(gamma') = -(B0/2)(g1 g2' - g2 g1') = pi*theta_eff*(g1 g2' - g2 g1')
  // with theta_eff = -B0/(2 pi) = -kFieldSign * p/q.
  std::int64_t p_eff = static_cast<std::int64_t>(kFieldSign < 0 ? flux.p : -flux.p);
  return Multiplier::antisymmetric_2d(p_eff, flux.q);
}

namespace {

/// Gauge link phases as exact integer fractions of 2 pi / (q m^2): the
/// Landau phases are all multiples of the flux per plaquette, so reducing
/// the integer numerator keeps every angle small and bit-stable.
struct LinkPhases {
  // landau_y: y-links carry exp(-i B0 i h^2); x-wrap carries exp(+i B0 nx h^2 j).
  // landau_x: x-links carry exp(+i B0 j h^2); y-wrap carries exp(-i B0 ny h^2 i).
  std::int64_t sp = 0;  // kFieldSign * p
  std::int64_t den = 1; // q * m^2
  int nx = 1, ny = 1;
  bool landau_x = false;

  static Complex unit_phase(std::int64_t num, std::int64_t den, double extra) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(den) + extra;
    return std::exp(Complex(0.0, angle));
  }

  Complex ux(int, int j, bool wrap, double k1) const {
    std::int64_t num = landau_x ? sp * j : 0;
    if (wrap && !landau_x) num += sp * static_cast<std::int64_t>(nx) * j;
    return unit_phase(num, den, wrap ? k1 : 0.0);
  }
  Complex uy(int i, int, bool wrap, double k2) const {
    std::int64_t num = landau_x ? 0 : -sp * i;
    if (wrap && landau_x) num += -sp * static_cast<std::int64_t>(ny) * i;
    return unit_phase(num, den, wrap ? k2 : 0.0);
  }
};

DiscreteOperator assemble_impl(const LatticeConfig& c, const std::vector<double>& k, int cx,
                               int cy, bool periodic) {
  c.validate();
  const int m = c.grid_per_cell;
  const int d = c.dimension;
  const int N = c.fiber_n();
  const int nx = cx * m;
  const int ny = d == 2 ? cy * m : 1;
  const double h = 1.0 / m;
  const double t = c.mu / (h * h);
  const double k1 = k.empty() ? 0.0 : k[0];
  const double k2 = k.size() > 1 ? k[1] : 0.0;

  LinkPhases lp;
  lp.sp = d == 2 ? static_cast<std::int64_t>(kFieldSign) * c.flux.p : 0;
  lp.den = c.flux.q * static_cast<std::int64_t>(m) * m;
  lp.nx = nx;
  lp.ny = ny;
  lp.landau_x = c.gauge == "landau_x";

  DiscreteOperator op;
  op.nx = nx;
  op.ny = ny;
  op.fiber = N;
  op.spacing = h;

  const int nsites = nx * ny;
  op.site_x.resize(static_cast<size_t>(nsites));
  op.site_y.resize(static_cast<size_t>(nsites));
  auto site = [&](int i, int j) { return j * nx + i; };

  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(nsites) * static_cast<size_t>(N) * (2 * d + N + 1));
  std::vector<double> x(static_cast<size_t>(d), 0.0);

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int s = site(i, j);
      op.site_x[static_cast<size_t>(s)] = i * h;
      op.site_y[static_cast<size_t>(s)] = j * h;
      x[0] = i * h;
      if (d == 2) x[1] = j * h;
      double v = c.potential(x) / c.mu;
      double diag = 2.0 * d * t + v;
      for (int f = 0; f < N; ++f) {
        trip.emplace_back(s * N + f, s * N + f, Complex(diag, 0.0));
        for (int f2 = 0; f2 < N; ++f2)
          if (c.endo(f, f2) != Complex(0, 0))
            trip.emplace_back(s * N + f, s * N + f2, c.endo(f, f2));
      }

      // +x hop
      bool wrapx = (i == nx - 1);
      if (periodic || !wrapx) {
        int s2 = site(wrapx ? 0 : i + 1, j);
        Complex u = -t * lp.ux(i, j, wrapx, k1);
        for (int f = 0; f < N; ++f) {
          trip.emplace_back(s2 * N + f, s * N + f, u);
          trip.emplace_back(s * N + f, s2 * N + f, std::conj(u));
        }
      }
      // +y hop
      if (d == 2) {
        bool wrapy = (j == ny - 1);
        if (periodic || !wrapy) {
          int s2 = site(i, wrapy ? 0 : j + 1);
          Complex u = -t * lp.uy(i, j, wrapy, k2);
          for (int f = 0; f < N; ++f) {
            trip.emplace_back(s2 * N + f, s * N + f, u);
            trip.emplace_back(s * N + f, s2 * N + f, std::conj(u));
          }
        }
      }
    }
  }
  op.h.resize(nsites * N, nsites * N);
  op.h.setFromTriplets(trip.begin(), trip.end());
  op.h.makeCompressed();
  return op;
}

}  // namespace

DiscreteOperator assemble(const LatticeConfig& config, const std::vector<double>& k) {
  if (static_cast<int>(k.size()) != config.dimension)
    throw std::invalid_argument("assemble: Bloch momentum dimension mismatch");
  return assemble_impl(config, k, config.cells_x(), config.cells_y(), /*periodic=*/true);
}

DiscreteOperator assemble_open_sample(const LatticeConfig& config, int cells_x, int cells_y) {
  return assemble_impl(config, std::vector<double>(static_cast<size_t>(config.dimension), 0.0),
                       cells_x, cells_y, /*periodic=*/false);
}

double DiscreteOperator::hermiticity_defect() const {
  SparseHermitian d = SparseHermitian(h.adjoint()) - h;
  return d.norm();
}

double discrete_curl_defect(const LatticeConfig& config) {
  if (config.dimension != 2) return 0.0;
  const int m = config.grid_per_cell;
  const int nx = config.cells_x() * m;
  const int ny = config.cells_y() * m;
  const double h = 1.0 / m;
  LinkPhases lp{static_cast<std::int64_t>(kFieldSign) * config.flux.p,
                config.flux.q * static_cast<std::int64_t>(m) * m, nx, ny,
                config.gauge == "landau_x"};
  const double target = -config.field() * h * h;
  double defect = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      bool wx = (i == nx - 1), wy = (j == ny - 1);
      int i2 = wx ? 0 : i + 1;
      Complex loop = lp.ux(i, j, wx, 0.0) * lp.uy(i2, j, wy, 0.0) *
                     std::conj(lp.ux(i, wy ? 0 : j + 1, wx, 0.0)) * std::conj(lp.uy(i, j, wy, 0.0));
      double diff = std::arg(loop * std::exp(Complex(0.0, -target)));
      defect = std::max(defect, std::abs(diff));
    }
  return defect;
}

LatticeConfig translation_torus_config(const LatticeConfig& config) {
  LatticeConfig torus = config;
  if (config.dimension == 2) {
    int q = config.flux.is_zero() ? 1 : static_cast<int>(config.flux.q);
    torus.supercell_x = q;
    torus.supercell_y = q;
  } else {
    torus.supercell_x = 1;
  }
  return torus;
}

Eigen::SparseMatrix<Complex> magnetic_translation(const LatticeConfig& config,
                                                  const GroupElem& gamma) {
  LatticeConfig torus = translation_torus_config(config);
  const int m = torus.grid_per_cell;
  const int d = torus.dimension;
  const int N = torus.fiber_n();
  const int nx = torus.cells_x() * m;
  const int ny = d == 2 ? torus.cells_y() * m : 1;
  if (static_cast<int>(gamma.size()) != d)
    throw std::invalid_argument("magnetic_translation: gamma rank mismatch");
  for (auto g : gamma)
    if (std::llabs(g) * m > (d == 2 ? std::min(nx, ny) : nx))
      throw std::invalid_argument("magnetic_translation: gamma incompatible with the supercell");

  const int nsites = nx * ny;
  auto site = [&](int i, int j) { return j * nx + i; };
  auto build_t1 = [&](bool adjoint) {
    // (T1 psi)(i,j) = e^{i chi1(i,j)} psi(i-m, j),
    // chi1(i,j) = -B0 m h^2 j + B0 nx h^2 j [i < m].
    Eigen::SparseMatrix<Complex> t(nsites * N, nsites * N);
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<size_t>(nsites) * N);
    std::int64_t sp = static_cast<std::int64_t>(kFieldSign) * torus.flux.p;
    std::int64_t den = torus.flux.q * static_cast<std::int64_t>(m) * m;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::int64_t num = -sp * static_cast<std::int64_t>(m) * j +
                           (i < m ? sp * static_cast<std::int64_t>(nx) * j : 0);
        int src = site(((i - m) % nx + nx) % nx, j);
        Complex a = LinkPhases::unit_phase(num, den, 0.0);
        for (int f = 0; f < N; ++f) {
          if (!adjoint)
            trip.emplace_back(site(i, j) * N + f, src * N + f, a);
          else
            trip.emplace_back(src * N + f, site(i, j) * N + f, std::conj(a));
        }
      }
    t.setFromTriplets(trip.begin(), trip.end());
    return t;
  };
  auto build_t2 = [&](bool adjoint) {
    Eigen::SparseMatrix<Complex> t(nsites * N, nsites * N);
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<size_t>(nsites) * N);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        int src = site(i, ((j - m) % ny + ny) % ny);
        for (int f = 0; f < N; ++f) {
          if (!adjoint)
            trip.emplace_back(site(i, j) * N + f, src * N + f, Complex(1.0, 0.0));
          else
            trip.emplace_back(src * N + f, site(i, j) * N + f, Complex(1.0, 0.0));
        }
      }
    t.setFromTriplets(trip.begin(), trip.end());
    return t;
  };

  Eigen::SparseMatrix<Complex> result(nsites * N, nsites * N);
  result.setIdentity();
  const std::int64_t a = gamma[0];
  const std::int64_t b = d == 2 ? gamma[1] : 0;
  // T_gamma = zeta(gamma) T1^{a} T2^{b}: apply T2 first, then T1.
  if (d == 2)
    for (std::int64_t r = 0; r < std::llabs(b); ++r)
      result = (build_t2(b < 0) * result).eval();
  for (std::int64_t r = 0; r < std::llabs(a); ++r)
    result = (build_t1(a < 0) * result).eval();
  // Weyl-type scalar correction: with it the family satisfies
  // T_g T_g' = sigma(g,g') T_{g+g'} for the canonical antisymmetric
  // multiplier of GaugeData::multiplier().
  if (d == 2) {
    std::int64_t sp = -static_cast<std::int64_t>(kFieldSign) * torus.flux.p;
    Complex zeta = LinkPhases::unit_phase(-sp * a * b, 2 * torus.flux.q, 0.0);
    result = (zeta * result).eval();
  }
  return result;
}

namespace {

struct FiberSolve {
  std::vector<double> eigenvalues;
  Eigen::MatrixXcd vectors;  // only when requested
};

FiberSolve solve_fiber(const LatticeConfig& c, const std::vector<double>& k, double upper,
                       bool want_vectors) {
  DiscreteOperator op = assemble(c, k);
  FiberSolve out;
  if (op.dim() <= 400) {
    EigPairs all = dense_hermitian_eig(Eigen::MatrixXcd(op.h), want_vectors);
    for (Eigen::Index i = 0; i < all.values.size(); ++i)
      if (all.values(i) <= upper) out.eigenvalues.push_back(all.values(i));
    if (want_vectors)
      out.vectors = all.vectors.leftCols(static_cast<Eigen::Index>(out.eigenvalues.size()));
    return out;
  }
  LanczosOptions opts;
  opts.seed = c.seed;
  opts.max_subspace = std::min<Eigen::Index>(op.dim(), 900);
  EigPairs pairs = sparse_eigs_below(op.h, upper, gershgorin_lower_bound(op.h), opts);
  out.eigenvalues.assign(pairs.values.data(), pairs.values.data() + pairs.values.size());
  if (want_vectors) out.vectors = pairs.vectors;
  return out;
}

std::vector<std::vector<double>> make_kgrid(const LatticeConfig& c) {
  std::vector<std::vector<double>> ks;
  const int K = c.kpoints;
  if (c.dimension == 1) {
    for (int a = 0; a < K; ++a) ks.push_back({kTwoPi * a / K});
  } else {
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) ks.push_back({kTwoPi * a / K, kTwoPi * b / K});
  }
  return ks;
}

}  // namespace

double BandStructure::ids(double lambda) const {
  if (lambda > cutoff + 1e-12)
    throw std::invalid_argument("BandStructure::ids: lambda above the window cutoff");
  double count = 0.0;
  for (const auto& ev : eigenvalues)
    for (double e : ev) {
      if (e <= lambda) count += 1.0;
    }
  return count / (static_cast<double>(eigenvalues.size()) * cells);
}

bool BandStructure::in_gap(double lambda) const {
  for (const auto& g : gaps)
    if (g.contains(lambda)) return true;
  return false;
}

BandStructure bloch_spectrum(const LatticeConfig& config) {
  config.validate();
  BandStructure bs;
  bs.kpoints = make_kgrid(config);
  bs.cells = static_cast<double>(config.cells_x()) * config.cells_y();
  bs.cutoff = config.cutoff_energy;
  const double window = config.cutoff_energy * 1.02 + 0.5;

  bs.eigenvalues.resize(bs.kpoints.size());
  parallel_for(static_cast<int>(bs.kpoints.size()), config.threads, [&](int i) {
    bs.eigenvalues[static_cast<size_t>(i)] =
        solve_fiber(config, bs.kpoints[static_cast<size_t>(i)], window, false).eigenvalues;
  });

  size_t nb = bs.eigenvalues.empty() ? 0 : bs.eigenvalues.front().size();
  for (const auto& ev : bs.eigenvalues) nb = std::min(nb, ev.size());
  bs.bands = static_cast<int>(nb);
  for (size_t b = 0; b < nb; ++b) {
    double lo = bs.eigenvalues[0][b], hi = bs.eigenvalues[0][b];
    for (const auto& ev : bs.eigenvalues) {
      lo = std::min(lo, ev[b]);
      hi = std::max(hi, ev[b]);
    }
    bs.band_intervals.push_back(hi > lo ? GapInterval(lo, hi)
                                        : GapInterval(lo, lo + 1e-15 * std::max(1.0, std::abs(lo))));
  }
  // Gap detection by interval subtraction of the band union.
  double covered = bs.band_intervals.empty() ? 0.0 : bs.band_intervals.front().b;
  for (size_t b = 0; b + 1 < bs.band_intervals.size(); ++b) {
    covered = std::max(covered, bs.band_intervals[b].b);
    double next = bs.band_intervals[b + 1].a;
    if (next > covered + 1e-12 && covered < config.cutoff_energy)
      bs.gaps.emplace_back(covered, next);
  }
  return bs;
}

SpectralProjection spectral_projection(const LatticeConfig& config, double lambda) {
  SpectralProjection sp;
  sp.lambda = lambda;
  sp.kpoints = make_kgrid(config);
  sp.frames.resize(sp.kpoints.size());
  std::vector<int> ranks(sp.kpoints.size(), 0);
  std::vector<double> margins(sp.kpoints.size(), 0.0);
  parallel_for(static_cast<int>(sp.kpoints.size()), config.threads, [&](int i) {
    FiberSolve fs =
        solve_fiber(config, sp.kpoints[static_cast<size_t>(i)], lambda + 1.0, true);
    int r = 0;
    double margin = 1e300;
    for (double e : fs.eigenvalues) {
      if (e <= lambda) ++r;
      margin = std::min(margin, std::abs(e - lambda));
    }
    ranks[static_cast<size_t>(i)] = r;
    margins[static_cast<size_t>(i)] = margin;
    sp.frames[static_cast<size_t>(i)] = fs.vectors.leftCols(r);
  });
  for (size_t i = 0; i < ranks.size(); ++i) {
    if (margins[i] < 1e-8)
      throw std::runtime_error("spectral_projection: lambda inside a band (fiber " +
                               std::to_string(i) + ")");
    if (ranks[i] != ranks[0])
      throw std::runtime_error("spectral_projection: rank not constant across fibers");
  }
  sp.rank_per_fiber = ranks.empty() ? 0 : ranks[0];
  for (const auto& f : sp.frames)
    sp.idempotency_defect = std::max(
        sp.idempotency_defect,
        (f.adjoint() * f - Eigen::MatrixXcd::Identity(f.cols(), f.cols())).norm());
  return sp;
}

double riesz_projection_crosscheck(const LatticeConfig& config, double lambda, int nodes) {
  std::vector<double> k0(static_cast<size_t>(config.dimension), 0.0);
  DiscreteOperator op = assemble(config, k0);
  const Eigen::Index n = op.dim();
  if (n > 2000)
    throw std::invalid_argument("riesz_projection_crosscheck: fiber too large for the dense check");
  Eigen::MatrixXcd hd(op.h);
  EigPairs all = dense_hermitian_eig(hd, true);
  Eigen::Index r = 0;
  while (r < n && all.values(r) <= lambda) ++r;
  Eigen::MatrixXcd p_eig = all.vectors.leftCols(r) * all.vectors.leftCols(r).adjoint();

  const double lo = all.values(0) - 0.5;
  Complex center(0.5 * (lo + lambda), 0.0);
  const double radius = 0.5 * (lambda - lo);
  Eigen::MatrixXcd p_contour = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  for (int qn = 0; qn < nodes; ++qn) {
    double phi = kTwoPi * (qn + 0.5) / nodes;
    Complex zeta = std::exp(Complex(0.0, phi));
    Complex z = center + radius * zeta;
    // (1/2pi i) \oint (z - H)^{-1} dz, trapezoid in the angle.
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(z * eye - hd);
    p_contour += (radius * zeta / static_cast<double>(nodes)) * lu.solve(eye);
  }
  return (p_contour - p_eig).norm();
}

HallResult hall_conductance(const LatticeConfig& config, double lambda, int sample_cells,
                            int core_cells) {
  if (config.dimension != 2)
    throw std::invalid_argument("hall_conductance: 2D configurations only");
  LatticeConfig c = config;
  c.kpoints = std::max(24, config.kpoints);

  HallResult out;
  out.lambda = lambda;
  out.sample_cells = sample_cells;

  // Method (a): plaquette link variables over the magnetic Brillouin zone.
  SpectralProjection sp = spectral_projection(c, lambda);
  out.rank_per_fiber = sp.rank_per_fiber;
  if (sp.rank_per_fiber == 0)
    throw std::invalid_argument("hall_conductance: empty projection at lambda");
  const int K = c.kpoints;
  out.chern_curvature =
      kFhsOrientation *
      fhs_chern([&](int a, int b) { return sp.frames[static_cast<size_t>(a * K + b)]; }, K, K);

  // Method (b): real-space Kubo commutator trace on an open sample with
  // position-difference weights.
  DiscreteOperator op = assemble_open_sample(c, sample_cells, sample_cells);
  LanczosOptions opts;
  opts.seed = c.seed;
  opts.max_subspace = 1400;
  EigPairs low = sparse_eigs_below(op.h, lambda, gershgorin_lower_bound(op.h), opts);
  const Eigen::MatrixXcd& psi = low.vectors;  // n x nb, P = psi psi^dagger

  const Eigen::Index n = op.dim();
  Eigen::VectorXd xs(n), ys(n);
  for (Eigen::Index dof = 0; dof < n; ++dof) {
    Eigen::Index s = dof / op.fiber;
    xs(dof) = op.site_x[static_cast<size_t>(s)];
    ys(dof) = op.site_y[static_cast<size_t>(s)];
  }
  const double lo_edge = 0.5 * (sample_cells - core_cells);
  const double hi_edge = lo_edge + core_cells;
  std::vector<Eigen::Index> core;
  for (Eigen::Index dof = 0; dof < n; ++dof)
    if (xs(dof) >= lo_edge && xs(dof) < hi_edge && ys(dof) >= lo_edge && ys(dof) < hi_edge)
      core.push_back(dof);

  auto apply_p = [&](const Eigen::MatrixXcd& v) {
    return Eigen::MatrixXcd(psi * (psi.adjoint() * v));
  };
  Eigen::MatrixXcd e_core = Eigen::MatrixXcd::Zero(n, static_cast<Eigen::Index>(core.size()));
  for (size_t ci = 0; ci < core.size(); ++ci) e_core(core[ci], static_cast<Eigen::Index>(ci)) = 1.0;
  Eigen::MatrixXcd u = apply_p(e_core);
  Eigen::MatrixXcd w = u, v = u;
  for (size_t ci = 0; ci < core.size(); ++ci) {
    w.col(static_cast<Eigen::Index>(ci)) =
        (ys.array() - ys(core[ci])).matrix().asDiagonal() * u.col(static_cast<Eigen::Index>(ci));
    v.col(static_cast<Eigen::Index>(ci)) =
        (xs.array() - xs(core[ci])).matrix().asDiagonal() * u.col(static_cast<Eigen::Index>(ci));
  }
  Eigen::MatrixXcd pw = apply_p(w), pv = apply_p(v);
  Complex trace(0, 0);
  for (size_t ci = 0; ci < core.size(); ++ci) {
    auto cidx = static_cast<Eigen::Index>(ci);
    Eigen::VectorXcd xu = xs.asDiagonal() * u.col(cidx);
    Eigen::VectorXcd yu = ys.asDiagonal() * u.col(cidx);
    Complex t_ab = xu.dot(pw.col(cidx)) - u.col(cidx).dot(xs.asDiagonal() * w.col(cidx));
    Complex t_ba = yu.dot(pv.col(cidx)) - u.col(cidx).dot(ys.asDiagonal() * v.col(cidx));
    trace += t_ab - t_ba;
  }
  out.chern_kubo =
      kMarkerSign * kTwoPi * trace.imag() / (static_cast<double>(core_cells) * core_cells);
  out.methods_agree = std::abs(out.chern_curvature - out.chern_kubo) < 0.01;
  return out;
}

std::vector<SweepRow> gap_emergence_sweep(const LatticeConfig& base, const std::vector<double>& mus,
                                          const std::vector<WellSpec>& wells) {
  std::vector<SweepRow> rows;
  ModelSpectrum model = model_levels(wells, base.cutoff_energy);
  std::vector<GapInterval> mgaps = model_gaps(model);

  for (double mu : mus) {
    LatticeConfig c = base;
    c.mu = mu;
    BandStructure bs = bloch_spectrum(c);

    SweepRow row;
    row.mu = mu;
    row.detected_gaps = bs.gaps;
    row.model_gaps = mgaps;
    for (const auto& l : model.levels) row.model_level_values.push_back(l.value);
    for (const auto& g : mgaps) {
      double best = 1e300;
      double h = 1e300;
      for (const auto& dg : bs.gaps) {
        double dist = std::abs(dg.midpoint() - g.midpoint());
        if (dist < best) {
          best = dist;
          h = std::max(std::abs(dg.a - g.a), std::abs(dg.b - g.b));
        }
      }
      row.hausdorff.push_back(h);
      double mid = g.midpoint();
      row.ids_at_gap_mid.push_back(mid <= bs.cutoff ? bs.ids(mid) : -1.0);
      row.model_count_at_mid.push_back(counting_function(model, std::min(mid, model.cutoff)));
    }
    for (const auto& band : bs.band_intervals) row.band_centers.push_back(band.midpoint());

    // Localization diagnostic ||(1-J) P_low|| on the k = 0 fiber.
    std::vector<double> k0(static_cast<size_t>(c.dimension), 0.0);
    DiscreteOperator op = assemble(c, k0);
    double lambda_low = mgaps.empty() ? model.ground() + 1.0 : mgaps.front().midpoint();
    LanczosOptions opts;
    opts.seed = c.seed;
    EigPairs low = sparse_eigs_below(op.h, lambda_low, gershgorin_lower_bound(op.h), opts);
    if (low.values.size() > 0) {
      Eigen::VectorXd outside = Eigen::VectorXd::Ones(op.dim());
      const double r_loc = 0.25;
      for (Eigen::Index dof = 0; dof < op.dim(); ++dof) {
        Eigen::Index s = dof / op.fiber;
        for (const auto& wpos : c.wells) {
          double dx = std::remainder(op.site_x[static_cast<size_t>(s)] - wpos[0], 1.0);
          double dy = c.dimension == 2
                          ? std::remainder(op.site_y[static_cast<size_t>(s)] - wpos[1], 1.0)
                          : 0.0;
          if (std::sqrt(dx * dx + dy * dy) <= r_loc) outside(dof) = 0.0;
        }
      }
      Eigen::MatrixXcd cut = outside.asDiagonal() * low.vectors;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cut);
      row.localization_norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

WellSpec well_from_potential(const LatticeConfig& config, const std::vector<double>& well) {
  const int d = config.dimension;
  const double h = 1e-4;
  WellSpec w;
  w.metric = Eigen::MatrixXd::Identity(d, d);
  w.hessian_half.resize(d, d);
  auto v = [&](std::vector<double> x) { return config.potential(x); };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<double> x = well;
      double second;
      if (i == j) {
        std::vector<double> xp = well, xm = well;
        xp[static_cast<size_t>(i)] += h;
        xm[static_cast<size_t>(i)] -= h;
        second = (v(xp) - 2.0 * v(well) + v(xm)) / (h * h);
      } else {
        std::vector<double> pp = well, pm = well, mp = well, mm = well;
        pp[static_cast<size_t>(i)] += h;
        pp[static_cast<size_t>(j)] += h;
        pm[static_cast<size_t>(i)] += h;
        pm[static_cast<size_t>(j)] -= h;
        mp[static_cast<size_t>(i)] -= h;
        mp[static_cast<size_t>(j)] += h;
        mm[static_cast<size_t>(i)] -= h;
        mm[static_cast<size_t>(j)] -= h;
        second = (v(pp) - v(pm) - v(mp) + v(mm)) / (4.0 * h * h);
      }
      w.hessian_half(i, j) = 0.5 * second;
    }
  w.hessian_half = 0.5 * (w.hessian_half + w.hessian_half.transpose()).eval();
  w.fiber_endo = config.endo;
  return w;
}

}  // namespace gapkit
