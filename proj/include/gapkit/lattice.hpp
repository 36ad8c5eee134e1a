#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gapkit/eigs.hpp"
#include "gapkit/interval.hpp"
#include "gapkit/model.hpp"
#include "gapkit/multiplier.hpp"

namespace gapkit {

struct FluxRational {
  std::int64_t p = 0;
  std::int64_t q = 1;

  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  bool is_zero() const { return p == 0; }
};

/// Periodic potential on the unit cell, V >= 0 with zeros at the wells.
struct PotentialSpec {
  enum class Kind { zero, cosine, gaussian_wells };
  Kind kind = Kind::zero;
  // cosine: additive per-axis series sum_g coeffs[axis][g] cos(2 pi g x_axis)
  std::vector<std::vector<double>> cosine_coeffs;
  // gaussian_wells: depth * (1 - theta(x)/theta(0)) with wrapped Gaussians
  double depth = 1.0;
  double width = 0.15;

  double operator()(const std::vector<double>& x) const;
};

struct LatticeConfig {
  int dimension = 1;
  int grid_per_cell = 32;  // m, >= 16
  int kpoints = 24;        // per dimension
  double mu = 1.0;
  FluxRational flux;  // 2D only
  PotentialSpec potential;
  Eigen::MatrixXcd endo = Eigen::MatrixXcd::Zero(1, 1);  // constant Hermitian N x N
  double cutoff_energy = 20.0;
  std::vector<std::vector<double>> wells;  // declared minima, cell coordinates
  int supercell_x = 0;  // 0 derives the magnetic cell from the flux (q x 1)
  int supercell_y = 0;
  std::string gauge = "landau_y";  // or "landau_x"
  unsigned seed = 20240901;
  int threads = 2;

  void validate() const;
  int fiber_n() const { return static_cast<int>(endo.rows()); }
  int cells_x() const;
  int cells_y() const;
  double field() const;  // signed B0
};

/// Magnetic gauge data: vector potential rule, the phase functions
/// psi_gamma in the symmetrized convention, and the induced multiplier
/// (which matches Multiplier::antisymmetric_2d for the same flux).
struct GaugeData {
  int dimension = 2;
  FluxRational flux;
  double field = 0.0;  // signed B0

  static GaugeData from_config(const LatticeConfig& c);

  /// psi_gamma(x) = (B0/2)(gamma_1 x_2 - gamma_2 x_1); psi_e = 0.
  double psi(const GroupElem& gamma, const std::vector<double>& x) const;
  Complex sigma(const GroupElem& g1, const GroupElem& g2) const;
  Multiplier multiplier() const;
};

struct DiscreteOperator {
  SparseHermitian h;
  int nx = 1, ny = 1;  // grid sites per direction
  int fiber = 1;
  double spacing = 1.0;          // h, in cell units
  std::vector<double> site_x;    // cell coordinates per site (not per dof)
  std::vector<double> site_y;

  Eigen::Index dim() const { return h.rows(); }
  double hermiticity_defect() const;
};

/// Finite-difference Peierls assembly of H(mu) = mu grad*grad + B + mu^{-1} V
/// on the magnetic supercell with Bloch phases k (size = dimension, in
/// [0,2pi) across the supercell). Periodic-gauge convention: H(k) is exactly
/// 2pi-periodic in each component.
DiscreteOperator assemble(const LatticeConfig& config, const std::vector<double>& k);

/// Open-boundary sample of cells_x x cells_y unit cells (no Bloch data),
/// used by the real-space Kubo method.
DiscreteOperator assemble_open_sample(const LatticeConfig& config, int cells_x, int cells_y);

/// Discrete curl check: largest deviation of a plaquette Wilson phase from
/// the declared uniform field flux.
double discrete_curl_defect(const LatticeConfig& config);

/// Magnetic translation by one lattice vector gamma on the q x q supercell
/// torus (k = 0). Unitary; satisfies T_g1 T_g2 = sigma(g1,g2) T_{g1+g2} with
/// the gauge multiplier above and commutes with the assembled H.
Eigen::SparseMatrix<Complex> magnetic_translation(const LatticeConfig& config,
                                                  const GroupElem& gamma);

/// The supercell used by magnetic_translation (q x q cells in 2D).
LatticeConfig translation_torus_config(const LatticeConfig& config);

struct BandStructure {
  std::vector<std::vector<double>> kpoints;       // flattened k-grid
  std::vector<std::vector<double>> eigenvalues;   // per k, ascending, window <= cutoff margin
  std::vector<GapInterval> band_intervals;        // [min_k, max_k] per band
  std::vector<GapInterval> gaps;                  // inside (ground, cutoff)
  double cells = 1.0;                             // unit cells per supercell
  double cutoff = 0.0;
  int bands = 0;

  /// Integrated density of states in states per unit cell.
  double ids(double lambda) const;
  bool in_gap(double lambda) const;
};

BandStructure bloch_spectrum(const LatticeConfig& config);

struct SpectralProjection {
  double lambda = 0.0;
  int rank_per_fiber = 0;
  std::vector<std::vector<double>> kpoints;
  std::vector<Eigen::MatrixXcd> frames;  // per k, orthonormal columns spanning ran E(lambda)
  double idempotency_defect = 0.0;
};

/// Fiberwise spectral projection at lambda in a gap; eigendecomposition
/// thresholding with constant-rank verification.
SpectralProjection spectral_projection(const LatticeConfig& config, double lambda);

/// Riesz-contour cross-check on one fiber (k = 0): Frobenius distance
/// between the contour projector and the eigendecomposition projector.
double riesz_projection_crosscheck(const LatticeConfig& config, double lambda, int nodes = 128);

struct HallResult {
  double lambda = 0.0;
  double chern_curvature = 0.0;  // method (a): plaquette link variables in k
  double chern_kubo = 0.0;       // method (b): real-space commutator trace
  bool methods_agree = false;
  int sample_cells = 0;  // declared truncation radius of method (b)
  int rank_per_fiber = 0;
};

/// Hall conductance of the spectral projection at lambda (in a gap), by the
/// two independent methods. Disagreement beyond 0.01 is flagged, never
/// averaged.
HallResult hall_conductance(const LatticeConfig& config, double lambda, int sample_cells = 8,
                            int core_cells = 2);

struct SweepRow {
  double mu = 0.0;
  std::vector<GapInterval> detected_gaps;
  std::vector<GapInterval> model_gaps;
  std::vector<double> hausdorff;           // per model gap, inf if undetected
  std::vector<double> ids_at_gap_mid;      // per model gap midpoint
  std::vector<long> model_count_at_mid;    // counting function there
  std::vector<double> band_centers;
  std::vector<double> model_level_values;
  double localization_norm = 0.0;  // ||(1-J) P_low|| on the k=0 fiber
};

/// mu-sweep verifier: detected gaps vs model gaps, IDS = counting function
/// at gap midpoints, band centers vs model levels, localization diagnostic.
std::vector<SweepRow> gap_emergence_sweep(const LatticeConfig& base, const std::vector<double>& mus,
                                          const std::vector<WellSpec>& wells);

/// Quadratic well data (G = I, W = half Hessian by finite differences,
/// B-bar = config endo) read off the configured potential at a declared well.
WellSpec well_from_potential(const LatticeConfig& config, const std::vector<double>& well);

}  // namespace gapkit
