#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gapkit/interval.hpp"

namespace gapkit {

/// Quadratic data of H at a Morse well: inverse metric G = (g^{ik}) frozen
/// at the well, half Hessian W_{ik} = (1/2) d^2V/dx_i dx_k, and the frozen
/// fiber endomorphism B-bar. The caller is responsible for the coordinate
/// normalization det(G) = 1 (checked with a warning flag only).
struct WellSpec {
  Eigen::MatrixXd metric;        // G, SPD n x n
  Eigen::MatrixXd hessian_half;  // W, SPD n x n
  Eigen::MatrixXcd fiber_endo;   // B-bar, Hermitian N x N

  int dim() const { return static_cast<int>(metric.rows()); }
  int fiber_dim() const { return static_cast<int>(fiber_endo.rows()); }
  bool metric_volume_normalized(double tol = 1e-9) const;
};

/// Oscillator frequencies omega_i = sqrt(eig(G W)) of -sum g^{ik} d_i d_k + x^T W x.
std::vector<double> well_frequencies(const WellSpec& w);

struct ModelLevel {
  double value = 0.0;
  long multiplicity = 0;
};

/// Exact spectrum of K = (+) K_j enumerated completely below the cutoff.
struct ModelSpectrum {
  std::vector<ModelLevel> levels;  // strictly increasing values
  double cutoff = 0.0;
  bool complete_below = false;

  double ground() const;
};

/// Eigenvalues closer than this relative tolerance merge into one level.
constexpr double kLevelMergeTol = 1e-9;

/// Levels { sum_i (2 n_i + 1) omega_i^{(j)} + beta : beta in spec(Bbar_j) }
/// merged over all wells, complete below the cutoff.
ModelSpectrum model_levels(const std::vector<WellSpec>& wells, double cutoff);

/// Maximal open intervals between consecutive levels below the cutoff.
std::vector<GapInterval> model_gaps(const ModelSpectrum& s);

/// rank E^0(lambda): total multiplicity of levels <= lambda.
long counting_function(const ModelSpectrum& s, double lambda);

struct MuInvarianceReport {
  bool pass = true;
  double max_deviation = 0.0;
  std::vector<double> mus;
  std::vector<std::vector<double>> eigenvalues;  // first m discretized eigenvalues per mu
};

/// Verifies spec(mu H^(2) + Bbar + mu^{-1} V^(2)) = spec(K(1)) on a 1D
/// finite-difference discretization (scalar well).
MuInvarianceReport mu_invariance_check(const WellSpec& w, const std::vector<double>& mus,
                                       int first_m = 5, double tol = 2e-3,
                                       double half_width = 10.0, int points = 2000);

/// First eigenvalues of the 1D discretized K(mu) = -mu g d^2/dx^2 + mu^{-1} w x^2 + b
/// on [-half_width, half_width]; exposed for the mu-invariance report and tests.
std::vector<double> oscillator_fd_eigenvalues_1d(double g, double w, double b, double mu,
                                                 double half_width, int points, int first_m);

}  // namespace gapkit
