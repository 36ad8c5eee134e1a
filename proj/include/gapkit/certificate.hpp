#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gapkit/interval.hpp"

namespace gapkit {

/// The eleven scalars of the abstract equivalence theorem's hypotheses.
struct CertificateParams {
  double lambda01 = 0.0;  // lower form bounds, <= 0
  double lambda02 = 0.0;
  double alpha1 = 1.0;  // exterior-region lower bounds, > 0
  double alpha2 = 1.0;
  double beta1 = 1.0;  // form comparison factors, >= 1
  double beta2 = 1.0;
  double gamma1 = 0.0;  // double-commutator bounds, >= 0
  double gamma2 = 0.0;
  double eps1 = 0.0;  // form comparison offsets, > 0 (exact 0 in flat mode)
  double eps2 = 0.0;
  double rho = 1.0;  // norm distortion, > 1 (exact 1 in flat mode)
  bool flat = true;

  void validate() const;
};

/// a2 = rho [ beta1 ( a1 + gamma1 + (a1+gamma1-lambda01)^2 / (alpha1-a1-gamma1) ) + eps1 ].
/// Requires alpha1 > a1 + gamma1.
double a2_of(const CertificateParams& p, double a1);

/// b2 = [ beta2^{-1}(b1/rho - eps2)(alpha2-gamma2) - alpha2 gamma2 + 2 lambda02 gamma2
///        - lambda02^2 ] / [ alpha2 - 2 lambda02 + beta2^{-1}(b1/rho - eps2) ].
/// Requires b1/rho > eps2 and a positive denominator.
double b2_of(const CertificateParams& p, double b1);

/// Inverse of b2_of: the a2-shaped formula with the swapped parameter set,
/// b1 = rho [ beta2 ( b2 + gamma2 + (b2+gamma2-lambda02)^2/(alpha2-b2-gamma2) ) + eps2 ].
double b1_of(const CertificateParams& p, double b2);

struct CertifyResult {
  std::optional<GapInterval> interval;
  std::string reason;  // which hypothesis failed, when empty() interval absent

  bool ok() const { return interval.has_value(); }
};

/// Certificate: a gap (a1,b1) of the model side maps to the interval
/// (a2,b2), spectrum-free for the operator side, iff all hypotheses hold.
/// Failure is a value carrying the violated hypothesis.
CertifyResult certify_gap(const CertificateParams& p, const GapInterval& g1);

/// Localization lower factor (alpha-lambda-gamma)/(alpha-lambda0), in (0,1].
double localization_coefficient(double alpha, double lambda, double gamma, double lambda0);

/// Companion upper factor (lambda+gamma-lambda0)/(alpha-lambda0) for ||J' E u||^2.
double localization_upper_factor(double alpha, double lambda, double gamma, double lambda0);

/// Energy bound lambda+gamma-lambda0 (lambda+gamma-lambda0)/(alpha-lambda0)
/// for (A J E u, J E u).
double localization_energy_bound(double alpha, double lambda, double gamma, double lambda0);

/// Smooth cutoff pair phi, phi' with phi = 1 on [0,1], phi = 0 on [2,inf),
/// phi^2 + phi'^2 = 1 exactly: phi = cos(theta), phi' = sin(theta) with
/// theta a mollified step [1,2] -> [0,pi/2]. Spatial scale is
/// radius_multiplier * mu^kappa.
class CutoffProfile {
 public:
  explicit CutoffProfile(double radius_multiplier = 1.0, int samples = 10000);

  double phi(double r) const;
  double companion(double r) const;  // phi' = (1 - phi^2)^{1/2}
  double dphi(double r) const;
  double dcompanion(double r) const;

  double radius_multiplier() const { return radius_multiplier_; }
  double sup_grad_phi() const { return sup_grad_phi_; }
  double sup_grad_companion() const { return sup_grad_companion_; }

  /// Pointwise defect of phi^2 + phi'^2 = 1 over the sample grid.
  double pythagoras_defect() const;
  /// Largest jump of the sampled derivatives at the gluing points r=1, r=2.
  double gluing_defect() const;

 private:
  double radius_multiplier_;
  int samples_;
  double sup_grad_phi_;
  double sup_grad_companion_;
};

/// Problem data for the concrete parameter estimators.
struct EstimatorProblem {
  double metric_sup = 1.0;  // sup of the frozen principal symbol coefficient
  double c0 = 1.0;          // Morse constant: V >= c0 dist^2 off the wells
  double lambda01 = 0.0;    // (bottom of spec K)_-
  double lambda02 = 0.0;    // (inf spec B)_-
  bool flat = true;
  double C_rho = 1.0;  // explicit constants for the O(mu^kappa), O(mu^{3kappa-1}) terms
  double C_beta = 1.0;
  double C_eps = 1.0;
};

/// gamma_l = mu^{1-2kappa} metric_sup max(sup|dphi|, sup|dphi'|)^2 / R^2,
/// alpha_l = c0 R^2 mu^{2kappa-1}; flat mode sets rho = 1, beta = 1, eps = 0
/// exactly, general mode uses the explicit constants. kappa in (0,1/2) for
/// flat mode, (1/3,1/2) otherwise.
CertificateParams estimate_parameters(double mu, double kappa, const CutoffProfile& cutoff,
                                      const EstimatorProblem& problem);

/// s(kappa) = min(3 kappa - 1, 1 - 2 kappa).
double convergence_exponent(double kappa);

/// Optimizer of s: (kappa*, s*) = (2/5, 1/5).
std::pair<double, double> optimal_kappa();

/// Frobenius defect of A = JAJ + J'A J' + (1/2)[J,[J,A]] + (1/2)[J',[J',A]].
/// Requires J^2 + J'^2 = I to 1e-12.
double ims_decomposition_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& j,
                               const Eigen::MatrixXcd& jp);

struct MvEquivalenceResult {
  std::optional<Eigen::MatrixXcd> partial_isometry;
  std::string reason;

  bool ok() const { return partial_isometry.has_value(); }
};

/// Finite-dimensional polar-decomposition equivalence: for projections P, Q
/// and T = Q T P restricting to a bijection range(P) -> range(Q), returns the
/// partial isometry U with U*U = P and U U* = Q.
MvEquivalenceResult mv_equivalence_finite(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q,
                                          const Eigen::MatrixXcd& t, double tol = 1e-10);

}  // namespace gapkit
