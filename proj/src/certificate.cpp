#include "gapkit/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace gapkit {

void CertificateParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("CertificateParams: " + what);
  };
  if (lambda01 > 0.0 || lambda02 > 0.0) fail("lambda0 bounds must be <= 0");
  if (alpha1 <= 0.0 || alpha2 <= 0.0) fail("alpha must be > 0");
  if (beta1 < 1.0 || beta2 < 1.0) fail("beta must be >= 1");
  if (gamma1 < 0.0 || gamma2 < 0.0) fail("gamma must be >= 0");
  if (flat) {
    if (eps1 != 0.0 || eps2 != 0.0) fail("flat mode requires eps = 0 exactly");
    if (rho != 1.0) fail("flat mode requires rho = 1 exactly");
  } else {
    if (eps1 <= 0.0 || eps2 <= 0.0) fail("eps must be > 0");
    if (rho <= 1.0) fail("rho must be > 1");
  }
}

double a2_of(const CertificateParams& p, double a1) {
  double s = a1 + p.gamma1;
  if (!(p.alpha1 > s))
    throw std::invalid_argument("a2_of: hypothesis alpha1 > a1 + gamma1 violated");
  double d = s - p.lambda01;
  return p.rho * (p.beta1 * (s + d * d / (p.alpha1 - s)) + p.eps1);
}

double b2_of(const CertificateParams& p, double b1) {
  double t = (b1 / p.rho - p.eps2) / p.beta2;
  if (!(b1 / p.rho > p.eps2)) throw std::invalid_argument("b2_of: requires b1/rho > eps2");
  double den = p.alpha2 - 2.0 * p.lambda02 + t;
  if (!(den > 0.0)) throw std::invalid_argument("b2_of: nonpositive denominator");
  double num = t * (p.alpha2 - p.gamma2) - p.alpha2 * p.gamma2 + 2.0 * p.lambda02 * p.gamma2 -
               p.lambda02 * p.lambda02;
  return num / den;
}

double b1_of(const CertificateParams& p, double b2) {
  double s = b2 + p.gamma2;
  if (!(p.alpha2 > s))
    throw std::invalid_argument("b1_of: requires alpha2 > b2 + gamma2");
  double d = s - p.lambda02;
  return p.rho * (p.beta2 * (s + d * d / (p.alpha2 - s)) + p.eps2);
}

CertifyResult certify_gap(const CertificateParams& p, const GapInterval& g1) {
  p.validate();
  CertifyResult r;
  if (!(p.alpha1 > g1.a + p.gamma1)) {
    r.reason = "alpha1 <= a1 + gamma1";
    return r;
  }
  double a2 = a2_of(p, g1.a);
  if (!(g1.b / p.rho > p.eps2)) {
    r.reason = "b1/rho <= eps2";
    return r;
  }
  double den = p.alpha2 - 2.0 * p.lambda02 + (g1.b / p.rho - p.eps2) / p.beta2;
  if (!(den > 0.0)) {
    r.reason = "b2 denominator nonpositive";
    return r;
  }
  double b2 = b2_of(p, g1.b);
  if (!(p.alpha2 > b2 + p.gamma2)) {
    r.reason = "alpha2 <= b2 + gamma2";
    return r;
  }
  if (!(b2 > a2)) {
    r.reason = "b2 <= a2";
    return r;
  }
  r.interval = GapInterval(a2, b2);
  return r;
}

namespace {

void check_localization_hypothesis(double alpha, double lambda, double gamma, double lambda0) {
  if (gamma < 0.0) throw std::invalid_argument("localization: gamma must be >= 0");
  if (lambda0 > lambda) throw std::invalid_argument("localization: requires lambda >= lambda0");
  if (!(alpha > lambda + gamma))
    throw std::invalid_argument("localization: hypothesis alpha > lambda + gamma violated");
}

}  // namespace

double localization_coefficient(double alpha, double lambda, double gamma, double lambda0) {
  check_localization_hypothesis(alpha, lambda, gamma, lambda0);
  return (alpha - lambda - gamma) / (alpha - lambda0);
}

double localization_upper_factor(double alpha, double lambda, double gamma, double lambda0) {
  check_localization_hypothesis(alpha, lambda, gamma, lambda0);
  return (lambda + gamma - lambda0) / (alpha - lambda0);
}

double localization_energy_bound(double alpha, double lambda, double gamma, double lambda0) {
  check_localization_hypothesis(alpha, lambda, gamma, lambda0);
  return lambda + gamma - lambda0 * (lambda + gamma - lambda0) / (alpha - lambda0);
}

namespace {

// C^inf step: s(t) = m(t) / (m(t) + m(1-t)), m(t) = exp(-1/t) on t > 0.
double mollifier(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = mollifier(t);
  double b = mollifier(1.0 - t);
  return a / (a + b);
}

double theta_of(double r) {
  constexpr double kHalfPi = 1.57079632679489661923;
  if (r <= 1.0) return 0.0;
  if (r >= 2.0) return kHalfPi;
  return kHalfPi * smoothstep(r - 1.0);
}

double dtheta_of(double r) {
  const double h = 1e-6;
  return (theta_of(r + h) - theta_of(r - h)) / (2.0 * h);
}

}  // namespace

CutoffProfile::CutoffProfile(double radius_multiplier, int samples)
    : radius_multiplier_(radius_multiplier), samples_(samples) {
  if (radius_multiplier_ <= 0.0)
    throw std::invalid_argument("CutoffProfile: radius multiplier must be > 0");
  sup_grad_phi_ = 0.0;
  sup_grad_companion_ = 0.0;
  for (int i = 0; i <= samples_; ++i) {
    double r = 0.5 + 2.0 * i / samples_;
    sup_grad_phi_ = std::max(sup_grad_phi_, std::abs(dphi(r)));
    sup_grad_companion_ = std::max(sup_grad_companion_, std::abs(dcompanion(r)));
  }
}

double CutoffProfile::phi(double r) const { return std::cos(theta_of(r)); }
double CutoffProfile::companion(double r) const { return std::sin(theta_of(r)); }
double CutoffProfile::dphi(double r) const { return -std::sin(theta_of(r)) * dtheta_of(r); }
double CutoffProfile::dcompanion(double r) const { return std::cos(theta_of(r)) * dtheta_of(r); }

double CutoffProfile::pythagoras_defect() const {
  double d = 0.0;
  for (int i = 0; i <= samples_; ++i) {
    double r = 0.5 + 2.0 * i / samples_;
    double p = phi(r), q = companion(r);
    d = std::max(d, std::abs(p * p + q * q - 1.0));
  }
  return d;
}

double CutoffProfile::gluing_defect() const {
  double d = 0.0;
  for (double edge : {1.0, 2.0}) {
    d = std::max(d, std::abs(dphi(edge - 1e-4) - dphi(edge + 1e-4)));
    d = std::max(d, std::abs(dcompanion(edge - 1e-4) - dcompanion(edge + 1e-4)));
  }
  return d;
}

CertificateParams estimate_parameters(double mu, double kappa, const CutoffProfile& cutoff,
                                      const EstimatorProblem& problem) {
  if (mu <= 0.0) throw std::invalid_argument("estimate_parameters: mu must be > 0");
  if (problem.flat) {
    if (!(kappa > 0.0 && kappa < 0.5))
      throw std::invalid_argument("estimate_parameters: flat mode requires 0 < kappa < 1/2");
  } else {
    if (!(kappa > 1.0 / 3.0 && kappa < 0.5))
      throw std::invalid_argument("estimate_parameters: general mode requires 1/3 < kappa < 1/2");
  }
  const double r2 = cutoff.radius_multiplier() * cutoff.radius_multiplier();
  const double grad = std::max(cutoff.sup_grad_phi(), cutoff.sup_grad_companion());
  CertificateParams p;
  p.lambda01 = problem.lambda01;
  p.lambda02 = problem.lambda02;
  p.gamma1 = std::pow(mu, 1.0 - 2.0 * kappa) * problem.metric_sup * grad * grad / r2;
  p.gamma2 = p.gamma1;
  p.alpha1 = problem.c0 * r2 * std::pow(mu, 2.0 * kappa - 1.0);
  p.alpha2 = p.alpha1;
  p.flat = problem.flat;
  if (problem.flat) {
    p.rho = 1.0;
    p.beta1 = p.beta2 = 1.0;
    p.eps1 = p.eps2 = 0.0;
  } else {
    p.rho = 1.0 + problem.C_rho * std::pow(mu, kappa);
    p.beta1 = p.beta2 = 1.0 + problem.C_beta * std::pow(mu, kappa);
    p.eps1 = p.eps2 = problem.C_eps * std::pow(mu, 3.0 * kappa - 1.0);
  }
  p.validate();
  return p;
}

double convergence_exponent(double kappa) {
  return std::min(3.0 * kappa - 1.0, 1.0 - 2.0 * kappa);
}

std::pair<double, double> optimal_kappa() { return {2.0 / 5.0, 1.0 / 5.0}; }

double ims_decomposition_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& j,
                               const Eigen::MatrixXcd& jp) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd unit = j * j + jp * jp;
  if ((unit - Eigen::MatrixXcd::Identity(n, n)).norm() > 1e-12)
    throw std::invalid_argument("ims_decomposition_check: J^2 + J'^2 != I");
  auto dbl = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    Eigen::MatrixXcd c = x * y - y * x;
    return Eigen::MatrixXcd(x * c - c * x);
  };
  Eigen::MatrixXcd rhs = j * a * j + jp * a * jp + 0.5 * dbl(j, a) + 0.5 * dbl(jp, a);
  return (a - rhs).norm();
}

MvEquivalenceResult mv_equivalence_finite(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q,
                                          const Eigen::MatrixXcd& t, double tol) {
  MvEquivalenceResult res;
  auto is_projection = [&](const Eigen::MatrixXcd& x) {
    return (x * x - x).norm() < tol && (x - x.adjoint()).norm() < tol;
  };
  if (!is_projection(p) || !is_projection(q)) {
    res.reason = "P or Q fails the projection check";
    return res;
  }
  if ((q * t * p - t).norm() > tol * std::max(1.0, t.norm())) {
    res.reason = "T does not satisfy Q T P = T";
    return res;
  }
  const long rank_p = static_cast<long>(std::lround(p.trace().real()));
  const long rank_q = static_cast<long>(std::lround(q.trace().real()));
  if (rank_p != rank_q) {
    res.reason = "rank(P) != rank(Q): no partial isometry exists";
    return res;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  long rank_t = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10) ++rank_t;
  if (rank_t != rank_p) {
    res.reason = "singular-value collapse: T not bijective between ranges";
    return res;
  }
  Eigen::MatrixXcd u = svd.matrixU().leftCols(rank_t) * svd.matrixV().leftCols(rank_t).adjoint();
  if ((u.adjoint() * u - p).norm() > tol * 10 || (u * u.adjoint() - q).norm() > tol * 10) {
    res.reason = "polar isometry fails U*U = P or U U* = Q";
    return res;
  }
  res.partial_isometry = u;
  return res;
}

}  // namespace gapkit
