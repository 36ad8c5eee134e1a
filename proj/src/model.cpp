#include "gapkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace gapkit {

namespace {

void require_spd(const Eigen::MatrixXd& m, const char* name) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(name) + ": not square");
  if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm()))
    throw std::invalid_argument(std::string(name) + ": not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(std::string(name) + ": not positive definite");
}

}  // namespace

bool WellSpec::metric_volume_normalized(double tol) const {
  return std::abs(metric.determinant() - 1.0) < tol;
}

std::vector<double> well_frequencies(const WellSpec& w) {
  require_spd(w.metric, "well_frequencies: G");
  require_spd(w.hessian_half, "well_frequencies: W");
  if ((w.fiber_endo - w.fiber_endo.adjoint()).norm() > 1e-12)
    throw std::invalid_argument("well_frequencies: B-bar not Hermitian");
  // eig(G W) = eig(L^T W L) for G = L L^T, which keeps the problem symmetric.
  Eigen::LLT<Eigen::MatrixXd> llt(w.metric);
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd sym = L.transpose() * w.hessian_half * L;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  std::vector<double> out;
  out.reserve(static_cast<size_t>(es.eigenvalues().size()));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam <= 0.0) throw std::invalid_argument("well_frequencies: G W has nonpositive eigenvalue");
    out.push_back(std::sqrt(lam));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double ModelSpectrum::ground() const {
  if (levels.empty()) throw std::runtime_error("ModelSpectrum: empty spectrum has no ground level");
  return levels.front().value;
}

namespace {

/// Complete enumeration of { sum_i (2 n_i + 1) w_i + base : n in N^k } below cutoff.
/// Priority queue over multi-indices; each index is reached once by only
/// incrementing positions >= the last incremented one.
void enumerate_oscillator(const std::vector<double>& omega, double base, double cutoff,
                          std::vector<double>& out) {
  const size_t k = omega.size();
  double ground = base;
  for (double w : omega) ground += w;
  if (ground > cutoff) return;

  struct Node {
    double energy;
    std::vector<int> idx;
    size_t min_pos;
  };
  auto cmp = [](const Node& a, const Node& b) { return a.energy > b.energy; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> pq(cmp);
  pq.push({ground, std::vector<int>(k, 0), 0});
  while (!pq.empty()) {
    Node n = pq.top();
    pq.pop();
    out.push_back(n.energy);
    for (size_t i = n.min_pos; i < k; ++i) {
      double e = n.energy + 2.0 * omega[i];
      if (e > cutoff) continue;
      Node child = n;
      child.energy = e;
      child.idx[i] += 1;
      child.min_pos = i;
      pq.push(std::move(child));
    }
  }
}

}  // namespace

ModelSpectrum model_levels(const std::vector<WellSpec>& wells, double cutoff) {
  if (!std::isfinite(cutoff)) throw std::invalid_argument("model_levels: cutoff must be finite");
  std::vector<double> raw;
  for (const auto& w : wells) {
    std::vector<double> omega = well_frequencies(w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w.fiber_endo);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      enumerate_oscillator(omega, es.eigenvalues()(i), cutoff, raw);
  }
  std::sort(raw.begin(), raw.end());

  ModelSpectrum s;
  s.cutoff = cutoff;
  s.complete_below = true;
  for (double v : raw) {
    if (!s.levels.empty() &&
        std::abs(v - s.levels.back().value) <= kLevelMergeTol * std::max(1.0, std::abs(v)))
      s.levels.back().multiplicity += 1;
    else
      s.levels.push_back({v, 1});
  }
  return s;
}

std::vector<GapInterval> model_gaps(const ModelSpectrum& s) {
  if (!s.complete_below)
    throw std::invalid_argument("model_gaps: spectrum not complete below the cutoff");
  std::vector<GapInterval> gaps;
  for (size_t i = 0; i + 1 < s.levels.size(); ++i) {
    double a = s.levels[i].value;
    double b = s.levels[i + 1].value;
    if (b > a && b <= s.cutoff) gaps.emplace_back(a, b);
  }
  return gaps;
}

long counting_function(const ModelSpectrum& s, double lambda) {
  if (lambda > s.cutoff) throw std::invalid_argument("counting_function: lambda above cutoff");
  long n = 0;
  for (const auto& l : s.levels)
    if (l.value <= lambda) n += l.multiplicity;
  return n;
}

std::vector<double> oscillator_fd_eigenvalues_1d(double g, double w, double b, double mu,
                                                 double half_width, int points, int first_m) {
  if (mu <= 0.0) throw std::invalid_argument("oscillator_fd_eigenvalues_1d: mu must be positive");
  const double h = 2.0 * half_width / (points + 1);
  Eigen::VectorXd diag(points), offdiag(points - 1);
  for (int i = 0; i < points; ++i) {
    double x = -half_width + (i + 1) * h;
    diag(i) = 2.0 * mu * g / (h * h) + w * x * x / mu + b;
  }
  offdiag.setConstant(-mu * g / (h * h));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int i = 0; i < first_m && i < points; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

MuInvarianceReport mu_invariance_check(const WellSpec& w, const std::vector<double>& mus,
                                       int first_m, double tol, double half_width, int points) {
  if (w.dim() != 1)
    throw std::invalid_argument("mu_invariance_check: 1D finite-difference check only");
  if (w.fiber_dim() != 1)
    throw std::invalid_argument("mu_invariance_check: scalar fiber only");
  const double g = w.metric(0, 0);
  const double ww = w.hessian_half(0, 0);
  const double b = w.fiber_endo(0, 0).real();

  MuInvarianceReport rep;
  std::vector<double> ref = oscillator_fd_eigenvalues_1d(g, ww, b, 1.0, half_width, points, first_m);
  for (double mu : mus) {
    if (mu <= 0.0) throw std::invalid_argument("mu_invariance_check: mu must be positive");
    std::vector<double> ev =
        oscillator_fd_eigenvalues_1d(g, ww, b, mu, half_width, points, first_m);
    rep.mus.push_back(mu);
    rep.eigenvalues.push_back(ev);
    for (int i = 0; i < first_m; ++i)
      rep.max_deviation = std::max(rep.max_deviation,
                                   std::abs(ev[static_cast<size_t>(i)] - ref[static_cast<size_t>(i)]));
  }
  rep.pass = rep.max_deviation < tol;
  return rep;
}

}  // namespace gapkit
