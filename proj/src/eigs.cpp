#include "gapkit/eigs.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <random>
#include <stdexcept>

namespace gapkit {

EigPairs dense_hermitian_eig(const Eigen::MatrixXcd& h, bool want_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  es.compute(h, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense_hermitian_eig: no convergence");
  EigPairs out;
  out.values = es.eigenvalues();
  if (want_vectors) out.vectors = es.eigenvectors();
  return out;
}

double gershgorin_lower_bound(const SparseHermitian& h) {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(h.rows());
  for (int col = 0; col < h.outerSize(); ++col)
    for (SparseHermitian::InnerIterator it(h, col); it; ++it) {
      if (it.row() == it.col())
        lo(it.row()) += it.value().real();
      else
        lo(it.row()) -= std::abs(it.value());
    }
  return lo.minCoeff();
}

namespace {

struct ShiftInvertOp {
  Eigen::SparseLU<SparseHermitian> lu;

  explicit ShiftInvertOp(const SparseHermitian& h, double sigma) {
    SparseHermitian shifted = h;
    SparseHermitian eye(h.rows(), h.cols());
    eye.setIdentity();
    shifted -= sigma * eye;
    lu.analyzePattern(shifted);
    lu.factorize(shifted);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("sparse_eigs_below: LU factorization failed at the shift");
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const { return lu.solve(x); }
};

}  // namespace

EigPairs sparse_eigs_below(const SparseHermitian& h, double upper, double lower_hint,
                           const LanczosOptions& opts) {
  const Eigen::Index n = h.rows();
  if (n <= 400) {
    // Small fibers: dense is faster and unconditionally complete.
    EigPairs all = dense_hermitian_eig(Eigen::MatrixXcd(h), true);
    Eigen::Index cnt = 0;
    while (cnt < n && all.values(cnt) <= upper) ++cnt;
    EigPairs out;
    out.values = all.values.head(cnt);
    out.vectors = all.vectors.leftCols(cnt);
    return out;
  }

  const double sigma = lower_hint - 0.5 * std::max(1.0, std::abs(lower_hint));
  ShiftInvertOp op(h, sigma);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {gauss(rng), gauss(rng)};
  v.normalize();

  std::vector<Eigen::VectorXcd> basis;
  std::vector<double> alpha, beta;
  basis.push_back(v);

  int m_limit = std::min<int>(opts.max_subspace, static_cast<int>(n));
  EigPairs out;
  for (int m = 0; m < m_limit;) {
    int target = std::min(m + opts.block, m_limit);
    for (; m < target; ++m) {
      Eigen::VectorXcd w = op.apply(basis[static_cast<size_t>(m)]);
      double a = std::real(basis[static_cast<size_t>(m)].dot(w));
      alpha.push_back(a);
      w -= a * basis[static_cast<size_t>(m)];
      if (m > 0) w -= beta[static_cast<size_t>(m - 1)] * basis[static_cast<size_t>(m - 1)];
      // Full reorthogonalization, twice.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) w -= q.dot(w) * q;
      double b = w.norm();
      if (b < 1e-14) {
        // Invariant subspace: restart direction.
        for (Eigen::Index i = 0; i < n; ++i) w(i) = {gauss(rng), gauss(rng)};
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& q : basis) w -= q.dot(w) * q;
        b = w.norm();
        if (b < 1e-14) break;
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }

    // Ritz pairs of the tridiagonal.
    int k = static_cast<int>(alpha.size());
    Eigen::VectorXd ad = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd bd(k - 1 > 0 ? k - 1 : 0);
    for (int i = 0; i + 1 < k; ++i) bd(i) = beta[static_cast<size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(ad, bd);
    // theta are eigenvalues of (H - sigma)^{-1}; lambda = sigma + 1/theta.
    // All states below `upper` sit at the top of theta.
    double theta_cut = 1.0 / (upper - sigma);
    double resid_scale = beta.empty() ? 0.0 : beta.back();

    std::vector<std::pair<double, int>> ritz;  // (theta, index) descending
    for (int i = 0; i < k; ++i) ritz.push_back({tri.eigenvalues()(i), i});
    std::sort(ritz.begin(), ritz.end(), [](auto& a, auto& b) { return a.first > b.first; });

    int below = 0;
    bool all_converged = true;
    bool bracketed = false;
    for (size_t r = 0; r < ritz.size(); ++r) {
      double theta = ritz[r].first;
      if (theta <= 0.0) break;
      double resid = std::abs(resid_scale * tri.eigenvectors()(k - 1, ritz[r].second));
      bool conv = resid < opts.tol * std::max(1.0, std::abs(theta));
      if (theta > theta_cut) {
        ++below;
        if (!conv) {
          all_converged = false;
          break;
        }
      } else {
        bracketed = conv;  // first Ritz value beyond the window must be solid
        break;
      }
    }
    if ((all_converged && bracketed) || m >= m_limit) {
      if (!(all_converged && bracketed))
        throw std::runtime_error(
            "sparse_eigs_below: window not certified converged at max subspace");
      out.values.resize(below);
      out.vectors.resize(n, below);
      // Largest theta of the inverse corresponds to the lowest eigenvalue.
      for (int r = 0; r < below; ++r) {
        double theta = ritz[static_cast<size_t>(r)].first;
        out.values(r) = sigma + 1.0 / theta;
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
        for (int i = 0; i < k; ++i)
          x += tri.eigenvectors()(i, ritz[static_cast<size_t>(r)].second) *
               basis[static_cast<size_t>(i)];
        x.normalize();
        out.vectors.col(r) = x;
      }
      // True residual screen on the returned pairs.
      for (int c = 0; c < below; ++c) {
        double resid = (h * out.vectors.col(c) - out.values(c) * out.vectors.col(c)).norm();
        if (resid > 1e-7 * std::max(1.0, std::abs(out.values(c))))
          throw std::runtime_error("sparse_eigs_below: residual check failed");
      }
      return out;
    }
  }
  throw std::runtime_error("sparse_eigs_below: failed to converge");
}

}  // namespace gapkit
