#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

namespace gapkit {

using SparseHermitian = Eigen::SparseMatrix<std::complex<double>>;

struct EigPairs {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // matching columns (empty when not requested)
};

/// Full spectrum of a dense Hermitian matrix.
EigPairs dense_hermitian_eig(const Eigen::MatrixXcd& h, bool want_vectors = true);

struct LanczosOptions {
  double tol = 1e-10;
  int max_subspace = 600;
  int block = 80;        // subspace growth step between convergence checks
  unsigned seed = 20240901;
};

/// All eigenpairs with eigenvalue <= upper, via shift-invert Lanczos with
/// full reorthogonalization at a shift strictly below the spectrum.
/// `lower_hint` must be a strict lower bound of the spectrum (a Gershgorin
/// bound works). Throws if the window cannot be certified converged: the
/// first Ritz value above `upper` must also converge, which brackets the
/// count. Deterministic for fixed options.
EigPairs sparse_eigs_below(const SparseHermitian& h, double upper, double lower_hint,
                           const LanczosOptions& opts = {});

/// Strict lower bound of the spectrum by Gershgorin disks.
double gershgorin_lower_bound(const SparseHermitian& h);

}  // namespace gapkit
