#pragma once

#include <Eigen/Dense>

#include "gapkit/algebra.hpp"

namespace gapkit {

/// Weyl representation of C(Z^2, sigma-bar) at rational flux p/q on C^q at
/// Bloch point (k1,k2): D(g1) D(g2) = sigma_bar(g1,g2) D(g1+g2) with the
/// antisymmetric multiplier of Multiplier::antisymmetric_2d(p,q).
Eigen::MatrixXcd weyl_rep(std::int64_t p, std::int64_t q, double k1, double k2,
                          const GroupElem& g);

/// Harper operator delta_{e1} + delta_{-e1} + delta_{e2} + delta_{-e2} in
/// the twisted group algebra at flux p/q.
AlgebraElement harper_element(std::int64_t p, std::int64_t q);

/// q x q Bloch matrix of the Harper operator; 2pi-periodic in k.
Eigen::MatrixXcd harper_bloch(std::int64_t p, std::int64_t q, double k1, double k2);

/// Lowest-band(s) spectral projection recovered as a finitely supported
/// algebra element, truncated to |gamma_i| <= radius, from a kgrid x kgrid
/// Fourier-Weyl quadrature.
AlgebraElement harper_band_projection(std::int64_t p, std::int64_t q, int nbands,
                                      std::int64_t radius, int kgrid);

/// FHS Chern number of the Harper subband group [band_lo, band_hi].
double harper_band_chern(std::int64_t p, std::int64_t q, int band_lo, int band_hi, int kgrid = 36);

}  // namespace gapkit
