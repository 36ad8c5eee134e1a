#include "gapkit/harper.hpp"

#include <cmath>

#include "gapkit/chern.hpp"
#include "gapkit/conventions.hpp"
#include "gapkit/eigs.hpp"

namespace gapkit {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

Eigen::MatrixXcd clock_power(std::int64_t q, double theta, std::int64_t a) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(q, q);
  for (std::int64_t j = 0; j < q; ++j)
    u(j, j) = std::exp(Complex(0.0, kTwoPi * theta * static_cast<double>(a * j)));
  return u;
}

Eigen::MatrixXcd shift_power(std::int64_t q, std::int64_t b) {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(q, q);
  std::int64_t s = ((b % q) + q) % q;
  for (std::int64_t j = 0; j < q; ++j) v(j, (j + s) % q) = 1.0;
  return v;
}

}  // namespace

Eigen::MatrixXcd weyl_rep(std::int64_t p, std::int64_t q, double k1, double k2,
                          const GroupElem& g) {
  const double theta = static_cast<double>(p) / static_cast<double>(q);
  const double a = static_cast<double>(g[0]);
  const double b = static_cast<double>(g[1]);
  Complex scalar = std::exp(Complex(0.0, a * k1 + b * k2 + kPi * theta * a * b));
  return scalar * (clock_power(q, theta, g[0]) * shift_power(q, g[1]));
}

AlgebraElement harper_element(std::int64_t p, std::int64_t q) {
  Multiplier mult = Multiplier::antisymmetric_2d(p, q);
  AlgebraElement h(mult, 1);
  for (const GroupElem& g :
       {GroupElem{1, 0}, GroupElem{-1, 0}, GroupElem{0, 1}, GroupElem{0, -1}})
    h.add_block(g, Matrix::Identity(1, 1));
  return h;
}

Eigen::MatrixXcd harper_bloch(std::int64_t p, std::int64_t q, double k1, double k2) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(q, q);
  for (const GroupElem& g :
       {GroupElem{1, 0}, GroupElem{-1, 0}, GroupElem{0, 1}, GroupElem{0, -1}})
    h += weyl_rep(p, q, k1, k2, g);
  return h;
}

AlgebraElement harper_band_projection(std::int64_t p, std::int64_t q, int nbands,
                                      std::int64_t radius, int kgrid) {
  const double theta = static_cast<double>(p) / static_cast<double>(q);
  const int M = kgrid;
  // Orthogonality needs the k-grid to out-resolve the support box.
  if (M < 2 * radius + 2)
    throw std::invalid_argument("harper_band_projection: kgrid must exceed 2*radius+1");

  // Per k: band projector and the q^2 Weyl traces tr(W_c^dagger P(k)).
  std::vector<Eigen::MatrixXcd> wconj;
  wconj.reserve(static_cast<size_t>(q) * q);
  for (std::int64_t c1 = 0; c1 < q; ++c1)
    for (std::int64_t c2 = 0; c2 < q; ++c2)
      wconj.push_back((clock_power(q, theta, c1) * shift_power(q, c2)).adjoint());

  std::vector<std::vector<Complex>> traces(static_cast<size_t>(M) * M,
                                           std::vector<Complex>(static_cast<size_t>(q) * q));
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      double k1 = kTwoPi * a / M, k2 = kTwoPi * b / M;
      Eigen::MatrixXcd hk = harper_bloch(p, q, k1, k2);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hk);
      Eigen::MatrixXcd frame = es.eigenvectors().leftCols(nbands);
      Eigen::MatrixXcd proj = frame * frame.adjoint();
      for (std::int64_t c = 0; c < q * q; ++c)
        traces[static_cast<size_t>(a) * M + b][static_cast<size_t>(c)] =
            (wconj[static_cast<size_t>(c)] * proj).trace();
    }

  Multiplier mult = Multiplier::antisymmetric_2d(p, q);
  AlgebraElement out(mult, 1);
  for (std::int64_t g1 = -radius; g1 <= radius; ++g1)
    for (std::int64_t g2 = -radius; g2 <= radius; ++g2) {
      std::int64_t c1 = ((g1 % q) + q) % q;
      std::int64_t c2 = ((g2 % q) + q) % q;
      Complex acc(0, 0);
      for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) {
          double k1 = kTwoPi * a / M, k2 = kTwoPi * b / M;
          Complex phase = std::exp(Complex(
              0.0, -(static_cast<double>(g1) * k1 + static_cast<double>(g2) * k2) -
                       kPi * theta * static_cast<double>(g1) * static_cast<double>(g2)));
          acc += phase * traces[static_cast<size_t>(a) * M + b][static_cast<size_t>(c1 * q + c2)];
        }
      acc /= static_cast<double>(M) * M * static_cast<double>(q);
      if (std::abs(acc) > 1e-13) {
        Matrix blk(1, 1);
        blk(0, 0) = acc;
        out.add_block(GroupElem{g1, g2}, blk);
      }
    }
  return out;
}

double harper_band_chern(std::int64_t p, std::int64_t q, int band_lo, int band_hi, int kgrid) {
  std::vector<Eigen::MatrixXcd> frames(static_cast<size_t>(kgrid) * kgrid);
  for (int a = 0; a < kgrid; ++a)
    for (int b = 0; b < kgrid; ++b) {
      Eigen::MatrixXcd hk = harper_bloch(p, q, kTwoPi * a / kgrid, kTwoPi * b / kgrid);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hk);
      frames[static_cast<size_t>(a) * kgrid + b] =
          es.eigenvectors().middleCols(band_lo, band_hi - band_lo + 1);
    }
  // The q x q Bloch family is 2pi-periodic in k and covers the magnetic
  // Brillouin zone q times, so the torus total is q times the subband Chern.
  double full = fhs_chern(
      [&](int a, int b) {
        return frames[static_cast<size_t>(((a % kgrid + kgrid) % kgrid)) * kgrid +
                      static_cast<size_t>((b % kgrid + kgrid) % kgrid)];
      },
      kgrid, kgrid);
  return kFhsOrientation * full / static_cast<double>(q);
}

}  // namespace gapkit
