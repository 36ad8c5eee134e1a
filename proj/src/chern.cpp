#include "gapkit/chern.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace gapkit {

double fhs_chern(const std::function<Eigen::MatrixXcd(int, int)>& frames, int na, int nb) {
  constexpr double kTwoPi = 6.28318530717958647692;
  std::vector<Eigen::MatrixXcd> cache;
  cache.reserve(static_cast<size_t>(na) * nb);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) cache.push_back(frames(a, b));
  auto at = [&](int a, int b) -> const Eigen::MatrixXcd& {
    return cache[static_cast<size_t>(((a % na + na) % na) * nb + ((b % nb + nb) % nb))];
  };
  auto link = [&](const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& g) {
    std::complex<double> d = (f.adjoint() * g).determinant();
    if (std::abs(d) < 1e-12)
      throw std::runtime_error("fhs_chern: vanishing link overlap (band not isolated?)");
    return d / std::abs(d);
  };
  double total = 0.0;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      std::complex<double> loop = link(at(a, b), at(a + 1, b)) * link(at(a + 1, b), at(a + 1, b + 1)) *
                                  link(at(a + 1, b + 1), at(a, b + 1)) * link(at(a, b + 1), at(a, b));
      total += std::arg(loop);
    }
  return total / kTwoPi;
}

}  // namespace gapkit
