#pragma once

#include <Eigen/Dense>
#include <functional>

namespace gapkit {

/// Chern number of an isolated band family by the plaquette link-variable
/// method: frames(a,b) returns an orthonormal frame (n x r) of the band
/// subspace at grid point (a,b) of a periodic na x nb grid over the
/// Brillouin zone. Integer-quantized output by construction.
double fhs_chern(const std::function<Eigen::MatrixXcd(int, int)>& frames, int na, int nb);

}  // namespace gapkit
