#pragma once

namespace gapkit {

/// Sign and orientation conventions, locked against the calibration
/// anchors: the magnetic-translation commutator T1 T2 T1^-1 T2^-1 =
/// exp(+2 pi i theta), and Chern(+1) for the flux-1/3 lowest Harper band
/// under the link-variable (FHS) orientation below.
inline constexpr double kFieldSign = -1.0;      // B0 = kFieldSign * 2*pi*theta
inline constexpr double kFhsOrientation = 1.0;  // global plaquette orientation
inline constexpr double kMarkerSign = -1.0;      // real-space Kubo trace sign

}  // namespace gapkit
