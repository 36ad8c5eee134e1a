#pragma once

#include <stdexcept>

namespace gapkit {

/// Open spectral interval (a,b), a < b.
struct GapInterval {
  double a = 0.0;
  double b = 0.0;

  GapInterval() = default;
  GapInterval(double a_, double b_) : a(a_), b(b_) {
    if (!(a < b)) throw std::invalid_argument("GapInterval: requires a < b");
  }

  double width() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
  bool contains(double x) const { return a < x && x < b; }
  bool contains(const GapInterval& o) const { return a <= o.a && o.b <= b; }
};

}  // namespace gapkit
