#pragma once

#include <random>

#include "gapkit/algebra.hpp"

namespace gapkit::testing {

inline GroupElem rand_elem(std::mt19937_64& rng, int rank, std::int64_t box) {
  std::uniform_int_distribution<std::int64_t> d(-box, box);
  GroupElem g(static_cast<size_t>(rank));
  for (auto& v : g) v = d(rng);
  return g;
}

inline Matrix rand_matrix(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = Complex(u(rng), u(rng));
  return m;
}

inline AlgebraElement rand_element(std::mt19937_64& rng, const Multiplier& mult, int fiber,
                                   int support, std::int64_t box = 3) {
  AlgebraElement f(mult, fiber);
  for (int s = 0; s < support; ++s) f.add_block(rand_elem(rng, mult.rank(), box), rand_matrix(rng, fiber));
  return f;
}

/// Independent untwisted double-sum product oracle (Theta = 0 degeneration).
inline AlgebraElement untwisted_product_oracle(const AlgebraElement& f, const AlgebraElement& g) {
  AlgebraElement out(f.multiplier(), f.fiber_dim());
  for (const auto& [a, fa] : f.blocks())
    for (const auto& [b, gb] : g.blocks()) out.add_block(group_add(a, b), Matrix(fa * gb));
  return out;
}

/// Independent twisted trace oracle: tr(f*g) = sum_{a+b=0} tr(f(a) g(b)) sigma_bar(a,b).
inline Complex trace_product_oracle(const AlgebraElement& f, const AlgebraElement& g) {
  Complex t(0, 0);
  for (const auto& [a, fa] : f.blocks()) {
    GroupElem b = group_neg(a);
    auto it = g.blocks().find(b);
    if (it == g.blocks().end()) continue;
    t += f.multiplier().sigma_bar(a, b) * (fa * it->second).trace();
  }
  return t;
}

}  // namespace gapkit::testing
