#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <vector>

#include "gapkit/group.hpp"
#include "gapkit/multiplier.hpp"

namespace gapkit {

using Matrix = Eigen::MatrixXcd;

/// Finitely supported element of C(Z^d, sigma-bar) (x) M_N:
/// f = sum_g delta_g (x) A(g). The algebra product is left twisted
/// convolution with the conjugate multiplier, matching the represented
/// algebra acting on l^2(Gamma) by left twisted convolutions.
class AlgebraElement {
 public:
  /// Blocks below this Frobenius norm are dropped after every operation.
  static constexpr double kPruneTol = 1e-15;

  AlgebraElement(Multiplier mult, int fiber_dim);

  static AlgebraElement delta(const Multiplier& mult, const GroupElem& g, int fiber_dim = 1);
  static AlgebraElement delta(const Multiplier& mult, const GroupElem& g, const Matrix& block);

  int fiber_dim() const { return fiber_dim_; }
  int rank() const { return mult_.rank(); }
  const Multiplier& multiplier() const { return mult_; }
  const std::map<GroupElem, Matrix>& blocks() const { return blocks_; }
  size_t support_size() const { return blocks_.size(); }
  bool is_zero() const { return blocks_.empty(); }

  /// Block at g (zero matrix if g is outside the support).
  Matrix block(const GroupElem& g) const;

  void set_block(const GroupElem& g, const Matrix& m);
  void add_block(const GroupElem& g, const Matrix& m);

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(Complex s);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }

  /// Largest blockwise difference against another element (union support).
  double distance(const AlgebraElement& o) const;

 private:
  void prune();

  Multiplier mult_;
  int fiber_dim_;
  std::map<GroupElem, Matrix> blocks_;

  friend AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g);
  friend AlgebraElement involute(const AlgebraElement& f);
};

/// Twisted convolution (f*g)(c) = sum_{a+b=c} f(a) g(b) sigma_bar(a,b).
AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g);

/// Involution f*(g) = sigma(-g,g) f(-g)^dagger, induced by
/// (T_g^L)* = sigma(g,g^{-1}) T_{g^{-1}}^L.
AlgebraElement involute(const AlgebraElement& f);

/// tr_Gamma (x) Tr: the matrix trace of the block at the identity.
Complex trace_gamma(const AlgebraElement& f);

/// nu_k(f) = (sum_g (1+l(g))^{2k} |f(g)|^2)^{1/2}, scalar fiber only.
double nu_norm(const AlgebraElement& f, int k);

/// N_k(A) = (sum_{ij} nu_k(A_ij)^2)^{1/2}; reduces to nu_norm when N=1.
double block_nu_norm(const AlgebraElement& a, int k);

/// Lemma bracket sup_g ||A(g)|| <= ||A|| <= sum_g ||A(g)|| on the
/// represented operator norm; returns (lower, upper).
std::pair<double, double> norm_bounds(const AlgebraElement& a);

/// Dense matrix of left twisted convolution by f on the truncated module
/// span{delta_g (x) e_i : l(g) <= radius}. Test oracle surface for the
/// norm bracket.
Matrix truncated_regular_representation(const AlgebraElement& f, std::int64_t radius);

/// Structured text record: fiber_dim then (gamma tuple, row-major "re,im"
/// pairs) per block. Round-trips bit-exactly.
void serialize(const AlgebraElement& f, std::ostream& os);
AlgebraElement deserialize(std::istream& is, const Multiplier& mult);

}  // namespace gapkit
