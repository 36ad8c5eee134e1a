#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "gapkit/group.hpp"
#include "gapkit/rational.hpp"

namespace gapkit {

using Complex = std::complex<double>;

/// U(1) multiplier on Z^d with bilinear phase sigma(m,n) = exp(i*pi*m^T Theta n).
/// Theta is stored entrywise as exact rationals. Internally the exponent is
/// tracked as an integer over a common denominator and reduced modulo 2
/// before any trigonometric evaluation, so equal exponents always produce
/// bit-identical phases at rational flux.
class Multiplier {
 public:
  Multiplier() : Multiplier(1, {{Rational(0)}}) {}

  Multiplier(int rank, std::vector<std::vector<Rational>> theta)
      : rank_(rank), theta_(std::move(theta)) {
    if (static_cast<int>(theta_.size()) != rank_)
      throw std::invalid_argument("Multiplier: flux matrix rank mismatch");
    for (const auto& row : theta_)
      if (static_cast<int>(row.size()) != rank_)
        throw std::invalid_argument("Multiplier: flux matrix not square");
    common_den_ = 1;
    for (const auto& row : theta_)
      for (const auto& v : row) common_den_ = std::lcm(common_den_, v.den());
    int_num_.resize(static_cast<size_t>(rank_) * rank_);
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) {
        const Rational& v = theta_[static_cast<size_t>(i)][static_cast<size_t>(j)];
        int_num_[static_cast<size_t>(i) * rank_ + j] = v.num() * (common_den_ / v.den());
      }
    if (common_den_ <= 8192) {
      phase_table_.resize(static_cast<size_t>(2 * common_den_));
      for (std::int64_t t = 0; t < 2 * common_den_; ++t)
        phase_table_[static_cast<size_t>(t)] = phase_of(Rational(t, common_den_));
    }
  }

  static Multiplier trivial(int rank) {
    return Multiplier(rank, std::vector<std::vector<Rational>>(
                                static_cast<size_t>(rank),
                                std::vector<Rational>(static_cast<size_t>(rank), Rational(0))));
  }

  /// Flux p/q per unit cell on Z^2, antisymmetric convention:
  /// sigma(m,n) = exp(i*pi*theta*(m1 n2 - m2 n1)).
  static Multiplier antisymmetric_2d(std::int64_t p, std::int64_t q) {
    Rational th(p, q);
    std::vector<std::vector<Rational>> t(2, std::vector<Rational>(2, Rational(0)));
    t[0][1] = th;
    t[1][0] = -th;
    return Multiplier(2, std::move(t));
  }

  int rank() const { return rank_; }
  const std::vector<std::vector<Rational>>& theta() const { return theta_; }
  std::int64_t exponent_den() const { return common_den_; }

  bool is_trivial() const {
    for (auto v : int_num_)
      if (v != 0) return false;
    return true;
  }

  /// Integer numerator of the exponent over exponent_den():
  /// sigma(m,n) = exp(i*pi*exponent_num/exponent_den).
  std::int64_t exponent_num(const GroupElem& m, const GroupElem& n) const {
    std::int64_t acc = 0;
    for (int i = 0; i < rank_; ++i) {
      std::int64_t mi = m[static_cast<size_t>(i)];
      if (mi == 0) continue;
      const std::int64_t* row = &int_num_[static_cast<size_t>(i) * rank_];
      for (int j = 0; j < rank_; ++j) acc += row[j] * mi * n[static_cast<size_t>(j)];
    }
    return acc;
  }

  /// Exponent r with sigma(m,n) = exp(i*pi*r), reduced into [0,2).
  Rational exponent(const GroupElem& m, const GroupElem& n) const {
    return Rational(exponent_num(m, n), common_den_).mod(2);
  }

  /// exp(i*pi*num/exponent_den()), bit-stable per reduced exponent.
  Complex phase_from_num(std::int64_t num) const {
    std::int64_t r = num % (2 * common_den_);
    if (r < 0) r += 2 * common_den_;
    if (!phase_table_.empty()) return phase_table_[static_cast<size_t>(r)];
    return phase_of(Rational(r, common_den_));
  }

  Complex sigma(const GroupElem& m, const GroupElem& n) const {
    return phase_from_num(exponent_num(m, n));
  }

  /// Conjugate multiplier sigma-bar: the multiplication phase of the
  /// represented algebra C(Gamma, sigma-bar).
  Complex sigma_bar(const GroupElem& m, const GroupElem& n) const {
    return phase_from_num(-exponent_num(m, n));
  }

  friend bool operator==(const Multiplier& a, const Multiplier& b) {
    return a.rank_ == b.rank_ && a.theta_ == b.theta_;
  }
  friend bool operator!=(const Multiplier& a, const Multiplier& b) { return !(a == b); }

  /// Phase exp(i*pi*r) with quarter-turn exponents mapped to exact units.
  static Complex phase_of(const Rational& r) {
    Rational m = r.mod(2);
    if (m == Rational(0)) return {1.0, 0.0};
    if (m == Rational(1)) return {-1.0, 0.0};
    if (m == Rational(1, 2)) return {0.0, 1.0};
    if (m == Rational(3, 2)) return {0.0, -1.0};
    double a = 3.14159265358979323846 * m.to_double();
    return {std::cos(a), std::sin(a)};
  }

 private:
  int rank_;
  std::vector<std::vector<Rational>> theta_;
  std::int64_t common_den_ = 1;
  std::vector<std::int64_t> int_num_;
  std::vector<Complex> phase_table_;
};

/// Report of a multiplier check over sampled group triples.
struct MultiplierReport {
  bool pass = true;
  double max_defect = 0.0;       // worst cocycle-relation phase defect
  double max_norm_defect = 0.0;  // worst normalization defect
};

/// Checks normalization and the cocycle relation
///   sigma(g1,g2) sigma(g1+g2,g3) = sigma(g1,g2+g3) sigma(g2,g3)
/// on the given sample triples, for an arbitrary phase function.
template <typename PhaseFn>
MultiplierReport validate_multiplier(int rank, const PhaseFn& sigma,
                                     const std::vector<std::array<GroupElem, 3>>& samples,
                                     double tol = 1e-12) {
  if (samples.empty()) throw std::invalid_argument("validate_multiplier: empty sample set");
  MultiplierReport rep;
  const GroupElem e = group_zero(rank);
  for (const auto& s : samples) {
    const auto& g1 = s[0];
    const auto& g2 = s[1];
    const auto& g3 = s[2];
    for (const auto& g : s) {
      rep.max_norm_defect = std::max(rep.max_norm_defect, std::abs(sigma(g, e) - Complex(1, 0)));
      rep.max_norm_defect = std::max(rep.max_norm_defect, std::abs(sigma(e, g) - Complex(1, 0)));
      rep.max_norm_defect = std::max(rep.max_norm_defect, std::abs(std::abs(sigma(g1, g)) - 1.0));
    }
    Complex lhs = sigma(g1, g2) * sigma(group_add(g1, g2), g3);
    Complex rhs = sigma(g1, group_add(g2, g3)) * sigma(g2, g3);
    rep.max_defect = std::max(rep.max_defect, std::abs(lhs - rhs));
    rep.max_defect =
        std::max(rep.max_defect, std::abs(sigma(g1, group_neg(g1)) - sigma(group_neg(g1), g1)));
  }
  rep.pass = rep.max_defect < tol && rep.max_norm_defect < tol;
  return rep;
}

inline MultiplierReport validate_multiplier(const Multiplier& mult,
                                            const std::vector<std::array<GroupElem, 3>>& samples,
                                            double tol = 1e-12) {
  return validate_multiplier(
      mult.rank(), [&](const GroupElem& a, const GroupElem& b) { return mult.sigma(a, b); },
      samples, tol);
}

}  // namespace gapkit
