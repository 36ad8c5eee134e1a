#include <doctest.h>

#include <random>

#include "gapkit/cocycle.hpp"
#include "gapkit/harper.hpp"
#include "test_support.hpp"

using namespace gapkit;
using namespace gapkit::testing;

namespace {

SymplecticData identity_xi() {
  SymplecticData xi;
  xi.hom = Eigen::MatrixXd::Identity(2, 2);
  return xi;
}

std::vector<std::vector<GroupElem>> random_tuples(std::mt19937_64& rng, int rank, int arity,
                                                  int n, std::int64_t box = 6) {
  std::vector<std::vector<GroupElem>> out;
  for (int i = 0; i < n; ++i) {
    std::vector<GroupElem> t;
    for (int a = 0; a < arity; ++a) t.push_back(rand_elem(rng, rank, box));
    out.push_back(std::move(t));
  }
  return out;
}

/// Brute-force triple sum for tau_c on scalar elements, with the delta-chain
/// phase computed by explicit pairwise sigma-bar products.
Complex tau_c_oracle(const GroupCocycle& c, const AlgebraElement& f0, const AlgebraElement& f1,
                     const AlgebraElement& f2) {
  const Multiplier& m = f0.multiplier();
  Complex total(0, 0);
  for (const auto& [g0, a0] : f0.blocks())
    for (const auto& [g1, a1] : f1.blocks())
      for (const auto& [g2, a2] : f2.blocks()) {
        if (!group_is_zero(group_add(group_add(g0, g1), g2))) continue;
        Complex phase = m.sigma_bar(g0, g1) * m.sigma_bar(group_add(g0, g1), g2);
        total += a0(0, 0) * a1(0, 0) * a2(0, 0) * c({g1, g2}) * phase;
      }
  return total;
}

}  // namespace

TEST_CASE("group cocycle verification") {
  std::mt19937_64 rng(41);

  SUBCASE("linear functionals are 1-cocycles") {
    GroupCocycle c = load_cocycle_spec(R"({"kind":"linear","v":[0.7,-1.3]})");
    auto rep = verify_group_cocycle(c, random_tuples(rng, 2, 2, 200));
    CHECK(rep.pass);
    CHECK(rep.max_identity_defect < 1e-12);
  }

  SUBCASE("the area 2-cocycle passes on 1000 random triples") {
    GroupCocycle c = build_area_cocycle(identity_xi());
    auto rep = verify_group_cocycle(c, random_tuples(rng, 2, 3, 1000));
    CHECK(rep.pass);
    CHECK(rep.max_identity_defect < 1e-10);
    CHECK(rep.max_bound_violation <= 0.0);  // polynomially bounded, exponents (2,2)
  }

  SUBCASE("norm products fail the cocycle identity") {
    GroupCocycle bad;
    bad.degree = 2;
    bad.normalized = false;
    GroupSpec grp(2);
    bad.eval = [grp](const std::vector<GroupElem>& gs) {
      return static_cast<double>(grp.length(gs[0]) * grp.length(gs[1]));
    };
    auto rep = verify_group_cocycle(bad, random_tuples(rng, 2, 3, 200));
    CHECK(!rep.pass);
  }
}

TEST_CASE("area cocycle") {
  std::mt19937_64 rng(43);
  SymplecticData xi = identity_xi();
  GroupCocycle psi = build_area_cocycle(xi);

  SUBCASE("matches the signed-triangle-area oracle on Z^2") {
    for (int i = 0; i < 300; ++i) {
      GroupElem m = rand_elem(rng, 2, 8), n = rand_elem(rng, 2, 8);
      // twice the signed area of the triangle (0, xi(-m), xi(n))
      double ax = -static_cast<double>(m[0]), ay = -static_cast<double>(m[1]);
      double bx = static_cast<double>(n[0]), by = static_cast<double>(n[1]);
      double oracle = ax * by - ay * bx;
      CHECK(psi({m, n}) == doctest::Approx(oracle).epsilon(1e-14));
      CHECK(psi({m, n}) ==
            doctest::Approx(-static_cast<double>(m[0] * n[1] - m[1] * n[0])).epsilon(1e-14));
    }
  }

  SUBCASE("degenerate triangles vanish") {
    GroupElem e = group_zero(2);
    for (int i = 0; i < 50; ++i) {
      GroupElem g = rand_elem(rng, 2, 8);
      CHECK(psi({g, g}) == 0.0);
      CHECK(psi({g, e}) == 0.0);
      CHECK(psi({e, g}) == 0.0);
    }
  }

  SUBCASE("odd genus dimension is rejected") {
    SymplecticData odd;
    odd.hom = Eigen::MatrixXd::Ones(3, 2);
    CHECK_THROWS_AS(build_area_cocycle(odd), std::invalid_argument);
  }
}

TEST_CASE("tau_c evaluation") {
  std::mt19937_64 rng(47);
  Multiplier m13 = Multiplier::antisymmetric_2d(1, 3);
  GroupCocycle psi = build_area_cocycle(identity_xi());

  SUBCASE("tau_c(delta_e, delta_e, delta_e) = 0") {
    AlgebraElement e = AlgebraElement::delta(m13, group_zero(2));
    CHECK(std::abs(eval_tau_c(psi, {e, e, e})) == 0.0);
  }

  SUBCASE("explicit delta formula at closing triples") {
    // tau_c(a0 d_{g0}, a1 d_{g1}, a2 d_{g2}) = a0 a1 a2 c(g1,g2)
    //   sigma_alg(g1,g2) sigma_alg(-g2,g2) when g0+g1+g2 = 0, with
    //   sigma_alg the conjugate multiplier of the represented algebra.
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      GroupElem g1 = rand_elem(rng, 2, 5), g2 = rand_elem(rng, 2, 5);
      GroupElem g0 = group_neg(group_add(g1, g2));
      Complex a0(u(rng), u(rng)), a1(u(rng), u(rng)), a2(u(rng), u(rng));
      AlgebraElement f0 = AlgebraElement::delta(m13, g0);
      f0 *= a0;
      AlgebraElement f1 = AlgebraElement::delta(m13, g1);
      f1 *= a1;
      AlgebraElement f2 = AlgebraElement::delta(m13, g2);
      f2 *= a2;
      Complex expected = a0 * a1 * a2 * psi({g1, g2}) * m13.sigma_bar(g1, g2) *
                         m13.sigma_bar(group_neg(g2), g2);
      CHECK(std::abs(eval_tau_c(psi, {f0, f1, f2}) - expected) < 1e-13);
      // non-closing triples vanish
      AlgebraElement off = AlgebraElement::delta(m13, group_add(g0, GroupElem{1, 0}));
      CHECK(std::abs(eval_tau_c(psi, {off, f1, f2})) == 0.0);
    }
  }

  SUBCASE("brute-force triple-sum oracle on random elements") {
    for (int i = 0; i < 100; ++i) {
      AlgebraElement f0 = rand_element(rng, m13, 1, 5);
      AlgebraElement f1 = rand_element(rng, m13, 1, 5);
      AlgebraElement f2 = rand_element(rng, m13, 1, 5);
      Complex fast = eval_tau_c(psi, {f0, f1, f2});
      Complex slow = tau_c_oracle(psi, f0, f1, f2);
      CHECK(std::abs(fast - slow) < 1e-12);
    }
  }

  SUBCASE("non-normalized cocycles are refused") {
    GroupCocycle c = build_area_cocycle(identity_xi());
    c.normalized = false;
    AlgebraElement e = AlgebraElement::delta(m13, group_zero(2));
    CHECK_THROWS_AS(eval_tau_c(c, {e, e, e}), std::invalid_argument);
  }
}

TEST_CASE("tau_c # Tr on matrix fibers") {
  std::mt19937_64 rng(53);
  Multiplier m13 = Multiplier::antisymmetric_2d(1, 3);
  GroupCocycle psi = build_area_cocycle(identity_xi());

  SUBCASE("identity (x) projection pairs to zero, trace picks the rank") {
    Matrix p = Matrix::Zero(3, 3);
    p(0, 0) = p(1, 1) = 1.0;
    AlgebraElement f = AlgebraElement::delta(m13, group_zero(2), p);
    CHECK(std::abs(eval_tau_c_tr(psi, {f, f, f})) == 0.0);
    CHECK(trace_gamma(f).real() == doctest::Approx(2.0));
  }

  SUBCASE("scalar reduction matches eval_tau_c") {
    for (int i = 0; i < 100; ++i) {
      AlgebraElement f0 = rand_element(rng, m13, 1, 4);
      AlgebraElement f1 = rand_element(rng, m13, 1, 4);
      AlgebraElement f2 = rand_element(rng, m13, 1, 4);
      CHECK(std::abs(eval_tau_c_tr(psi, {f0, f1, f2}) - eval_tau_c(psi, {f0, f1, f2})) < 1e-13);
    }
  }

  SUBCASE("block-diagonal fibers decouple") {
    for (int i = 0; i < 30; ++i) {
      AlgebraElement a0 = rand_element(rng, m13, 2, 4), b0 = rand_element(rng, m13, 3, 4);
      AlgebraElement a1 = rand_element(rng, m13, 2, 4), b1 = rand_element(rng, m13, 3, 4);
      AlgebraElement a2 = rand_element(rng, m13, 2, 4), b2 = rand_element(rng, m13, 3, 4);
      auto combine = [&](const AlgebraElement& x, const AlgebraElement& y) {
        AlgebraElement z(m13, 5);
        for (const auto& [g, blk] : x.blocks()) {
          Matrix big = z.block(g);
          big.topLeftCorner(2, 2) = blk;
          z.set_block(g, big);
        }
        for (const auto& [g, blk] : y.blocks()) {
          Matrix big = z.block(g);
          big.bottomRightCorner(3, 3) = blk;
          z.set_block(g, big);
        }
        return z;
      };
      Complex whole = eval_tau_c_tr(psi, {combine(a0, b0), combine(a1, b1), combine(a2, b2)});
      Complex parts = eval_tau_c_tr(psi, {a0, a1, a2}) + eval_tau_c_tr(psi, {b0, b1, b2});
      CHECK(std::abs(whole - parts) < 1e-12);
    }
  }
}

TEST_CASE("cyclic cocycle identities") {
  std::mt19937_64 rng(59);
  Multiplier m13 = Multiplier::antisymmetric_2d(1, 3);
  CyclicCocycle tau = make_tau_c(build_area_cocycle(identity_xi()));

  std::vector<std::vector<AlgebraElement>> tuples;
  for (int i = 0; i < 60; ++i) {
    std::vector<AlgebraElement> t;
    for (int a = 0; a < 4; ++a) t.push_back(rand_element(rng, m13, 1, 5));
    tuples.push_back(std::move(t));
  }
  auto rep = verify_cyclic(tau, tuples);
  CHECK(rep.pass);
  CHECK(rep.max_cyclicity_defect < 1e-10);
  CHECK(rep.max_hochschild_defect < 1e-10);
}

TEST_CASE("Hall cocycle tr_K") {
  std::mt19937_64 rng(61);
  Multiplier m13 = Multiplier::antisymmetric_2d(1, 3);
  SymplecticData xi = identity_xi();
  CyclicCocycle trk = hall_cocycle(xi);
  GroupCocycle psi = build_area_cocycle(xi);

  SUBCASE("vanishes on identity elements") {
    AlgebraElement e = AlgebraElement::delta(m13, group_zero(2));
    CHECK(std::abs(trk({e, e, e})) == 0.0);
  }

  SUBCASE("agrees with tau_Psi # Tr on 200 random triples") {
    for (int i = 0; i < 200; ++i) {
      int fiber = 1 + static_cast<int>(rng() % 2);
      AlgebraElement t0 = rand_element(rng, m13, fiber, 5);
      AlgebraElement t1 = rand_element(rng, m13, fiber, 5);
      AlgebraElement t2 = rand_element(rng, m13, fiber, 5);
      Complex lhs = trk({t0, t1, t2});
      Complex rhs = eval_tau_c_tr(psi, {t0, t1, t2});
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }

  SUBCASE("cyclicity") {
    for (int i = 0; i < 50; ++i) {
      AlgebraElement t0 = rand_element(rng, m13, 1, 5);
      AlgebraElement t1 = rand_element(rng, m13, 1, 5);
      AlgebraElement t2 = rand_element(rng, m13, 1, 5);
      CHECK(std::abs(trk({t2, t0, t1}) - trk({t0, t1, t2})) < 1e-10);
    }
  }
}

TEST_CASE("projection pairing") {
  Multiplier m13 = Multiplier::antisymmetric_2d(1, 3);
  GroupCocycle psi = build_area_cocycle(identity_xi());

  SUBCASE("delta_e (x) matrix projection pairs to zero exactly") {
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1.0;
    AlgebraElement f = AlgebraElement::delta(m13, group_zero(2), p);
    CHECK(pair_with_projection(psi, f) == 0.0);
    CHECK(pair_with_projection(psi, AlgebraElement(m13, 1)) == 0.0);
  }

  SUBCASE("near-projections outside tolerance are rejected") {
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1.001;  // breaks idempotency
    AlgebraElement f = AlgebraElement::delta(m13, group_zero(2), p);
    CHECK_THROWS_AS(pair_with_projection(psi, f), std::invalid_argument);
  }

  SUBCASE("flux-1/3 lowest Harper band pairs to the FHS Chern number") {
    AlgebraElement p = harper_band_projection(1, 3, 1, 48, 104);
    double chern = pair_with_projection(psi, p);
    double fhs = harper_band_chern(1, 3, 0, 0);
    CHECK(fhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(chern == doctest::Approx(fhs).epsilon(1e-4));
  }

  SUBCASE("additive over orthogonal direct sums") {
    // Two copies of the Harper projection in orthogonal fiber corners pair
    // to twice the single pairing.
    AlgebraElement p = harper_band_projection(1, 3, 1, 26, 60);
    AlgebraElement two(m13, 2);
    for (const auto& [g, blk] : p.blocks()) {
      Matrix big = Matrix::Zero(2, 2);
      big(0, 0) = blk(0, 0);
      big(1, 1) = blk(0, 0);
      two.set_block(g, big);
    }
    Complex one_raw = pair_with_projection_raw(psi, p, 1e-4);
    Complex two_raw = pair_with_projection_raw(psi, two, 1e-4);
    CHECK(std::abs(two_raw - 2.0 * one_raw) < 1e-10);
  }
}

TEST_CASE("weyl representation realizes the conjugate multiplier") {
  std::mt19937_64 rng(67);
  Multiplier m = Multiplier::antisymmetric_2d(2, 5);
  for (int i = 0; i < 100; ++i) {
    GroupElem a = rand_elem(rng, 2, 4), b = rand_elem(rng, 2, 4);
    double k1 = 0.37, k2 = 2.11;
    Eigen::MatrixXcd lhs = weyl_rep(2, 5, k1, k2, a) * weyl_rep(2, 5, k1, k2, b);
    Eigen::MatrixXcd rhs = m.sigma_bar(a, b) * weyl_rep(2, 5, k1, k2, group_add(a, b));
    CHECK((lhs - rhs).norm() < 1e-12);
  }
  // Harper subband Chern numbers at flux 1/3 obey the sum rule.
  double c0 = harper_band_chern(1, 3, 0, 0);
  double c1 = harper_band_chern(1, 3, 1, 1);
  double c2 = harper_band_chern(1, 3, 2, 2);
  CHECK(c0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c1 == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(c2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c0 + c1 + c2 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cocycle spec loading") {
  GroupCocycle lin = load_cocycle_spec(R"({"kind":"linear","v":[1.0,2.0]})");
  CHECK(lin.degree == 1);
  CHECK(lin({GroupElem{3, -1}}) == doctest::Approx(1.0));

  GroupCocycle area = load_cocycle_spec(R"({"kind":"area","xi":[[1,0],[0,1]]})");
  CHECK(area.degree == 2);
  CHECK(area({GroupElem{1, 0}, GroupElem{0, 1}}) == doctest::Approx(-1.0));

  GroupCocycle table = load_cocycle_spec(
      R"({"kind":"table","degree":1,"rank":1,"box":2,"normalized":true,
          "values":[-2,-1,0,1,2]})");
  CHECK(table({GroupElem{2}}) == doctest::Approx(2.0));
  CHECK(table({GroupElem{-2}}) == doctest::Approx(-2.0));
  CHECK(table({GroupElem{5}}) == 0.0);

  CHECK_THROWS_AS(load_cocycle_spec(R"({"kind":"nope"})"), std::invalid_argument);
}
