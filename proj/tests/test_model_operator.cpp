#include <doctest.h>

#include <Eigen/Sparse>
#include <functional>
#include <random>

#include "gapkit/eigs.hpp"
#include "gapkit/model.hpp"

using namespace gapkit;

namespace {

using Complex = std::complex<double>;

WellSpec scalar_well(double g, double w, double b = 0.0) {
  WellSpec ws;
  ws.metric = Eigen::MatrixXd::Constant(1, 1, g);
  ws.hessian_half = Eigen::MatrixXd::Constant(1, 1, w);
  ws.fiber_endo = Eigen::MatrixXcd::Constant(1, 1, b);
  return ws;
}

/// 2D finite-difference oracle for -sum g_ij d_i d_j + x^T W x on
/// [-L, L]^2 with Dirichlet walls: lowest eigenvalues, Richardson
/// extrapolated over two grids.
std::vector<double> fd_oracle_2d(const Eigen::MatrixXd& g, const Eigen::MatrixXd& w,
                                 size_t first_m, double half_width = 9.0) {
  auto levels = [&](int n) {
    double h = 2.0 * half_width / (n + 1);
    auto idx = [n](int i, int j) { return j * n + i; };
    std::vector<Eigen::Triplet<Complex>> trip;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double x = -half_width + (i + 1) * h;
        double y = -half_width + (j + 1) * h;
        double v = w(0, 0) * x * x + 2.0 * w(0, 1) * x * y + w(1, 1) * y * y;
        trip.emplace_back(idx(i, j), idx(i, j), Complex(2.0 * (g(0, 0) + g(1, 1)) / (h * h) + v));
        if (i + 1 < n) {
          trip.emplace_back(idx(i + 1, j), idx(i, j), Complex(-g(0, 0) / (h * h)));
          trip.emplace_back(idx(i, j), idx(i + 1, j), Complex(-g(0, 0) / (h * h)));
        }
        if (j + 1 < n) {
          trip.emplace_back(idx(i, j + 1), idx(i, j), Complex(-g(1, 1) / (h * h)));
          trip.emplace_back(idx(i, j), idx(i, j + 1), Complex(-g(1, 1) / (h * h)));
        }
        // cross term -2 g01 dx dy via the centered four-point stencil
        double cc = -2.0 * g(0, 1) / (4.0 * h * h);
        if (cc != 0.0) {
          if (i + 1 < n && j + 1 < n) {
            trip.emplace_back(idx(i + 1, j + 1), idx(i, j), Complex(cc));
            trip.emplace_back(idx(i, j), idx(i + 1, j + 1), Complex(cc));
          }
          if (i + 1 < n && j > 0) {
            trip.emplace_back(idx(i + 1, j - 1), idx(i, j), Complex(-cc));
            trip.emplace_back(idx(i, j), idx(i + 1, j - 1), Complex(-cc));
          }
        }
      }
    SparseHermitian hmat(n * n, n * n);
    hmat.setFromTriplets(trip.begin(), trip.end());
    double lower = gershgorin_lower_bound(hmat);
    double upper = 2.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      LanczosOptions opts;
      opts.max_subspace = 400;
      EigPairs pairs = sparse_eigs_below(hmat, upper, lower, opts);
      if (static_cast<size_t>(pairs.values.size()) >= first_m) {
        return std::vector<double>(pairs.values.data(), pairs.values.data() + first_m);
      }
      upper *= 1.8;
    }
    throw std::runtime_error("fd_oracle_2d: window growth failed");
  };
  std::vector<double> coarse = levels(148), fine = levels(212);
  double ratio = std::pow(213.0 / 149.0, 2.0);  // (h_c/h_f)^2
  std::vector<double> out(first_m);
  for (size_t i = 0; i < first_m; ++i)
    out[i] = fine[i] + (fine[i] - coarse[i]) / (ratio - 1.0);
  return out;
}

std::vector<double> closed_form_levels(const std::vector<double>& omega, double beta,
                                       size_t first_m) {
  std::vector<double> levels;
  std::function<void(size_t, double)> rec = [&](size_t i, double acc) {
    if (acc > 60.0) return;
    if (i == omega.size()) {
      levels.push_back(acc + beta);
      return;
    }
    for (int n = 0; acc + (2 * n + 1) * omega[i] < 60.0; ++n)
      rec(i + 1, acc + (2 * n + 1) * omega[i]);
  };
  rec(0, 0.0);
  std::sort(levels.begin(), levels.end());
  levels.resize(first_m);
  return levels;
}

}  // namespace

TEST_CASE("well frequencies") {
  SUBCASE("1D closed forms against the finite-difference oracle") {
    struct Case {
      double g, w, omega;
    };
    for (const Case& c : {Case{1.0, 1.0, 1.0}, Case{4.0, 1.0, 2.0}, Case{1.0, 4.0, 2.0},
                          Case{2.0, 1.5, std::sqrt(3.0)}}) {
      auto om = well_frequencies(scalar_well(c.g, c.w));
      REQUIRE(om.size() == 1);
      CHECK(om[0] == doctest::Approx(c.omega).epsilon(1e-12));
      auto fd = oscillator_fd_eigenvalues_1d(c.g, c.w, 0.0, 1.0, 10.0, 2000, 5);
      for (int n = 0; n < 5; ++n)
        CHECK(fd[static_cast<size_t>(n)] == doctest::Approx((2 * n + 1) * c.omega).epsilon(1e-3));
    }
  }

  SUBCASE("2D diagonal case") {
    WellSpec w;
    w.metric = Eigen::MatrixXd::Identity(2, 2);
    w.hessian_half = Eigen::Vector2d(1.0, 4.0).asDiagonal();
    w.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);
    auto om = well_frequencies(w);
    REQUIRE(om.size() == 2);
    CHECK(om[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(om[1] == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("non-SPD data is rejected") {
    CHECK_THROWS_AS(well_frequencies(scalar_well(1.0, -1.0)), std::invalid_argument);
    CHECK_THROWS_AS(well_frequencies(scalar_well(-1.0, 1.0)), std::invalid_argument);
  }

  SUBCASE("congruence invariance of the classical pair") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
      Eigen::MatrixXd q(2, 2);
      do {
        q << u(rng) + 1.5, u(rng), u(rng), u(rng) + 1.5;
      } while (std::abs(q.determinant()) < 0.2);
      Eigen::MatrixXd a(2, 2);
      a << u(rng) + 2.0, u(rng) * 0.3, 0.0, u(rng) + 2.0;
      Eigen::MatrixXd g = a * a.transpose();
      Eigen::MatrixXd b(2, 2);
      b << u(rng) + 2.0, u(rng) * 0.3, 0.0, u(rng) + 2.0;
      Eigen::MatrixXd w = b * b.transpose();

      WellSpec base;
      base.metric = g;
      base.hessian_half = w;
      base.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);
      WellSpec t;
      t.metric = q * g * q.transpose();
      t.hessian_half = q.transpose().inverse() * w * q.inverse();
      t.fiber_endo = base.fiber_endo;

      auto om1 = well_frequencies(base);
      auto om2 = well_frequencies(t);
      for (size_t i = 0; i < om1.size(); ++i)
        CHECK(om1[i] == doctest::Approx(om2[i]).epsilon(1e-10));
    }
  }

  SUBCASE("2D random wells against the Richardson finite-difference oracle") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 2; ++rep) {
      double omega1 = 0.7 + 0.5 * u(rng), omega2 = 1.0 + 0.5 * u(rng);
      double phi = 3.14 * u(rng);
      Eigen::MatrixXd rot(2, 2);
      rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
      Eigen::MatrixXd a(2, 2);
      a << 1.0 + 0.3 * u(rng), 0.2 * u(rng), 0.0, 1.0 + 0.3 * u(rng);
      Eigen::MatrixXd g = a * a.transpose();
      Eigen::MatrixXd gs = g.llt().matrixL();
      Eigen::MatrixXd d = Eigen::Vector2d(omega1 * omega1, omega2 * omega2).asDiagonal();
      Eigen::MatrixXd w = gs.transpose().inverse() * rot * d * rot.transpose() * gs.inverse();

      WellSpec ws;
      ws.metric = g;
      ws.hessian_half = 0.5 * (w + w.transpose());
      ws.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);
      auto om = well_frequencies(ws);
      CHECK(om[0] == doctest::Approx(std::min(omega1, omega2)).epsilon(1e-9));
      CHECK(om[1] == doctest::Approx(std::max(omega1, omega2)).epsilon(1e-9));

      auto closed = closed_form_levels(om, 0.0, 5);
      auto fd = fd_oracle_2d(ws.metric, ws.hessian_half, 5);
      for (size_t i = 0; i < 5; ++i)
        CHECK(fd[i] == doctest::Approx(closed[i]).epsilon(1e-3));
    }
  }
}

TEST_CASE("model level enumeration") {
  SUBCASE("isotropic 2D well") {
    WellSpec w;
    w.metric = Eigen::MatrixXd::Identity(2, 2);
    w.hessian_half = Eigen::MatrixXd::Identity(2, 2);
    w.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);
    ModelSpectrum s = model_levels({w}, 7.0);
    REQUIRE(s.levels.size() == 3);
    CHECK(s.levels[0].value == doctest::Approx(2.0));
    CHECK(s.levels[0].multiplicity == 1);
    CHECK(s.levels[1].value == doctest::Approx(4.0));
    CHECK(s.levels[1].multiplicity == 2);
    CHECK(s.levels[2].value == doctest::Approx(6.0));
    CHECK(s.levels[2].multiplicity == 3);
  }

  SUBCASE("fiber endomorphism branches") {
    WellSpec w = scalar_well(1.0, 1.0);
    w.fiber_endo = Eigen::MatrixXcd::Zero(2, 2);
    w.fiber_endo(1, 1) = 10.0;
    ModelSpectrum s = model_levels({w}, 6.0);
    REQUIRE(s.levels.size() == 3);
    CHECK(s.levels[0].value == doctest::Approx(1.0));
    CHECK(s.levels[1].value == doctest::Approx(3.0));
    CHECK(s.levels[2].value == doctest::Approx(5.0));
  }

  SUBCASE("two identical wells double the multiplicities") {
    WellSpec w = scalar_well(1.0, 1.0);
    ModelSpectrum one = model_levels({w}, 8.0);
    ModelSpectrum two = model_levels({w, w}, 8.0);
    REQUIRE(one.levels.size() == two.levels.size());
    for (size_t i = 0; i < one.levels.size(); ++i) {
      CHECK(two.levels[i].value == doctest::Approx(one.levels[i].value));
      CHECK(two.levels[i].multiplicity == 2 * one.levels[i].multiplicity);
    }
  }

  SUBCASE("cutoff below the ground level gives an empty complete spectrum") {
    ModelSpectrum s = model_levels({scalar_well(1.0, 1.0)}, 0.5);
    CHECK(s.levels.empty());
    CHECK(s.complete_below);
  }

  SUBCASE("enumeration completeness against brute-force box enumeration") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
      int dim = 1 + static_cast<int>(rng() % 3);
      std::vector<double> omega;
      for (int i = 0; i < dim; ++i) omega.push_back(u(rng));
      double cutoff = 25.0;

      WellSpec w;
      w.metric = Eigen::MatrixXd::Identity(dim, dim);
      Eigen::VectorXd d(dim);
      for (int i = 0; i < dim; ++i)
        d(i) = omega[static_cast<size_t>(i)] * omega[static_cast<size_t>(i)];
      w.hessian_half = d.asDiagonal();
      w.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);

      ModelSpectrum s = model_levels({w}, cutoff);

      std::vector<double> brute;
      int nmax = static_cast<int>(
          std::ceil(cutoff / (2.0 * *std::min_element(omega.begin(), omega.end()))));
      std::function<void(int, double)> rec = [&](int i, double acc) {
        if (acc > cutoff) return;
        if (i == dim) {
          brute.push_back(acc);
          return;
        }
        for (int n = 0; n <= nmax; ++n) {
          double e = acc + (2 * n + 1) * omega[static_cast<size_t>(i)];
          if (e > cutoff) break;
          rec(i + 1, e);
        }
      };
      rec(0, 0.0);
      std::sort(brute.begin(), brute.end());

      long total = 0;
      for (const auto& l : s.levels) total += l.multiplicity;
      REQUIRE(total == static_cast<long>(brute.size()));
      size_t bi = 0;
      for (const auto& l : s.levels)
        for (long m = 0; m < l.multiplicity; ++m)
          CHECK(l.value == doctest::Approx(brute[bi++]).epsilon(1e-12));
    }
  }
}

TEST_CASE("model gaps") {
  SUBCASE("gaps between consecutive levels") {
    WellSpec w = scalar_well(1.0, 1.0);  // levels 1, 3, 5, ...
    ModelSpectrum s = model_levels({w}, 6.0);
    auto gaps = model_gaps(s);
    REQUIRE(gaps.size() == 2);
    CHECK(gaps[0].a == doctest::Approx(1.0));
    CHECK(gaps[0].b == doctest::Approx(3.0));
    CHECK(gaps[1].a == doctest::Approx(3.0));
    CHECK(gaps[1].b == doctest::Approx(5.0));
  }

  SUBCASE("multiplicity does not split gaps") {
    WellSpec w;
    w.metric = Eigen::MatrixXd::Identity(2, 2);
    w.hessian_half = Eigen::MatrixXd::Identity(2, 2);
    w.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);
    ModelSpectrum s = model_levels({w}, 6.5);  // 2, 4(x2), 6(x3)
    auto gaps = model_gaps(s);
    REQUIRE(gaps.size() == 2);
    CHECK(gaps[0].a == doctest::Approx(2.0));
    CHECK(gaps[0].b == doctest::Approx(4.0));
    CHECK(gaps[1].a == doctest::Approx(4.0));
    CHECK(gaps[1].b == doctest::Approx(6.0));
  }

  SUBCASE("incommensurate 2D well matches brute force") {
    WellSpec w;
    w.metric = Eigen::MatrixXd::Identity(2, 2);
    w.hessian_half = Eigen::Vector2d(1.0, 2.0).asDiagonal();  // omega = (1, sqrt 2)
    w.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);
    ModelSpectrum s = model_levels({w}, 20.0);
    std::vector<double> brute;
    for (int n1 = 0; n1 <= 50; ++n1)
      for (int n2 = 0; n2 <= 50; ++n2) {
        double e = (2 * n1 + 1) + (2 * n2 + 1) * std::sqrt(2.0);
        if (e <= 20.0) brute.push_back(e);
      }
    std::sort(brute.begin(), brute.end());
    long total = 0;
    for (const auto& l : s.levels) total += l.multiplicity;
    CHECK(total == static_cast<long>(brute.size()));
    auto gaps = model_gaps(s);
    CHECK(!gaps.empty());
    for (const auto& g : gaps)
      for (double b : brute) CHECK(!g.contains(b));
  }

  SUBCASE("incomplete spectra are rejected") {
    ModelSpectrum s = model_levels({scalar_well(1.0, 1.0)}, 6.0);
    s.complete_below = false;
    CHECK_THROWS_AS(model_gaps(s), std::invalid_argument);
  }
}

TEST_CASE("counting function") {
  WellSpec w = scalar_well(1.0, 1.0);
  ModelSpectrum s = model_levels({w}, 10.0);
  CHECK(counting_function(s, 4.0) == 2);
  CHECK(counting_function(s, 0.5) == 0);
  CHECK(counting_function(s, 1.0) == 1);  // right-continuous step
  CHECK_THROWS_AS(counting_function(s, 11.0), std::invalid_argument);

  WellSpec w2;
  w2.metric = Eigen::MatrixXd::Identity(2, 2);
  w2.hessian_half = Eigen::MatrixXd::Identity(2, 2);
  w2.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);
  ModelSpectrum s2 = model_levels({w2}, 10.0);
  CHECK(counting_function(s2, 5.0) == 3);  // 2 once, 4 twice

  // Ground level of a scalar well: sum omega + min spec(B), positive for B >= 0.
  WellSpec w3 = scalar_well(1.0, 4.0, 0.5);
  ModelSpectrum s3 = model_levels({w3}, 10.0);
  CHECK(s3.ground() == doctest::Approx(2.5));
  CHECK(s3.ground() > 0.0);
}

TEST_CASE("mu invariance of the model spectrum") {
  WellSpec w = scalar_well(1.0, 1.0);

  SUBCASE("spec K(mu) = spec K(1) within discretization tolerance") {
    auto rep = mu_invariance_check(w, {0.5, 1.0, 2.0});
    CHECK(rep.pass);
    CHECK(rep.max_deviation < 2e-3);
  }

  SUBCASE("mu = 1 reproduces the reference exactly") {
    auto rep = mu_invariance_check(w, {1.0});
    CHECK(rep.max_deviation == 0.0);
  }

  SUBCASE("sqrt(mu) grid rescale maps K(mu) to K(1) in the discretization") {
    for (double mu : {0.5, 2.0, 3.7}) {
      auto scaled = oscillator_fd_eigenvalues_1d(1.0, 1.0, 0.0, mu, 10.0 * std::sqrt(mu), 800, 5);
      auto ref = oscillator_fd_eigenvalues_1d(1.0, 1.0, 0.0, 1.0, 10.0, 800, 5);
      for (size_t i = 0; i < 5; ++i)
        CHECK(scaled[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    }
  }
}
