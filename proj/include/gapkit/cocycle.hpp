#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gapkit/algebra.hpp"

namespace gapkit {

/// Real group k-cocycle on Z^d in inhomogeneous form.
struct GroupCocycle {
  int degree = 1;
  std::function<double(const std::vector<GroupElem>&)> eval;
  bool normalized = false;
  double poly_C = 0.0;              // |c(g_1..g_k)| <= C prod (1+l(g_i))^{a_i}
  std::vector<int> poly_exponents;  // the a_i; empty means no declared bound

  double operator()(const std::vector<GroupElem>& gs) const { return eval(gs); }
};

struct CocycleReport {
  bool pass = true;
  double max_identity_defect = 0.0;
  double max_normalization_defect = 0.0;
  double max_bound_violation = 0.0;  // excess over the declared polynomial bound
};

/// Checks the inhomogeneous cocycle identity
///   c(g1,..,gk) + sum_{i=0}^{k-1} (-1)^{i+1} c(g0,..,g_i g_{i+1},..,gk)
///     + (-1)^{k+1} c(g0,..,g_{k-1}) = 0
/// on sampled (k+1)-tuples, plus normalization and the polynomial bound.
CocycleReport verify_group_cocycle(const GroupCocycle& c,
                                   const std::vector<std::vector<GroupElem>>& samples,
                                   double tol = 1e-10);

/// Additive homomorphism xi : Z^d -> R^{2g} (periods of harmonic forms,
/// base point folded in).
struct SymplecticData {
  Eigen::MatrixXd hom;  // (2g) x d

  int genus_dim() const { return static_cast<int>(hom.rows()); }
  int rank() const { return static_cast<int>(hom.cols()); }
  Eigen::VectorXd xi(const GroupElem& g) const;
};

/// Symplectic-area 2-cocycle
///   Psi(g1,g2) = sum_j [xi_j(-g1) xi_{j+g}(g2) - xi_{j+g}(-g1) xi_j(g2)].
GroupCocycle build_area_cocycle(const SymplecticData& xi);

/// tau_c on scalar-fiber elements, Eq. form
///   sum_{g0+...+gk=0} f0(g0)...fk(gk) c(g1,..,gk) tr(delta_{g0}*...*delta_{gk}).
/// Rejects non-normalized cocycles.
Complex eval_tau_c(const GroupCocycle& c, const std::vector<AlgebraElement>& fs);

/// tau_c # Tr on matrix-fiber elements:
///   sum Tr(F0(g0)...Fk(gk)) c(g1,..,gk) tr(delta_{g0}*...*delta_{gk}).
Complex eval_tau_c_tr(const GroupCocycle& c, const std::vector<AlgebraElement>& fs);

/// Connes pairing <[tau_c # Tr], [P]> for an even cocycle and a projection,
/// reported in Chern units: the raw pairing is multiplied by the universal
/// constant fixed on the flux-1/3 lowest Harper band (see
/// kPairingNormalization below).
double pair_with_projection(const GroupCocycle& c, const AlgebraElement& p, double proj_tol = 1e-10);

/// Raw (uncalibrated) pairing value tau_c#Tr(P,...,P).
Complex pair_with_projection_raw(const GroupCocycle& c, const AlgebraElement& p,
                                 double proj_tol = 1e-10);

/// Universal constant relating the raw Z^2 area-cocycle pairing to the
/// integer Chern number: chern = Re(kPairingNormalization * raw).
/// Fixed once against the flux-1/3 lowest Harper band (FHS oracle value +1).
extern const Complex kPairingNormalization;

/// Cyclic k-cocycle as a multilinear evaluator on (k+1) algebra elements.
struct CyclicCocycle {
  int degree = 2;
  std::function<Complex(const std::vector<AlgebraElement>&)> eval;

  Complex operator()(const std::vector<AlgebraElement>& fs) const { return eval(fs); }
};

struct CyclicReport {
  bool pass = true;
  double max_cyclicity_defect = 0.0;
  double max_hochschild_defect = 0.0;
};

/// Checks cyclicity phi(f_k,f_0,..) = (-1)^k phi(f_0,..,f_k) and the
/// Hochschild condition bphi = 0 on the supplied tuples (k+2 elements each).
CyclicReport verify_cyclic(const CyclicCocycle& phi,
                           const std::vector<std::vector<AlgebraElement>>& tuples,
                           double tol = 1e-10);

/// Cyclic cocycle tau_c for a normalized group cocycle (scalar fiber).
CyclicCocycle make_tau_c(const GroupCocycle& c);

/// Kubo Hall cocycle tr_K = sum_j c_{j,j+g} realized on finitely supported
/// elements: the derivations delta_j act on the gamma-block by the additive
/// weight xi_j(gamma), and each c_{j,k} is the (j,k)-antisymmetrized product
/// trace Tr_Gamma(T0 (delta_j T1 delta_k T2 - delta_k T1 delta_j T2)).
/// With this orientation tr_K agrees with tau_Psi # Tr identically on
/// finite supports.
CyclicCocycle hall_cocycle(const SymplecticData& xi);

/// delta_j weighting: block at gamma scaled by xi_j(gamma).
AlgebraElement apply_position_derivation(const SymplecticData& xi, int j,
                                         const AlgebraElement& t);

/// Cocycle specs loadable from structured text (JSON): degree, kind
/// (linear | area | table), parameters.
GroupCocycle load_cocycle_spec(const std::string& json_text);

}  // namespace gapkit
