#include "gapkit/cocycle.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace gapkit {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CocycleReport verify_group_cocycle(const GroupCocycle& c,
                                   const std::vector<std::vector<GroupElem>>& samples,
                                   double tol) {
  CocycleReport rep;
  const int k = c.degree;
  GroupSpec grp;
  for (const auto& tup : samples) {
    if (static_cast<int>(tup.size()) != k + 1)
      throw std::invalid_argument("verify_group_cocycle: tuples must have k+1 entries");
    grp = GroupSpec(static_cast<int>(tup[0].size()));

    // Alternating identity.
    std::vector<GroupElem> head(tup.begin() + 1, tup.end());
    double acc = c(head);
    for (int i = 0; i + 1 <= k; ++i) {
      std::vector<GroupElem> merged;
      merged.reserve(static_cast<size_t>(k));
      for (int j = 0; j <= k; ++j) {
        if (j == i) {
          merged.push_back(group_add(tup[static_cast<size_t>(i)], tup[static_cast<size_t>(i + 1)]));
          ++j;
        } else {
          merged.push_back(tup[static_cast<size_t>(j)]);
        }
      }
      acc += ((i + 1) % 2 ? -1.0 : 1.0) * c(merged);
    }
    std::vector<GroupElem> tail(tup.begin(), tup.end() - 1);
    acc += ((k + 1) % 2 ? -1.0 : 1.0) * c(tail);
    rep.max_identity_defect = std::max(rep.max_identity_defect, std::abs(acc));

    // Normalization: zero whenever an argument is e or the product is e.
    if (c.normalized && k >= 1) {
      std::vector<GroupElem> args(head);
      for (int i = 0; i < k; ++i) {
        GroupElem saved = args[static_cast<size_t>(i)];
        args[static_cast<size_t>(i)] = group_zero(grp.rank);
        rep.max_normalization_defect = std::max(rep.max_normalization_defect, std::abs(c(args)));
        args[static_cast<size_t>(i)] = saved;
      }
      GroupElem prod = group_zero(grp.rank);
      for (int i = 0; i + 1 < k; ++i) prod = group_add(prod, args[static_cast<size_t>(i)]);
      if (k >= 1) {
        std::vector<GroupElem> closing(args);
        closing[static_cast<size_t>(k - 1)] = group_neg(prod);
        rep.max_normalization_defect =
            std::max(rep.max_normalization_defect, std::abs(c(closing)));
      }
    }

    // Declared polynomial bound.
    if (!c.poly_exponents.empty()) {
      double bound = c.poly_C;
      for (int i = 0; i < k; ++i)
        bound *= std::pow(1.0 + static_cast<double>(grp.length(head[static_cast<size_t>(i)])),
                          c.poly_exponents[static_cast<size_t>(i)]);
      rep.max_bound_violation = std::max(rep.max_bound_violation, std::abs(c(head)) - bound);
    }
  }
  rep.pass = rep.max_identity_defect < tol && rep.max_normalization_defect < tol &&
             rep.max_bound_violation <= 0.0;
  return rep;
}

Eigen::VectorXd SymplecticData::xi(const GroupElem& g) const {
  Eigen::VectorXd v(hom.cols());
  for (int i = 0; i < hom.cols(); ++i) v(i) = static_cast<double>(g[static_cast<size_t>(i)]);
  return hom * v;
}

GroupCocycle build_area_cocycle(const SymplecticData& xi) {
  if (xi.genus_dim() % 2 != 0)
    throw std::invalid_argument("build_area_cocycle: genus_dim must be even");
  const int g = xi.genus_dim() / 2;
  GroupCocycle c;
  c.degree = 2;
  c.normalized = true;
  c.poly_C = 2.0 * g * xi.hom.cwiseAbs().sum() * xi.hom.cwiseAbs().sum();
  c.poly_exponents = {2, 2};
  c.eval = [hom = xi.hom, g](const std::vector<GroupElem>& gs) -> double {
    auto row_dot = [&hom](int row, const GroupElem& v) {
      double s = 0.0;
      for (Eigen::Index col = 0; col < hom.cols(); ++col)
        s += hom(row, col) * static_cast<double>(v[static_cast<size_t>(col)]);
      return s;
    };
    double s = 0.0;
    for (int j = 0; j < g; ++j)
      s += -row_dot(j, gs[0]) * row_dot(j + g, gs[1]) +
           row_dot(j + g, gs[0]) * row_dot(j, gs[1]);
    return s;
  };
  return c;
}

namespace {

/// Phase tr_Gamma(delta_{g0} * ... * delta_{gk}) for g0+...+gk = 0:
/// the sigma-bar phases accumulated across the left-to-right products,
/// tracked as an exact integer exponent over the common denominator.
Complex delta_chain_phase(const Multiplier& mult, const std::vector<GroupElem>& gs) {
  std::int64_t num = 0;
  GroupElem prefix = gs[0];
  for (size_t j = 1; j < gs.size(); ++j) {
    num -= mult.exponent_num(prefix, gs[j]);
    prefix = group_add(prefix, gs[j]);
  }
  return mult.phase_from_num(num);
}

void check_tau_inputs(const GroupCocycle& c, const std::vector<AlgebraElement>& fs,
                      bool scalar_only) {
  if (!c.normalized)
    throw std::invalid_argument("tau_c: cocycle must be normalized (cyclicity requires it)");
  if (static_cast<int>(fs.size()) != c.degree + 1)
    throw std::invalid_argument("tau_c: need degree+1 elements");
  for (const auto& f : fs) {
    if (f.multiplier() != fs[0].multiplier())
      throw std::invalid_argument("tau_c: multiplier mismatch");
    if (f.fiber_dim() != fs[0].fiber_dim())
      throw std::invalid_argument("tau_c: fiber dimension mismatch");
    if (scalar_only && f.fiber_dim() != 1)
      throw std::invalid_argument("eval_tau_c: scalar fiber required");
  }
}

Complex tau_c_common(const GroupCocycle& c, const std::vector<AlgebraElement>& fs) {
  const int k = c.degree;
  const Multiplier& mult = fs[0].multiplier();

  if (k == 2 && fs[0].fiber_dim() == 1) {
    // Scalar degree-2 workhorse (projection pairings run over thousands of
    // support points): flat arrays, integer exponents, no temporaries.
    std::unordered_map<GroupElem, Complex, GroupElemHash> f0;
    for (const auto& [g, m] : fs[0].blocks()) f0.emplace(g, m(0, 0));
    std::vector<std::pair<GroupElem, Complex>> s1, s2;
    for (const auto& [g, m] : fs[1].blocks()) s1.emplace_back(g, m(0, 0));
    for (const auto& [g, m] : fs[2].blocks()) s2.emplace_back(g, m(0, 0));
    std::vector<GroupElem> args(2, group_zero(mult.rank()));
    Complex total(0, 0);
    GroupElem g0(static_cast<size_t>(mult.rank())), g01(static_cast<size_t>(mult.rank()));
    for (const auto& [g1, v1] : s1) {
      for (const auto& [g2, v2] : s2) {
        for (int i = 0; i < mult.rank(); ++i) {
          g0[static_cast<size_t>(i)] = -g1[static_cast<size_t>(i)] - g2[static_cast<size_t>(i)];
          g01[static_cast<size_t>(i)] = -g2[static_cast<size_t>(i)];
        }
        auto it = f0.find(g0);
        if (it == f0.end()) continue;
        args[0] = g1;
        args[1] = g2;
        double cv = c(args);
        if (cv == 0.0) continue;
        std::int64_t num = -mult.exponent_num(g0, g1) - mult.exponent_num(g01, g2);
        total += it->second * v1 * v2 * cv * mult.phase_from_num(num);
      }
    }
    return total;
  }

  std::unordered_map<GroupElem, Matrix, GroupElemHash> f0;
  for (const auto& [g, m] : fs[0].blocks()) f0.emplace(g, m);

  Complex total(0, 0);
  std::vector<GroupElem> gs(static_cast<size_t>(k + 1));
  std::vector<GroupElem> cocycle_args(static_cast<size_t>(k));
  Matrix partial;

  // Depth-first product over the supports of f1..fk; g0 is then forced.
  std::function<void(int, GroupElem, const Matrix&)> rec = [&](int depth, GroupElem sum,
                                                               const Matrix& prod) {
    if (depth == k + 1) {
      auto it = f0.find(group_neg(sum));
      if (it == f0.end()) return;
      gs[0] = group_neg(sum);
      for (int i = 1; i <= k; ++i) cocycle_args[static_cast<size_t>(i - 1)] = gs[static_cast<size_t>(i)];
      double cv = c(cocycle_args);
      if (cv == 0.0) return;
      Complex phase = delta_chain_phase(mult, gs);
      total += (it->second * prod).trace() * cv * phase;
      return;
    }
    for (const auto& [g, m] : fs[static_cast<size_t>(depth)].blocks()) {
      gs[static_cast<size_t>(depth)] = g;
      rec(depth + 1, group_add(sum, g), depth == 1 ? m : Matrix(prod * m));
    }
  };
  rec(1, group_zero(mult.rank()), Matrix::Identity(fs[0].fiber_dim(), fs[0].fiber_dim()));
  return total;
}

}  // namespace

Complex eval_tau_c(const GroupCocycle& c, const std::vector<AlgebraElement>& fs) {
  check_tau_inputs(c, fs, /*scalar_only=*/true);
  return tau_c_common(c, fs);
}

Complex eval_tau_c_tr(const GroupCocycle& c, const std::vector<AlgebraElement>& fs) {
  check_tau_inputs(c, fs, /*scalar_only=*/false);
  return tau_c_common(c, fs);
}

// Calibrated on the flux-1/3 lowest Harper band: the raw area-cocycle
// pairing there is exactly i/(2 pi) per Chern unit, so chern = Re(-2 pi i raw).
const Complex kPairingNormalization = Complex(0.0, -2.0 * kPi);

Complex pair_with_projection_raw(const GroupCocycle& c, const AlgebraElement& p, double proj_tol) {
  if (c.degree % 2 != 0) throw std::invalid_argument("pair_with_projection: degree must be even");
  if (!p.is_zero()) {
    double idem = convolve(p, p).distance(p);
    double sa = involute(p).distance(p);
    if (idem > proj_tol || sa > proj_tol)
      throw std::invalid_argument("pair_with_projection: input fails projection check (defect " +
                                  std::to_string(std::max(idem, sa)) + ")");
  }
  std::vector<AlgebraElement> fs(static_cast<size_t>(c.degree + 1), p);
  return eval_tau_c_tr(c, fs);
}

double pair_with_projection(const GroupCocycle& c, const AlgebraElement& p, double proj_tol) {
  return (kPairingNormalization * pair_with_projection_raw(c, p, proj_tol)).real();
}

CyclicReport verify_cyclic(const CyclicCocycle& phi,
                           const std::vector<std::vector<AlgebraElement>>& tuples, double tol) {
  CyclicReport rep;
  const int k = phi.degree;
  for (const auto& tup : tuples) {
    if (static_cast<int>(tup.size()) < k + 2)
      throw std::invalid_argument("verify_cyclic: tuples must have k+2 elements");
    std::vector<AlgebraElement> args(tup.begin(), tup.begin() + k + 1);
    Complex base = phi(args);
    std::vector<AlgebraElement> rotated;
    rotated.push_back(args.back());
    for (int i = 0; i < k; ++i) rotated.push_back(args[static_cast<size_t>(i)]);
    Complex rot = phi(rotated);
    double sign = (k % 2) ? -1.0 : 1.0;
    rep.max_cyclicity_defect = std::max(rep.max_cyclicity_defect, std::abs(rot - sign * base));

    // Hochschild: b phi on k+2 arguments.
    std::vector<AlgebraElement> ext(tup.begin(), tup.begin() + k + 2);
    Complex b(0, 0);
    for (int j = 0; j <= k; ++j) {
      std::vector<AlgebraElement> merged;
      for (int i = 0; i <= k + 1; ++i) {
        if (i == j) {
          merged.push_back(convolve(ext[static_cast<size_t>(j)], ext[static_cast<size_t>(j + 1)]));
          ++i;
        } else {
          merged.push_back(ext[static_cast<size_t>(i)]);
        }
      }
      b += ((j % 2) ? -1.0 : 1.0) * phi(merged);
    }
    std::vector<AlgebraElement> wrap;
    wrap.push_back(convolve(ext[static_cast<size_t>(k + 1)], ext[0]));
    for (int i = 1; i <= k; ++i) wrap.push_back(ext[static_cast<size_t>(i)]);
    b += ((k + 1) % 2 ? -1.0 : 1.0) * phi(wrap);
    rep.max_hochschild_defect = std::max(rep.max_hochschild_defect, std::abs(b));
  }
  rep.pass = rep.max_cyclicity_defect < tol && rep.max_hochschild_defect < tol;
  return rep;
}

CyclicCocycle make_tau_c(const GroupCocycle& c) {
  CyclicCocycle phi;
  phi.degree = c.degree;
  phi.eval = [c](const std::vector<AlgebraElement>& fs) { return eval_tau_c_tr(c, fs); };
  return phi;
}

AlgebraElement apply_position_derivation(const SymplecticData& xi, int j,
                                         const AlgebraElement& t) {
  AlgebraElement out(t.multiplier(), t.fiber_dim());
  for (const auto& [g, m] : t.blocks()) {
    double w = xi.xi(g)(j);
    if (w != 0.0) out.set_block(g, w * m);
  }
  return out;
}

CyclicCocycle hall_cocycle(const SymplecticData& xi) {
  if (xi.genus_dim() % 2 != 0)
    throw std::invalid_argument("hall_cocycle: genus_dim must be even");
  const int g = xi.genus_dim() / 2;
  CyclicCocycle phi;
  phi.degree = 2;
  phi.eval = [xi, g](const std::vector<AlgebraElement>& fs) -> Complex {
    if (fs.size() != 3) throw std::invalid_argument("hall_cocycle: three elements required");
    Complex total(0, 0);
    for (int j = 0; j < g; ++j) {
      AlgebraElement t1a = apply_position_derivation(xi, j + g, fs[1]);
      AlgebraElement t2a = apply_position_derivation(xi, j, fs[2]);
      AlgebraElement t1b = apply_position_derivation(xi, j, fs[1]);
      AlgebraElement t2b = apply_position_derivation(xi, j + g, fs[2]);
      total += trace_gamma(convolve(fs[0], convolve(t1a, t2a))) -
               trace_gamma(convolve(fs[0], convolve(t1b, t2b)));
    }
    return total;
  };
  return phi;
}

GroupCocycle load_cocycle_spec(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    std::vector<double> v = j.at("v").get<std::vector<double>>();
    GroupCocycle c;
    c.degree = 1;
    c.normalized = true;
    c.poly_C = 0.0;
    for (double x : v) c.poly_C += std::abs(x);
    c.poly_exponents = {1};
    c.eval = [v](const std::vector<GroupElem>& gs) {
      double s = 0.0;
      for (size_t i = 0; i < v.size(); ++i) s += v[i] * static_cast<double>(gs[0][i]);
      return s;
    };
    return c;
  }
  if (kind == "area") {
    auto rows = j.at("xi").get<std::vector<std::vector<double>>>();
    SymplecticData xi;
    xi.hom.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t cidx = 0; cidx < rows[r].size(); ++cidx)
        xi.hom(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cidx)) = rows[r][cidx];
    return build_area_cocycle(xi);
  }
  if (kind == "table") {
    int degree = j.at("degree").get<int>();
    int rank = j.at("rank").get<int>();
    std::int64_t box = j.at("box").get<std::int64_t>();
    bool normalized = j.value("normalized", false);
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    std::int64_t side = 2 * box + 1;
    std::int64_t expect = 1;
    for (int i = 0; i < degree * rank; ++i) expect *= side;
    if (static_cast<std::int64_t>(values.size()) != expect)
      throw std::invalid_argument("load_cocycle_spec: table size mismatch");
    GroupCocycle c;
    c.degree = degree;
    c.normalized = normalized;
    c.eval = [values, box, side, rank, degree](const std::vector<GroupElem>& gs) -> double {
      std::int64_t idx = 0;
      for (int a = 0; a < degree; ++a)
        for (int i = 0; i < rank; ++i) {
          std::int64_t v = gs[static_cast<size_t>(a)][static_cast<size_t>(i)];
          if (v < -box || v > box) return 0.0;
          idx = idx * side + (v + box);
        }
      return values[static_cast<size_t>(idx)];
    };
    return c;
  }
  throw std::invalid_argument("load_cocycle_spec: unknown kind '" + kind + "'");
}

}  // namespace gapkit
