#include "gapkit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gapkit {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
}

void validate_flux(const Json& j, const std::string& where) {
  check_keys(j, {"p", "q"}, where);
  if (!j.contains("p") || !j.contains("q") || !j["p"].is_number_integer() ||
      !j["q"].is_number_integer())
    throw std::invalid_argument("config: " + where + " needs integer p and q");
}

void validate_potential(const Json& j, const std::string& where) {
  check_keys(j, {"kind", "coeffs", "depth", "width"}, where);
  std::string kind = j.value("kind", "");
  if (kind != "zero" && kind != "cosine" && kind != "gaussian_wells")
    throw std::invalid_argument("config: " + where + ".kind must be zero|cosine|gaussian_wells");
  if (kind == "cosine" && !j.contains("coeffs"))
    throw std::invalid_argument("config: " + where + " cosine potential needs coeffs");
}

void validate_lattice(const Json& j, const std::string& where) {
  check_keys(j,
             {"dimension", "grid_per_cell", "kpoints", "mu", "flux", "potential", "endo_re",
              "endo_im", "cutoff_energy", "wells", "gauge", "supercell_x", "supercell_y",
              "mu_list", "lambda", "sample_cells", "core_cells", "sum_rule", "band_window"},
             where);
  if (j.contains("flux")) validate_flux(j["flux"], where + ".flux");
  if (j.contains("potential")) validate_potential(j["potential"], where + ".potential");
}

void validate_schema(const Json& j) {
  check_keys(j,
             {"seed", "threads", "out_dir", "tolerances", "algebra", "cocycle", "model", "certify",
              "simulate", "hall"},
             "top level");
  if (j.contains("tolerances")) check_keys(j["tolerances"], {"projection"}, "tolerances");
  if (j.contains("algebra"))
    check_keys(j["algebra"], {"rank", "flux", "fiber", "cases", "max_support"}, "algebra");
  if (j.contains("algebra") && j["algebra"].contains("flux"))
    validate_flux(j["algebra"]["flux"], "algebra.flux");
  if (j.contains("cocycle")) {
    check_keys(j["cocycle"], {"spec", "samples", "projection"}, "cocycle");
    if (j["cocycle"].contains("spec"))
      check_keys(j["cocycle"]["spec"], {"kind", "v", "xi", "degree", "rank", "box", "values",
                                        "normalized"},
                 "cocycle.spec");
    if (j["cocycle"].contains("projection"))
      check_keys(j["cocycle"]["projection"], {"kind", "p", "q", "bands", "radius", "kgrid"},
                 "cocycle.projection");
  }
  if (j.contains("model")) {
    check_keys(j["model"], {"wells", "cutoff"}, "model");
    if (j["model"].contains("wells"))
      for (const auto& w : j["model"]["wells"])
        check_keys(w, {"metric", "hessian_half", "fiber_endo_re", "fiber_endo_im"},
                   "model.wells[]");
  }
  if (j.contains("certify"))
    check_keys(j["certify"],
               {"kappa", "flat", "radius_multiplier", "metric_sup", "c0", "lambda01", "lambda02",
                "constants", "gap", "model_gap_index", "mu", "mu_sweep"},
               "certify");
  if (j.contains("certify") && j["certify"].contains("constants"))
    check_keys(j["certify"]["constants"], {"rho", "beta", "eps"}, "certify.constants");
  if (j.contains("certify") && j["certify"].contains("gap"))
    check_keys(j["certify"]["gap"], {"a", "b"}, "certify.gap");
  if (j.contains("certify") && j["certify"].contains("mu_sweep"))
    check_keys(j["certify"]["mu_sweep"], {"from", "to", "per_decade"}, "certify.mu_sweep");
  if (j.contains("simulate")) validate_lattice(j["simulate"], "simulate");
  if (j.contains("hall")) {
    validate_lattice(j["hall"], "hall");
    if (j["hall"].contains("sum_rule"))
      check_keys(j["hall"]["sum_rule"], {"p", "q", "kgrid"}, "hall.sum_rule");
  }
}

}  // namespace

const Json& RunConfig::section(const std::string& name) const {
  if (!raw.contains(name))
    throw std::invalid_argument("config: missing section '" + name + "'");
  return raw.at(name);
}

RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }
  validate_schema(j);
  RunConfig rc;
  rc.raw = j;
  rc.seed = j.value("seed", 20240901u);
  rc.threads = j.value("threads", 2);
  rc.out_dir = j.value("out_dir", ".");
  if (rc.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Eigen::MatrixXcd matrix_from_json(const Json& re, const Json* im) {
  auto rows = re.get<std::vector<std::vector<double>>>();
  Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::Index m = n ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXcd out(n, m);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      out(r, c) = Complex(rows[static_cast<size_t>(r)][static_cast<size_t>(c)], 0.0);
  if (im) {
    auto irows = im->get<std::vector<std::vector<double>>>();
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < m; ++c)
        out(r, c) += Complex(0.0, irows[static_cast<size_t>(r)][static_cast<size_t>(c)]);
  }
  return out;
}

LatticeConfig lattice_from_json(const Json& j, unsigned seed, int threads) {
  LatticeConfig c;
  c.dimension = j.value("dimension", 1);
  c.grid_per_cell = j.value("grid_per_cell", 32);
  c.kpoints = j.value("kpoints", 24);
  c.mu = j.value("mu", 1.0);
  if (j.contains("flux")) {
    c.flux.p = j["flux"].value("p", 0);
    c.flux.q = j["flux"].value("q", 1);
  }
  if (j.contains("potential")) {
    const Json& p = j["potential"];
    std::string kind = p.value("kind", "zero");
    if (kind == "zero") c.potential.kind = PotentialSpec::Kind::zero;
    if (kind == "cosine") {
      c.potential.kind = PotentialSpec::Kind::cosine;
      c.potential.cosine_coeffs = p["coeffs"].get<std::vector<std::vector<double>>>();
    }
    if (kind == "gaussian_wells") {
      c.potential.kind = PotentialSpec::Kind::gaussian_wells;
      c.potential.depth = p.value("depth", 1.0);
      c.potential.width = p.value("width", 0.15);
    }
  }
  if (j.contains("endo_re")) {
    const Json* im = j.contains("endo_im") ? &j["endo_im"] : nullptr;
    c.endo = matrix_from_json(j["endo_re"], im);
  }
  c.cutoff_energy = j.value("cutoff_energy", 20.0);
  if (j.contains("wells")) c.wells = j["wells"].get<std::vector<std::vector<double>>>();
  c.supercell_x = j.value("supercell_x", 0);
  c.supercell_y = j.value("supercell_y", 0);
  c.gauge = j.value("gauge", "landau_y");
  c.seed = seed;
  c.threads = threads;
  c.validate();
  return c;
}

std::vector<WellSpec> wells_from_json(const Json& j) {
  std::vector<WellSpec> out;
  for (const auto& wj : j.at("wells")) {
    WellSpec w;
    auto metric = wj.at("metric").get<std::vector<std::vector<double>>>();
    auto hess = wj.at("hessian_half").get<std::vector<std::vector<double>>>();
    Eigen::Index n = static_cast<Eigen::Index>(metric.size());
    w.metric.resize(n, n);
    w.hessian_half.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        w.metric(r, c) = metric[static_cast<size_t>(r)][static_cast<size_t>(c)];
        w.hessian_half(r, c) = hess[static_cast<size_t>(r)][static_cast<size_t>(c)];
      }
    if (wj.contains("fiber_endo_re")) {
      const Json* im = wj.contains("fiber_endo_im") ? &wj["fiber_endo_im"] : nullptr;
      w.fiber_endo = matrix_from_json(wj["fiber_endo_re"], im);
    } else {
      w.fiber_endo = Eigen::MatrixXcd::Zero(1, 1);
    }
    out.push_back(std::move(w));
  }
  return out;
}

double morse_constant(const LatticeConfig& config) {
  if (config.wells.empty()) throw std::invalid_argument("morse_constant: no declared wells");
  const int m = config.grid_per_cell;
  const int d = config.dimension;
  double c0 = 1e300;
  std::vector<double> x(static_cast<size_t>(d), 0.0);
  auto dist2 = [&](const std::vector<double>& p) {
    double best = 1e300;
    for (const auto& w : config.wells) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        double di = std::remainder(p[static_cast<size_t>(i)] - w[static_cast<size_t>(i)], 1.0);
        s += di * di;
      }
      best = std::min(best, s);
    }
    return best;
  };
  auto visit = [&](const std::vector<double>& p) {
    double d2 = dist2(p);
    if (d2 < 1e-8) return;
    c0 = std::min(c0, config.potential(p) / d2);
  };
  if (d == 1) {
    for (int i = 0; i < m; ++i) {
      x[0] = static_cast<double>(i) / m;
      visit(x);
    }
  } else {
    for (int i = 0; i < m; ++i)
      for (int jj = 0; jj < m; ++jj) {
        x[0] = static_cast<double>(i) / m;
        x[1] = static_cast<double>(jj) / m;
        visit(x);
      }
  }
  return c0;
}

}  // namespace gapkit
