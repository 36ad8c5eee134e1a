#include "gapkit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <random>

#include "gapkit/certificate.hpp"
#include "gapkit/cocycle.hpp"
#include "gapkit/config.hpp"
#include "gapkit/harper.hpp"
#include "gapkit/outputs.hpp"

namespace gapkit {

namespace {

struct RunContext {
  RunConfig config;
  Json resolved;
  std::string hash;
  std::string out_dir;

  std::string path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }
};

RunContext make_context(const std::string& config_path, const std::string& out_override,
                        int seed_override, int threads_override) {
  RunContext ctx;
  ctx.config = load_config(config_path);
  if (seed_override >= 0) ctx.config.seed = static_cast<unsigned>(seed_override);
  if (threads_override > 0) ctx.config.threads = threads_override;
  if (!out_override.empty()) ctx.config.out_dir = out_override;
  ctx.resolved = ctx.config.raw;
  ctx.resolved["seed"] = ctx.config.seed;
  ctx.resolved["threads"] = ctx.config.threads;
  ctx.resolved["out_dir"] = ctx.config.out_dir;
  ctx.hash = fnv1a_hex(ctx.resolved.dump());
  ctx.out_dir = ctx.config.out_dir;
  std::filesystem::create_directories(ctx.out_dir);
  return ctx;
}

Json summary_base(const RunContext& ctx) {
  Json j;
  j["config"] = ctx.resolved;
  j["config_hash"] = ctx.hash;
  return j;
}

GroupElem random_elem(std::mt19937_64& rng, int rank, std::int64_t box) {
  std::uniform_int_distribution<std::int64_t> d(-box, box);
  GroupElem g(static_cast<size_t>(rank));
  for (auto& v : g) v = d(rng);
  return g;
}

AlgebraElement random_element(std::mt19937_64& rng, const Multiplier& mult, int fiber,
                              int support, std::int64_t box) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AlgebraElement f(mult, fiber);
  for (int s = 0; s < support; ++s) {
    Matrix m(fiber, fiber);
    for (Eigen::Index r = 0; r < fiber; ++r)
      for (Eigen::Index c = 0; c < fiber; ++c) m(r, c) = Complex(u(rng), u(rng));
    f.add_block(random_elem(rng, mult.rank(), box), m);
  }
  return f;
}

int cmd_validate_algebra(const RunContext& ctx) {
  const Json& sec = ctx.config.section("algebra");
  const int rank = sec.value("rank", 2);
  const int fiber = sec.value("fiber", 2);
  const int cases = sec.value("cases", 1000);
  const int max_support = sec.value("max_support", 6);
  Multiplier mult = Multiplier::trivial(rank);
  if (sec.contains("flux") && rank == 2)
    mult = Multiplier::antisymmetric_2d(sec["flux"].value("p", 0), sec["flux"].value("q", 1));

  std::mt19937_64 rng(ctx.config.seed);
  std::vector<std::array<GroupElem, 3>> triples;
  for (int i = 0; i < cases; ++i)
    triples.push_back({random_elem(rng, rank, 5), random_elem(rng, rank, 5),
                       random_elem(rng, rank, 5)});
  MultiplierReport mrep = validate_multiplier(mult, triples);

  double assoc = 0.0, delta_rel = 0.0, invol = 0.0, trace_defect = 0.0;
  for (int i = 0; i < cases / 10; ++i) {
    AlgebraElement f = random_element(rng, mult, fiber, max_support, 3);
    AlgebraElement g = random_element(rng, mult, fiber, max_support, 3);
    AlgebraElement h = random_element(rng, mult, fiber, max_support, 3);
    assoc = std::max(assoc, convolve(convolve(f, g), h).distance(convolve(f, convolve(g, h))));
    invol = std::max(invol, involute(convolve(f, g)).distance(convolve(involute(g), involute(f))));
    trace_defect = std::max(trace_defect, std::abs(trace_gamma(convolve(f, g)) -
                                                   trace_gamma(convolve(g, f))));
  }
  for (int i = 0; i < cases; ++i) {
    GroupElem g1 = random_elem(rng, rank, 6), g2 = random_elem(rng, rank, 6);
    AlgebraElement lhs = convolve(AlgebraElement::delta(mult, g1), AlgebraElement::delta(mult, g2));
    AlgebraElement rhs = AlgebraElement::delta(mult, group_add(g1, g2));
    rhs *= mult.sigma_bar(g1, g2);
    delta_rel = std::max(delta_rel, lhs.distance(rhs));
  }

  Json out = summary_base(ctx);
  out["multiplier"] = {{"pass", mrep.pass},
                       {"max_cocycle_defect", mrep.max_defect},
                       {"max_normalization_defect", mrep.max_norm_defect}};
  out["identities"] = {{"associativity", assoc},
                       {"involution_antimultiplicative", invol},
                       {"traciality", trace_defect},
                       {"delta_relations", delta_rel}};
  bool pass = mrep.pass && assoc < 1e-12 && invol < 1e-12 && trace_defect < 1e-12 &&
              delta_rel < 1e-12;
  out["pass"] = pass;
  write_json(ctx.path("validate_algebra.json"), out);
  return 0;
}

int cmd_pair_cocycle(const RunContext& ctx) {
  const Json& sec = ctx.config.section("cocycle");
  GroupCocycle c = load_cocycle_spec(sec.at("spec").dump());
  const int samples = sec.value("samples", 500);

  std::mt19937_64 rng(ctx.config.seed);
  int rank = 2;
  if (sec.at("spec").contains("v"))
    rank = static_cast<int>(sec["spec"]["v"].size());
  else if (sec.at("spec").contains("xi"))
    rank = static_cast<int>(sec["spec"]["xi"][0].size());
  else if (sec.at("spec").contains("rank"))
    rank = sec["spec"]["rank"].get<int>();

  std::vector<std::vector<GroupElem>> tuples;
  for (int i = 0; i < samples; ++i) {
    std::vector<GroupElem> t;
    for (int a = 0; a < c.degree + 1; ++a) t.push_back(random_elem(rng, rank, 6));
    tuples.push_back(std::move(t));
  }
  CocycleReport crep = verify_group_cocycle(c, tuples);

  Json out = summary_base(ctx);
  out["group_cocycle"] = {{"pass", crep.pass},
                          {"max_identity_defect", crep.max_identity_defect},
                          {"max_normalization_defect", crep.max_normalization_defect},
                          {"max_bound_violation", crep.max_bound_violation}};

  if (sec.contains("projection")) {
    const Json& pj = sec["projection"];
    std::string kind = pj.value("kind", "harper");
    if (kind == "harper") {
      std::int64_t p = pj.value("p", 1), q = pj.value("q", 3);
      int bands = pj.value("bands", 1);
      std::int64_t radius = pj.value("radius", 40);
      int kgrid = pj.value("kgrid", 96);
      AlgebraElement proj = harper_band_projection(p, q, bands, radius, kgrid);
      Complex raw = pair_with_projection_raw(c, proj);
      double chern_units = pair_with_projection(c, proj);
      double fhs = harper_band_chern(p, q, 0, bands - 1);
      out["pairing"] = {{"raw_re", raw.real()},
                        {"raw_im", raw.imag()},
                        {"chern_units", chern_units},
                        {"fhs_reference", fhs},
                        {"support", proj.support_size()}};
    } else if (kind == "delta_e") {
      Multiplier mult = Multiplier::antisymmetric_2d(pj.value("p", 0), pj.value("q", 1));
      int fiber = pj.value("bands", 1);
      Matrix m = Matrix::Identity(fiber, fiber);
      AlgebraElement proj = AlgebraElement::delta(mult, group_zero(2), m);
      Complex raw = pair_with_projection_raw(c, proj);
      out["pairing"] = {{"raw_re", raw.real()}, {"raw_im", raw.imag()},
                        {"trace_rank", trace_gamma(proj).real()}};
    } else {
      throw std::invalid_argument("config: cocycle.projection.kind must be harper|delta_e");
    }
  }
  write_json(ctx.path("pair_cocycle.json"), out);
  return 0;
}

int cmd_model_spectrum(const RunContext& ctx) {
  const Json& sec = ctx.config.section("model");
  std::vector<WellSpec> wells = wells_from_json(sec);
  double cutoff = sec.value("cutoff", 20.0);
  ModelSpectrum s = model_levels(wells, cutoff);
  std::vector<GapInterval> gaps = model_gaps(s);

  CsvWriter levels(ctx.path("model_levels.csv"), "level,multiplicity", ctx.hash);
  for (const auto& l : s.levels) levels.row({CsvWriter::num(l.value), CsvWriter::num(l.multiplicity)});
  CsvWriter gcsv(ctx.path("model_gaps.csv"), "a,b,count_below", ctx.hash);
  for (const auto& g : gaps)
    gcsv.row({CsvWriter::num(g.a), CsvWriter::num(g.b),
              CsvWriter::num(counting_function(s, g.midpoint()))});

  Json out = summary_base(ctx);
  out["levels"] = Json::array();
  for (const auto& l : s.levels) out["levels"].push_back({{"value", l.value}, {"multiplicity", l.multiplicity}});
  out["gap_count"] = gaps.size();
  out["complete_below"] = s.complete_below;
  write_json(ctx.path("model_spectrum.json"), out);
  return 0;
}

int cmd_gap_certify(const RunContext& ctx, const std::string& mu_sweep_flag) {
  const Json& sec = ctx.config.section("certify");
  double kappa = sec.value("kappa", 0.4);
  CutoffProfile cutoff(sec.value("radius_multiplier", 1.0));
  EstimatorProblem prob;
  prob.metric_sup = sec.value("metric_sup", 1.0);
  prob.c0 = sec.value("c0", 1.0);
  prob.lambda01 = sec.value("lambda01", 0.0);
  prob.lambda02 = sec.value("lambda02", 0.0);
  prob.flat = sec.value("flat", true);
  if (sec.contains("constants")) {
    prob.C_rho = sec["constants"].value("rho", 1.0);
    prob.C_beta = sec["constants"].value("beta", 1.0);
    prob.C_eps = sec["constants"].value("eps", 1.0);
  }

  GapInterval g1(0.0, 1.0);
  if (sec.contains("gap")) {
    g1 = GapInterval(sec["gap"].value("a", 0.0), sec["gap"].value("b", 1.0));
  } else if (sec.contains("model_gap_index")) {
    std::vector<WellSpec> wells = wells_from_json(ctx.config.section("model"));
    ModelSpectrum s = model_levels(wells, ctx.config.section("model").value("cutoff", 20.0));
    auto gaps = model_gaps(s);
    size_t idx = sec["model_gap_index"].get<size_t>();
    if (idx >= gaps.size()) throw std::invalid_argument("config: model_gap_index out of range");
    g1 = gaps[idx];
  } else {
    throw std::invalid_argument("config: certify needs 'gap' or 'model_gap_index'");
  }

  Json out = summary_base(ctx);
  out["gap_model_side"] = {{"a", g1.a}, {"b", g1.b}};
  out["kappa"] = kappa;

  // Sweep bounds: --mu-sweep A:B overrides the config.
  bool sweep = sec.contains("mu_sweep") || !mu_sweep_flag.empty();
  if (!sweep) {
    double mu = sec.value("mu", 0.02);
    CertificateParams p = estimate_parameters(mu, kappa, cutoff, prob);
    CertifyResult r = certify_gap(p, g1);
    out["mu"] = mu;
    out["params"] = {{"gamma1", p.gamma1}, {"gamma2", p.gamma2}, {"alpha1", p.alpha1},
                     {"alpha2", p.alpha2}, {"rho", p.rho},       {"beta1", p.beta1},
                     {"eps1", p.eps1},     {"lambda01", p.lambda01}, {"lambda02", p.lambda02}};
    if (r.ok()) {
      out["certified"] = true;
      out["interval"] = {{"a2", r.interval->a}, {"b2", r.interval->b}};
    } else {
      out["certified"] = false;
      out["reason"] = r.reason;
    }
    write_json(ctx.path("gap_certify.json"), out);
    return r.ok() ? 0 : 3;
  }

  double from = 1e-1, to = 1e-4;
  int per_decade = 4;
  if (sec.contains("mu_sweep")) {
    from = sec["mu_sweep"].value("from", from);
    to = sec["mu_sweep"].value("to", to);
    per_decade = sec["mu_sweep"].value("per_decade", per_decade);
  }
  if (!mu_sweep_flag.empty()) {
    auto colon = mu_sweep_flag.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--mu-sweep expects A:B");
    from = std::strtod(mu_sweep_flag.substr(0, colon).c_str(), nullptr);
    to = std::strtod(mu_sweep_flag.substr(colon + 1).c_str(), nullptr);
  }
  if (from < to) std::swap(from, to);

  CsvWriter table(ctx.path("gap_certify_sweep.csv"),
                  "mu,gamma,alpha,a2,b2,certified,reason", ctx.hash);
  int steps = static_cast<int>(std::round(std::log10(from / to) * per_decade));
  steps = std::max(steps, 1);
  Json rows = Json::array();
  double first_certified = -1.0;
  std::vector<double> log_mu, log_da;
  for (int i = 0; i <= steps; ++i) {
    double mu = from * std::pow(to / from, static_cast<double>(i) / steps);
    CertificateParams p = estimate_parameters(mu, kappa, cutoff, prob);
    double a2 = std::nan(""), b2 = std::nan("");
    std::string reason;
    bool ok = false;
    CertifyResult r = certify_gap(p, g1);
    if (p.alpha1 > g1.a + p.gamma1) a2 = a2_of(p, g1.a);
    if (r.ok()) {
      ok = true;
      b2 = r.interval->b;
      if (first_certified < 0) first_certified = mu;
    } else {
      reason = r.reason;
      if (r.reason == "b2 <= a2" || r.reason == "alpha2 <= b2 + gamma2") b2 = b2_of(p, g1.b);
    }
    if (std::isfinite(a2) && a2 > g1.a) {
      log_mu.push_back(std::log(mu));
      log_da.push_back(std::log(a2 - g1.a));
    }
    table.row({CsvWriter::num(mu), CsvWriter::num(p.gamma1), CsvWriter::num(p.alpha1),
               CsvWriter::num(a2), CsvWriter::num(b2), ok ? "1" : "0", reason});
    rows.push_back({{"mu", mu}, {"a2", a2}, {"b2", b2}, {"certified", ok}, {"reason", reason}});
  }
  // Least-squares log-log slope of a2 - a1 against mu.
  double slope = std::nan("");
  if (log_mu.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < log_mu.size(); ++i) {
      sx += log_mu[i];
      sy += log_da[i];
      sxx += log_mu[i] * log_mu[i];
      sxy += log_mu[i] * log_da[i];
    }
    double n = static_cast<double>(log_mu.size());
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  out["sweep"] = rows;
  out["first_certified_mu"] = first_certified;
  out["a2_minus_a1_loglog_slope"] = slope;
  out["expected_slope_flat"] = 1.0 - 2.0 * kappa;
  write_json(ctx.path("gap_certify.json"), out);
  return first_certified > 0 ? 0 : 3;
}

int cmd_simulate(const RunContext& ctx) {
  const Json& sec = ctx.config.section("simulate");
  LatticeConfig lat = lattice_from_json(sec, ctx.config.seed, ctx.config.threads);

  std::vector<WellSpec> wells;
  if (ctx.config.has("model"))
    wells = wells_from_json(ctx.config.section("model"));
  else
    for (const auto& w : lat.wells) wells.push_back(well_from_potential(lat, w));

  BandStructure bs = bloch_spectrum(lat);
  ModelSpectrum model =
      wells.empty() ? ModelSpectrum{} : model_levels(wells, lat.cutoff_energy);

  CsvWriter bands(ctx.path("bands.csv"),
                  lat.dimension == 1 ? "k_index,k1,band,energy" : "k_index,k1,k2,band,energy",
                  ctx.hash);
  for (size_t ki = 0; ki < bs.kpoints.size(); ++ki)
    for (size_t b = 0; b < bs.eigenvalues[ki].size(); ++b) {
      std::vector<std::string> cells = {CsvWriter::num(static_cast<long>(ki)),
                                        CsvWriter::num(bs.kpoints[ki][0])};
      if (lat.dimension == 2) cells.push_back(CsvWriter::num(bs.kpoints[ki][1]));
      cells.push_back(CsvWriter::num(static_cast<long>(b)));
      cells.push_back(CsvWriter::num(bs.eigenvalues[ki][b]));
      bands.row(cells);
    }

  CsvWriter ids(ctx.path("ids.csv"), "lambda,ids", ctx.hash);
  const int npts = 400;
  for (int i = 0; i <= npts; ++i) {
    double lam = lat.cutoff_energy * i / npts;
    ids.row({CsvWriter::num(lam), CsvWriter::num(bs.ids(lam))});
  }

  CsvWriter gaps(ctx.path("gaps.csv"), "a,b,ids_value,model_match", ctx.hash);
  for (const auto& g : bs.gaps) {
    double mid = g.midpoint();
    double idsv = mid <= bs.cutoff ? bs.ids(mid) : -1.0;
    long match = -1;
    if (!model.levels.empty() && mid <= model.cutoff) match = counting_function(model, mid);
    gaps.row({CsvWriter::num(g.a), CsvWriter::num(g.b), CsvWriter::num(idsv),
              CsvWriter::num(match)});
  }

  Json out = summary_base(ctx);
  out["gaps"] = Json::array();
  for (const auto& g : bs.gaps) out["gaps"].push_back({{"a", g.a}, {"b", g.b}});
  out["bands"] = bs.bands;

  if (sec.contains("mu_list") && !wells.empty()) {
    std::vector<double> mus = sec["mu_list"].get<std::vector<double>>();
    auto rows = gap_emergence_sweep(lat, mus, wells);
    CsvWriter sweep(ctx.path("sweep.csv"),
                    "mu,model_gap_index,model_a,model_b,hausdorff,ids_mid,model_count,localization",
                    ctx.hash);
    Json jrows = Json::array();
    for (const auto& r : rows) {
      Json jr;
      jr["mu"] = r.mu;
      jr["detected_gaps"] = Json::array();
      for (const auto& g : r.detected_gaps)
        jr["detected_gaps"].push_back({{"a", g.a}, {"b", g.b}});
      jr["band_centers"] = r.band_centers;
      jr["model_levels"] = r.model_level_values;
      jr["localization_norm"] = r.localization_norm;
      Json integers = Json::array();
      for (size_t gi = 0; gi < r.model_gaps.size(); ++gi) {
        sweep.row({CsvWriter::num(r.mu), CsvWriter::num(static_cast<long>(gi)),
                   CsvWriter::num(r.model_gaps[gi].a), CsvWriter::num(r.model_gaps[gi].b),
                   CsvWriter::num(r.hausdorff[gi]), CsvWriter::num(r.ids_at_gap_mid[gi]),
                   CsvWriter::num(r.model_count_at_mid[gi]),
                   CsvWriter::num(r.localization_norm)});
        integers.push_back({{"ids", r.ids_at_gap_mid[gi]}, {"count", r.model_count_at_mid[gi]}});
      }
      jr["gap_midpoint_checks"] = integers;
      jrows.push_back(jr);
    }
    out["sweep"] = jrows;
  }
  write_json(ctx.path("simulate.json"), out);
  return 0;
}

int cmd_hall(const RunContext& ctx) {
  const Json& sec = ctx.config.section("hall");
  LatticeConfig lat = lattice_from_json(sec, ctx.config.seed, ctx.config.threads);
  int sample_cells = sec.value("sample_cells", 8);
  int core_cells = sec.value("core_cells", 2);

  std::vector<double> mus = {lat.mu};
  if (sec.contains("mu_list")) mus = sec["mu_list"].get<std::vector<double>>();

  Json out = summary_base(ctx);
  CsvWriter csv(ctx.path("hall.csv"), "mu,lambda,chern_a,chern_b,agree,rank_per_fiber", ctx.hash);
  Json rows = Json::array();
  int exit_code = 0;
  std::string lambda_policy = "first_gap";
  if (sec.contains("lambda") && sec["lambda"].is_string())
    lambda_policy = sec["lambda"].get<std::string>();
  if (lambda_policy != "first_gap" && lambda_policy != "widest_gap" &&
      lambda_policy != "model_mid")
    throw std::invalid_argument("config: hall.lambda must be a number or "
                                "first_gap|widest_gap|model_mid");

  for (double mu : mus) {
    LatticeConfig c = lat;
    c.mu = mu;
    double lambda;
    if (sec.contains("lambda") && sec["lambda"].is_number()) {
      lambda = sec["lambda"].get<double>();
    } else {
      BandStructure bs = bloch_spectrum(c);
      if (bs.gaps.empty()) {
        rows.push_back({{"mu", mu}, {"error", "no gap detected below cutoff"}});
        exit_code = 3;
        continue;
      }
      if (lambda_policy == "widest_gap") {
        const GapInterval* best = &bs.gaps.front();
        for (const auto& g : bs.gaps)
          if (g.width() > best->width()) best = &g;
        lambda = best->midpoint();
      } else if (lambda_policy == "model_mid") {
        // Midpoint of the detected gap containing the first model gap's
        // midpoint (the semiclassical gap, not tunneling micro-gaps).
        std::vector<WellSpec> wells;
        for (const auto& w : c.wells) wells.push_back(well_from_potential(c, w));
        ModelSpectrum model = model_levels(wells, c.cutoff_energy);
        auto mgaps = model_gaps(model);
        if (mgaps.empty())
          throw std::invalid_argument("hall: model_mid needs a model gap below the cutoff");
        double target = mgaps.front().midpoint();
        const GapInterval* hit = nullptr;
        for (const auto& g : bs.gaps)
          if (g.contains(target)) hit = &g;
        if (!hit) {
          rows.push_back({{"mu", mu}, {"error", "no detected gap covers the model gap midpoint"}});
          exit_code = 3;
          continue;
        }
        lambda = hit->midpoint();
      } else {
        lambda = bs.gaps.front().midpoint();
      }
    }
    HallResult hr = hall_conductance(c, lambda, sample_cells, core_cells);
    csv.row({CsvWriter::num(mu), CsvWriter::num(hr.lambda), CsvWriter::num(hr.chern_curvature),
             CsvWriter::num(hr.chern_kubo), hr.methods_agree ? "1" : "0",
             CsvWriter::num(hr.rank_per_fiber)});
    rows.push_back({{"mu", mu},
                    {"lambda", hr.lambda},
                    {"chern_a", hr.chern_curvature},
                    {"chern_b", hr.chern_kubo},
                    {"agree", hr.methods_agree},
                    {"rank_per_fiber", hr.rank_per_fiber},
                    {"sample_cells", hr.sample_cells}});
  }
  out["results"] = rows;

  if (sec.contains("sum_rule")) {
    std::int64_t p = sec["sum_rule"].value("p", 1), q = sec["sum_rule"].value("q", 3);
    int kgrid = sec["sum_rule"].value("kgrid", 36);
    Json sums = Json::array();
    double total = 0.0;
    for (int b = 0; b < q; ++b) {
      double cb = harper_band_chern(p, q, b, b, kgrid);
      total += cb;
      sums.push_back(cb);
    }
    out["sum_rule"] = {{"band_cherns", sums}, {"total", total}};
  }
  write_json(ctx.path("hall.json"), out);
  return exit_code;
}

}  // namespace

int cli_run(int argc, const char* const* argv) {
  CLI::App app{"gapkit: twisted-algebra spectral toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mu_sweep;
  int seed = -1, threads = 0;
  app.add_option("--config", config_path, "configuration file (JSON)")->required();
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--threads", threads, "worker thread override");
  app.add_option("--mu-sweep", mu_sweep, "coupling sweep A:B (gap-certify)");

  auto* validate = app.add_subcommand("validate-algebra", "twisted-algebra identity suite");
  auto* pair = app.add_subcommand("pair-cocycle", "cocycle verification and projection pairing");
  auto* model = app.add_subcommand("model-spectrum", "model operator levels and gaps");
  auto* certify = app.add_subcommand("gap-certify", "gap certificate arithmetic");
  auto* simulate = app.add_subcommand("simulate", "lattice Bloch spectra, IDS and gaps");
  auto* hall = app.add_subcommand("hall", "Hall conductance of gap projections");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    RunContext ctx = make_context(config_path, out_dir, seed, threads);
    if (validate->parsed()) return cmd_validate_algebra(ctx);
    if (pair->parsed()) return cmd_pair_cocycle(ctx);
    if (model->parsed()) return cmd_model_spectrum(ctx);
    if (certify->parsed()) return cmd_gap_certify(ctx, mu_sweep);
    if (simulate->parsed()) return cmd_simulate(ctx);
    if (hall->parsed()) return cmd_hall(ctx);
  } catch (const std::invalid_argument& e) {
    Json err = {{"error", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  } catch (const std::exception& e) {
    Json err = {{"error", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 3;
  }
  return 0;
}

}  // namespace gapkit
