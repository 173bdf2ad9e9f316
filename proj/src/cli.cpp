#include "wsq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "wsq/bellman_verify.hpp"
#include "wsq/brownian.hpp"
#include "wsq/dyadic_sim.hpp"
#include "wsq/errors.hpp"
#include "wsq/extrapolation.hpp"

namespace wsq::cli {

using report::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Section {
  json results = json::object();
  json timing = json::object();
  report::CsvTable table;
  bool passed = true;
};

void add_check(Section& s, json& list, const ScanReport& rep) {
  list.push_back(report::to_json(rep));
  s.timing[rep.check_name] = s.timing.value(rep.check_name, 0.0) + rep.wall_seconds;
  s.passed = s.passed && rep.passed();
}

void record(ScanReport& rep, double margin, double scale, std::vector<std::pair<std::string, double>> extra = {}) {
  ViolationRecord r;
  r.check_name = rep.check_name;
  r.margin = margin;
  r.scale = scale;
  r.sample_index = rep.samples;
  r.extra = std::move(extra);
  rep.add(r);
}

ScanReport new_report(const std::string& name, double tol, std::uint64_t seed = 0) {
  ScanReport r;
  r.check_name = name;
  r.tolerance = tol;
  r.seed = seed;
  return r;
}

std::vector<double> grid(double lo, double hi, int n) { return verify::linear_grid(lo, hi, n); }

// ---- verify -------------------------------------------------------------

Section run_verify(const RunConfig& cfg) {
  Section s;
  verify::ScanConfig scan;
  scan.c_list = cfg.c_list;
  scan.n_random = cfg.samples;
  scan.grid_nodes = cfg.grid_nodes;
  scan.seed = cfg.seed;
  scan.tolerance = cfg.tol;
  s.table.header = {"c", "check_index", "samples", "violations", "worst_relative_margin"};
  json per_c = json::array();
  for (double c : cfg.c_list) {
    const auto params = bellman::derive_params(c);
    json checks = json::array();
    const auto reports = verify::run_all_checks(params, scan, cfg.dirs);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      add_check(s, checks, reports[i]);
      s.table.rows.push_back({c, static_cast<double>(i), static_cast<double>(reports[i].samples),
                              static_cast<double>(reports[i].violations), reports[i].worst_relative_margin()});
    }
    per_c.push_back({{"c", c}, {"checks", checks}});
  }
  s.results["per_c"] = per_c;
  json extra = json::array();
  add_check(s, extra, verify::check_reduced_matrix_grid(1e-3));
  s.results["reduced_matrix"] = extra;
  return s;
}

// ---- constants ----------------------------------------------------------

json constants_json(const extrapolation::ConstantsReport& r) {
  json j = {{"p", r.p},
            {"c", r.c},
            {"d_pc", r.d_pc},
            {"m_norm_tight", r.m_norm_tight},
            {"m_norm_explicit", r.m_norm_explicit},
            {"K_p", r.K_p},
            {"exponent", r.exponent},
            {"L_W", r.L_W ? json(*r.L_W) : json(nullptr)},
            {"branches",
             {{"lower", r.branches.lower}, {"upper", r.branches.upper}, {"overlap", r.branches.overlap}}},
            {"norm",
             {{"tight", r.norm.tight},
              {"middle", r.norm.middle},
              {"explicit", r.norm.explicit_bound},
              {"naive_middle", r.norm.naive_middle}}}};
  return j;
}

Section run_constants(const RunConfig& cfg) {
  Section s;
  json table = json::array();
  s.table.header = {"p", "c", "d_pc", "K_p", "exponent", "m_norm_tight", "m_norm_explicit"};
  for (double p : cfg.p_list) {
    for (double c : cfg.c_list) {
      const auto r = extrapolation::constants_report(p, c);
      table.push_back(constants_json(r));
      s.table.rows.push_back({p, c, r.d_pc, r.K_p, r.exponent, r.m_norm_tight, r.m_norm_explicit});
    }
  }
  s.results["constants"] = table;
  json davis = json::array();
  for (double p : cfg.p_list) davis.push_back({{"p", p}, {"bound", extrapolation::davis_gamma_bound(p)}});
  s.results["davis_gamma_bound"] = davis;
  s.results["phi_at_1"] = extrapolation::phi_prefactor(1.0);
  s.results["upper_prefactor"] = extrapolation::upper_prefactor();
  json checks = json::array();
  add_check(s, checks, extrapolation::verify_prefactors(10000));
  const auto pg = grid(1.1, 10.0, 90);
  const auto cg = grid(1.0, 100.0, 100);
  add_check(s, checks, extrapolation::check_norm_chain(pg, cg));
  s.results["checks"] = checks;
  return s;
}

// ---- simulate -----------------------------------------------------------

Section run_simulate(const RunConfig& cfg) {
  Section s;
  dyadic::SuiteConfig suite;
  suite.trials = cfg.trials;
  suite.max_depth = cfg.depth;
  suite.seed = cfg.seed;
  json checks = json::array();
  add_check(s, checks, dyadic::check_rubio(suite));
  // Factorization around p0 = 3: p = 1 uses [W]_{A_1}, p = 2 the first form, p = 4 the second.
  for (double p : {1.0, 2.0, 4.0}) add_check(s, checks, dyadic::check_compose(suite, p, 3.0));
  for (double p : cfg.p_list) add_check(s, checks, dyadic::check_maximal_bound(suite, p));
  json main = json::array();
  constexpr int kBins = 20;
  s.table.header = {"p", "bin_lo", "bin_hi", "count"};
  for (double p : cfg.p_list) {
    const auto st = dyadic::test_main_inequality(p, cfg.trials, cfg.depth, cfg.seed);
    add_check(s, checks, st.report);
    main.push_back({{"p", st.p},
                    {"trials", st.trials},
                    {"skipped", st.skipped},
                    {"violations", st.violations},
                    {"max_ratio", st.max_ratio},
                    {"max_ratio_over_bound", st.max_ratio_over_bound},
                    {"max_char", st.max_char},
                    {"unweighted_max_ratio", st.unweighted_max_ratio}});
    // Histogram of ratio / (K_p [W]^exponent) over [0, max].
    const double kp = extrapolation::kp_constant(p);
    const double ex = extrapolation::ap_exponent(p);
    const double top = st.max_ratio_over_bound > 0.0 ? st.max_ratio_over_bound : 1.0;
    std::vector<double> counts(kBins, 0.0);
    for (std::size_t i = 0; i < st.ratios.size(); ++i) {
      if (std::isnan(st.ratios[i])) continue;
      const double q = st.ratios[i] / (kp * std::pow(st.chars[i], ex));
      const int b = std::min(kBins - 1, static_cast<int>(q / top * kBins));
      counts[static_cast<std::size_t>(b)] += 1.0;
    }
    for (int b = 0; b < kBins; ++b) {
      s.table.rows.push_back({p, top * b / kBins, top * (b + 1) / kBins, counts[static_cast<std::size_t>(b)]});
    }
  }
  s.results["main_inequality"] = main;
  json drift = json::array();
  for (double c : cfg.c_list) {
    dyadic::DriftConfig dc;
    dc.c = c;
    dc.seed = cfg.seed;
    dc.trials = std::max<std::uint64_t>(cfg.trials, 1000);
    const auto st = dyadic::bellman_drift_probe(dc);
    add_check(s, checks, st.report);
    drift.push_back({{"c", c},
                     {"initial", st.mean.front()},
                     {"terminal", st.mean.back()},
                     {"max_positive_drift", st.max_positive_drift},
                     {"max_relative_positive_drift", st.max_relative_positive_drift},
                     {"frozen_fraction", st.total_steps ? static_cast<double>(st.frozen_steps) / st.total_steps : 0.0},
                     {"terminal_functional", st.terminal_functional},
                     {"terminal_functional_se", st.terminal_functional_se}});
  }
  s.results["drift"] = drift;
  s.results["checks"] = checks;
  return s;
}

// ---- circle -------------------------------------------------------------

std::vector<circle::CorpusEntry> load_corpus(const RunConfig& cfg) {
  if (cfg.corpus.empty()) return circle::builtin_corpus();
  std::ifstream in(cfg.corpus);
  if (!in) throw UsageError("cannot read corpus file " + cfg.corpus);
  std::stringstream ss;
  ss << in.rdbuf();
  return circle::parse_corpus(ss.str());
}

json brownian_json(const circle::BrownianComparison& b) {
  return {{"paths", b.mc.paths},
          {"estimate", b.mc.estimate},
          {"std_error", b.mc.std_error},
          {"mean_exit_time", b.mc.mean_exit_time},
          {"exit_time_se", b.mc.exit_time_se},
          {"quadrature_average", b.average},
          {"difference", b.difference},
          {"passed", b.passed()}};
}

circle::BrownianConfig brownian_config(const RunConfig& cfg) {
  circle::BrownianConfig bc;
  bc.paths = cfg.paths;
  bc.dt = cfg.dt;
  bc.seed = cfg.seed;
  return bc;
}

Section circle_gstar_avg(const RunConfig& cfg) {
  Section s;
  const auto t0 = Clock::now();
  const auto f = circle::closed_form(cfg.f);
  const auto spec = circle::gstar_spectrum(f, cfg.quad);
  const double avg = 2.0 * spec.moments[0].real();
  const double exact = 2.0 * circle::gstar_spectrum_exact(f).moments[0].real();
  s.results = {{"f", cfg.f}, {"gstar_average", avg}, {"error_estimate", spec.error_estimate}, {"exact_moment", exact}};
  // Asserted: the reported error covers the quadrature and stays within 1%.
  s.passed = std::abs(avg - exact) <= spec.error_estimate + 1e-12 && spec.error_estimate <= 0.01 * std::abs(avg) + 1e-12;
  s.timing["quadrature"] = seconds_since(t0);
  if (cfg.paths > 0) {
    const auto t1 = Clock::now();
    const auto b = circle::compare_with_gstar(f, brownian_config(cfg), cfg.quad);
    s.results["brownian"] = brownian_json(b);
    s.passed = s.passed && b.passed();
    s.timing["brownian"] = seconds_since(t1);
  }
  return s;
}

Section circle_profile(const RunConfig& cfg) {
  Section s;
  const auto t0 = Clock::now();
  const auto f = circle::closed_form(cfg.f);
  const auto spec = circle::gstar_spectrum(f, cfg.quad);
  const int n = cfg.quad.angular_nodes;
  struct Row {
    double gs, g, area;
  };
  const auto rows = map_indices<Row>(Exec::OpenMP, static_cast<std::size_t>(n), [&](std::size_t l) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(l) / n;
    return Row{std::sqrt(std::max(0.0, spec.gstar2(th))), circle::lp_g(f, th), circle::lusin_area(f, th, cfg.alpha)};
  });
  s.table.header = {"theta", "gstar", "g", "lusin_area"};
  double max_area = 0.0, max_g = 0.0;
  for (int l = 0; l < n; ++l) {
    const Row& r = rows[static_cast<std::size_t>(l)];
    s.table.rows.push_back({2.0 * std::numbers::pi * l / n, r.gs, r.g, r.area});
    if (r.gs > 0.0) {
      max_area = std::max(max_area, r.area / r.gs);
      max_g = std::max(max_g, r.g / r.gs);
    }
  }
  s.results = {{"f", cfg.f}, {"alpha", cfg.alpha}, {"nodes", n}, {"max_area_ratio", max_area}, {"max_g_ratio", max_g},
               {"error_estimate", spec.error_estimate}};
  s.passed = std::isfinite(max_area) && std::isfinite(max_g);
  s.timing["profile"] = seconds_since(t0);
  return s;
}

Section circle_suite(const RunConfig& cfg) {
  Section s;
  json checks = json::array();
  const auto corpus = load_corpus(cfg);

  auto t0 = Clock::now();
  auto ineq = new_report("circle.gstar_inequality", 0.0);
  json entries = json::array();
  s.table.header = {"entry", "p", "lhs", "rhs", "ratio", "characteristic"};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (double p : cfg.p_list) {
      const auto r = circle::verify_gstar_inequality(corpus[i].f, corpus[i].w, p, cfg.quad, cfg.ap_grid, Exec::OpenMP);
      record(ineq, r.lhs - r.rhs, std::max(r.rhs, 1e-300), {{"entry", static_cast<double>(i)}, {"p", p}});
      entries.push_back({{"f", corpus[i].name}, {"w", corpus[i].weight_name}, {"p", p}, {"lhs", r.lhs},
                         {"f_norm", r.f_norm}, {"characteristic", r.characteristic}, {"K_p", r.K_p},
                         {"rhs", r.rhs}, {"ratio", r.ratio}});
      s.table.rows.push_back({static_cast<double>(i), p, r.lhs, r.rhs, r.ratio, r.characteristic});
    }
  }
  ineq.wall_seconds = seconds_since(t0);
  add_check(s, checks, ineq);
  s.results["gstar_inequality"] = entries;

  t0 = Clock::now();
  auto unit_ap = new_report("circle.ap_unit_weight", 0.0);
  for (double p : cfg.p_list) {
    const double v = circle::poisson_ap_characteristic(circle::CircleFunction::constant(1.0), p, cfg.ap_grid,
                                                       Exec::OpenMP).value;
    record(unit_ap, std::abs(v - 1.0), 1.0, {{"p", p}});
  }
  unit_ap.wall_seconds = seconds_since(t0);
  add_check(s, checks, unit_ap);

  t0 = Clock::now();
  const auto cosf = circle::closed_form("cos");
  auto g_cos = new_report("circle.g_cos_squared", 1e-6);
  for (int l = 0; l < 16; ++l) {
    const double th = 2.0 * std::numbers::pi * l / 16;
    const double g = circle::lp_g(cosf, th);
    record(g_cos, std::abs(g * g - 0.5), 1.0, {{"theta", th}});
  }
  g_cos.wall_seconds = seconds_since(t0);
  add_check(s, checks, g_cos);

  t0 = Clock::now();
  auto avg = new_report("circle.gstar_average_cos", 0.01);
  const double a = circle::gstar_average(cosf, cfg.quad);
  record(avg, std::abs(a - 0.5), 0.5);
  avg.wall_seconds = seconds_since(t0);
  add_check(s, checks, avg);
  s.results["gstar_average_cos"] = a;

  t0 = Clock::now();
  std::vector<double> thetas;
  for (int l = 0; l < 64; ++l) thetas.push_back(2.0 * std::numbers::pi * l / 64);
  auto dom = new_report("circle.domination_finite", 0.0);
  json probes = json::array();
  std::vector<std::string> seen;
  for (const auto& e : corpus) {
    if (std::find(seen.begin(), seen.end(), e.name) != seen.end()) continue;
    seen.push_back(e.name);
    const auto d = circle::pointwise_domination_probe(e.f, cfg.alpha, thetas, cfg.quad, Exec::OpenMP);
    const bool finite = std::isfinite(d.max_area_ratio) && std::isfinite(d.max_g_ratio);
    record(dom, finite ? -1.0 : 1.0, 1.0);
    probes.push_back({{"f", e.name}, {"alpha", cfg.alpha}, {"max_area_ratio", d.max_area_ratio},
                      {"max_g_ratio", d.max_g_ratio}});
  }
  dom.wall_seconds = seconds_since(t0);
  add_check(s, checks, dom);
  s.results["domination"] = probes;

  if (cfg.paths > 0) {
    t0 = Clock::now();
    auto bm = new_report("circle.brownian_vs_gstar", 0.0, cfg.seed);
    const auto b = circle::compare_with_gstar(circle::closed_form(cfg.f), brownian_config(cfg), cfg.quad);
    record(bm, std::abs(b.difference) - 3.0 * b.mc.std_error - b.quad_error, std::max(b.average, 1e-300));
    bm.wall_seconds = seconds_since(t0);
    add_check(s, checks, bm);
    s.results["brownian"] = brownian_json(b);
  }
  s.results["checks"] = checks;
  return s;
}

Section run_circle(const RunConfig& cfg) {
  if (cfg.action == "gstar-avg") return circle_gstar_avg(cfg);
  if (cfg.action == "profile") return circle_profile(cfg);
  if (cfg.action == "suite") return circle_suite(cfg);
  throw UsageError("unknown circle action: " + cfg.action);
}

}  // namespace

json to_json(const RunConfig& cfg) {
  return {{"subcommand", cfg.subcommand},
          {"action", cfg.action},
          {"c", cfg.c_list},
          {"p", cfg.p_list},
          {"samples", cfg.samples},
          {"grid_nodes", cfg.grid_nodes},
          {"dirs", cfg.dirs},
          {"depth", cfg.depth},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"tol", cfg.tol},
          {"quadrature",
           {{"radial_nodes", cfg.quad.radial_nodes},
            {"angular_nodes", cfg.quad.angular_nodes},
            {"boundary_cutoff", cfg.quad.boundary_cutoff}}},
          {"ap_grid",
           {{"radial", cfg.ap_grid.radial}, {"angular", cfg.ap_grid.angular}, {"dft_samples", cfg.ap_grid.dft_samples}}},
          {"paths", cfg.paths},
          {"dt", cfg.dt},
          {"alpha", cfg.alpha},
          {"f", cfg.f},
          {"corpus", cfg.corpus},
          {"out", cfg.out},
          {"csv", cfg.csv}};
}

RunResult execute(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  json results = json::object();
  json timing = json::object();
  RunResult out;
  bool passed = true;
  auto run_section = [&](const std::string& name, Section (*fn)(const RunConfig&)) {
    Section s = fn(cfg);
    results[name] = std::move(s.results);
    results[name]["passed"] = s.passed;
    timing[name] = std::move(s.timing);
    passed = passed && s.passed;
    if (out.table.header.empty()) out.table = std::move(s.table);
  };
  if (cfg.subcommand == "verify" || cfg.subcommand == "all") run_section("verify", run_verify);
  if (cfg.subcommand == "constants" || cfg.subcommand == "all") run_section("constants", run_constants);
  if (cfg.subcommand == "simulate" || cfg.subcommand == "all") run_section("simulate", run_simulate);
  if (cfg.subcommand == "circle" || cfg.subcommand == "all") run_section("circle", run_circle);
  if (results.empty()) throw UsageError("unknown subcommand: " + cfg.subcommand);
  results["passed"] = passed;
  timing["total_seconds"] = seconds_since(t0);
  out.document = report::envelope(to_json(cfg), results, timing);
  out.exit_code = passed ? kPass : kViolation;
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Certification scans, constants and simulations for weighted square-function bounds", "wsq"};
  app.set_version_flag("--version", report::code_version());
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.add_option("--c", cfg.c_list, "values of c (comma separated)")->delimiter(',');
  app.add_option("--p", cfg.p_list, "exponents p (comma separated)")->delimiter(',');
  app.add_option("--samples", cfg.samples, "random Bellman samples per region");
  app.add_option("--grid-nodes", cfg.grid_nodes, "structured grid nodes per coordinate")->check(CLI::Range(2, 64));
  app.add_option("--dirs", cfg.dirs, "random directions per concavity sample");
  app.add_option("--depth", cfg.depth, "dyadic tree depth")->check(CLI::Range(1, 20));
  app.add_option("--trials", cfg.trials, "random instances per dyadic check");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--tol", cfg.tol, "relative tolerance of the Bellman scans");
  app.add_option("--radial-nodes", cfg.quad.radial_nodes, "radial quadrature nodes")->check(CLI::Range(4, 1 << 22));
  app.add_option("--angular-nodes", cfg.quad.angular_nodes, "angular nodes on the circle")->check(CLI::Range(4, 1 << 20));
  app.add_option("--cutoff", cfg.quad.boundary_cutoff, "radial boundary cutoff");
  app.add_option("--ap-radial", cfg.ap_grid.radial, "radial nodes of the A_p grid")->check(CLI::Range(2, 1 << 16));
  app.add_option("--ap-angular", cfg.ap_grid.angular, "angular nodes of the A_p grid")->check(CLI::Range(2, 1 << 16));
  app.add_option("--paths", cfg.paths, "Brownian paths (0 skips the Monte Carlo)");
  app.add_option("--dt", cfg.dt, "Brownian time step");
  app.add_option("--alpha", cfg.alpha, "Stoltz aperture in (0, 1)");
  app.add_option("--f", cfg.f, "closed-form function tag");
  app.add_option("--corpus", cfg.corpus, "corpus JSON file");
  app.add_option("--out", cfg.out, "JSON report path (default: stdout)");
  app.add_option("--csv", cfg.csv, "CSV table path");
  for (const char* name : {"verify", "constants", "simulate", "all"}) {
    app.add_subcommand(name, std::string("run the ") + name + " suite");
  }
  auto* circ = app.add_subcommand("circle", "circle-side operators");
  circ->add_option("action", cfg.action, "suite | gstar-avg | profile")
      ->check(CLI::IsMember({"suite", "gstar-avg", "profile"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion& e) {
    out << report::code_version() << "\n";
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    const RunResult result = execute(cfg);
    const std::string text = report::dump(result.document);
    if (cfg.out.empty()) {
      out << text;
    } else {
      report::write_file(cfg.out, text);
      out << cfg.subcommand << ": " << (result.exit_code == kPass ? "pass" : "violations") << " -> " << cfg.out << "\n";
    }
    if (!cfg.csv.empty()) {
      if (result.table.header.empty()) throw UsageError("this subcommand emits no CSV table");
      report::write_file(cfg.csv, report::to_csv(result.table));
    }
    return result.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace wsq::cli
