// Command line front end: generate measures, construct plans, solve,
// certify, and run the reproduction experiments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmot/certificate.hpp"
#include "mmot/constructors.hpp"
#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/json_io.hpp"
#include "mmot/measure.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver.hpp"

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

void emit(const std::string& out, const std::string& payload) {
  if (out.empty())
    std::cout << payload << "\n";
  else
    mmot::write_file(out, payload);
}

std::string stem_suffix(const std::string& out, const std::string& suffix) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return out + suffix;
  return out.substr(0, dot) + suffix + out.substr(dot);
}

mmot::DiscreteMeasure load_measure(const std::string& path) {
  const std::string text = mmot::read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw mmot::InvalidInput(path + ": " + e.what());
  }
  return mmot::measure_from_json(j);
}

mmot::SparsePlan load_plan(const std::string& path) {
  const std::string text = mmot::read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw mmot::InvalidInput(path + ": " + e.what());
  }
  return mmot::plan_from_json(j);
}

mmot::Box parse_box(const std::string& text) {
  mmot::Box box;
  std::stringstream axes(text);
  std::string axis;
  while (std::getline(axes, axis, 'x')) {
    const auto comma = axis.find(',');
    if (comma == std::string::npos)
      throw mmot::InvalidInput("box axis needs lo,hi: " + axis);
    box.lo.push_back(std::stod(axis.substr(0, comma)));
    box.hi.push_back(std::stod(axis.substr(comma + 1)));
  }
  if (box.lo.empty()) throw mmot::InvalidInput("empty box spec");
  return box;
}

// Equal-mass atomization of the combined counterexample measure with m
// atoms of mass 1/m: the center block holds m/3 of them, each of the four
// side blocks m/6, every block filled at sub-interval midpoints.
mmot::DiscreteMeasure gap_measure(int m) {
  if (m <= 0 || m % 6 != 0) throw mmot::InvalidInput("m must be a positive multiple of 6");
  std::vector<mmot::Point> pts;
  std::vector<double> w;
  auto fill = [&](double lo, double hi, int count) {
    for (int i = 0; i < count; ++i) {
      pts.push_back({lo + (hi - lo) * (2.0 * i + 1.0) / (2.0 * count)});
      w.push_back(1.0 / m);
    }
  };
  fill(0.0, 0.5, m / 3);
  for (int k = 1; k <= 2; ++k) {
    const double p = std::pow(3.0, k);
    fill(p, p + 0.5, m / 6);
    fill(-p - 1.0, -p, m / 6);
  }
  return mmot::DiscreteMeasure(1, std::move(pts), std::move(w));
}

double binned_l1_to_uniform(const mmot::DiscreteMeasure& mu, double lo, double hi, int bins) {
  std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double t = (mu.point(i)[0] - lo) / (hi - lo);
    int b = static_cast<int>(t * bins);
    b = std::clamp(b, 0, bins - 1);
    mass[static_cast<std::size_t>(b)] += mu.weight(i);
  }
  double err = 0.0;
  for (double v : mass) err += std::abs(v - 1.0 / bins);
  return err;
}

json plan_support_json(const mmot::SparsePlan& plan) {
  json arr = json::array();
  for (const auto& atom : plan.atoms())
    arr.push_back({{"idx", atom.idx}, {"mass", atom.mass}});
  return arr;
}

std::map<std::vector<std::size_t>, double> mass_map(const mmot::SparsePlan& plan) {
  std::map<std::vector<std::size_t>, double> out;
  for (const auto& atom : plan.atoms()) out[atom.idx] = atom.mass;
  return out;
}

// Max |mass difference| over the union of both supports.
double plan_mass_distance(const mmot::SparsePlan& a, const mmot::SparsePlan& b,
                          json* failing = nullptr) {
  const auto ma = mass_map(a);
  const auto mb = mass_map(b);
  double worst = 0.0;
  auto visit = [&](const std::vector<std::size_t>& idx, double va, double vb) {
    const double diff = std::abs(va - vb);
    if (failing && diff > 1e-9)
      failing->push_back({{"idx", idx}, {"got", va}, {"want", vb}});
    worst = std::max(worst, diff);
  };
  for (const auto& [idx, v] : ma) {
    const auto it = mb.find(idx);
    visit(idx, v, it == mb.end() ? 0.0 : it->second);
  }
  for (const auto& [idx, v] : mb)
    if (!ma.count(idx)) visit(idx, 0.0, v);
  return worst;
}

bool same_support(const mmot::SparsePlan& a, const mmot::SparsePlan& b) {
  auto keys = [](const mmot::SparsePlan& p) {
    std::vector<std::vector<std::size_t>> k;
    for (const auto& atom : p.atoms()) k.push_back(atom.idx);
    std::sort(k.begin(), k.end());
    return k;
  };
  return keys(a) == keys(b);
}

json environment_json() {
  return {{"tool", "mmot"}, {"version", "0.1.0"}, {"schema_version", kSchemaVersion}};
}

// --- subcommand configs -----------------------------------------------------

struct GenCfg {
  std::string preset;
  int d = 1;
  int n = 1;
  std::string box;
  std::string out;
};

int run_gen(const GenCfg& cfg) {
  if (cfg.preset == "counterexample") {
    const auto mu = mmot::build_counterexample_measure(cfg.d, cfg.n);
    emit(cfg.out, mmot::measure_to_json(mu).dump(2));
  } else if (cfg.preset == "counterexample-parts") {
    const auto parts = mmot::build_counterexample_parts(cfg.d, cfg.n);
    if (cfg.out.empty()) {
      json j = {{"c", mmot::measure_to_json(parts.mu_c)},
                {"r", mmot::measure_to_json(parts.mu_r)},
                {"l", mmot::measure_to_json(parts.mu_l)}};
      std::cout << j.dump(2) << "\n";
    } else {
      mmot::write_file(stem_suffix(cfg.out, "-c"), mmot::measure_to_json(parts.mu_c).dump(2));
      mmot::write_file(stem_suffix(cfg.out, "-r"), mmot::measure_to_json(parts.mu_r).dump(2));
      mmot::write_file(stem_suffix(cfg.out, "-l"), mmot::measure_to_json(parts.mu_l).dump(2));
    }
  } else {  // uniform-box
    if (cfg.box.empty()) throw mmot::InvalidInput("uniform-box needs --box lo,hi[xlo,hi...]");
    const mmot::Box box = parse_box(cfg.box);
    if (cfg.d != 1 && static_cast<std::size_t>(cfg.d) != box.lo.size())
      throw mmot::InvalidInput("--d does not match box dimension");
    emit(cfg.out, mmot::measure_to_json(mmot::discretize_uniform_box(box, cfg.n)).dump(2));
  }
  return 0;
}

struct ConstructCfg {
  std::string name;
  int d = 1;
  int n = 1;
  int N = 3;
  int depth = 8;
  int samples = 81;
  int resolution = 100;
  std::string mu1, mu2, measure;
  std::string out;
  std::string format = "json";
};

int run_construct(const ConstructCfg& cfg) {
  std::optional<mmot::SparsePlan> plan;
  json extra;
  if (cfg.name == "gamma0") {
    plan = mmot::gamma0(cfg.d, cfg.n);
  } else if (cfg.name == "gamma1") {
    plan = mmot::gamma1(cfg.d, cfg.n);
  } else if (cfg.name == "anti-monotone") {
    if (cfg.mu1.empty() || cfg.mu2.empty())
      throw mmot::InvalidInput("anti-monotone needs --mu1 and --mu2 measure files");
    plan = mmot::anti_monotone_plan(load_measure(cfg.mu1), load_measure(cfg.mu2));
  } else if (cfg.name == "fractal") {
    auto result = mmot::fractal_plan(cfg.N, cfg.d, cfg.samples, cfg.depth);
    extra["max_orbit_deviation"] = result.max_orbit_deviation;
    std::cerr << "max orbit deviation: " << result.max_orbit_deviation << "\n";
    plan = std::move(result.plan);
  } else if (cfg.name == "reflection") {
    if (cfg.measure.empty()) throw mmot::InvalidInput("reflection needs --measure");
    plan = mmot::reflection_plan(load_measure(cfg.measure), cfg.N);
  } else if (cfg.name == "fat") {
    plan = mmot::fat_plan(cfg.resolution);
    json l1 = json::array();
    for (std::size_t j = 0; j < plan->num_marginals(); ++j)
      l1.push_back(binned_l1_to_uniform(plan->marginal_ref(j), -1.0, 1.0, 20));
    extra["marginal_uniformity_l1"] = l1;
    std::cerr << "marginal uniformity L1 (20 bins): " << l1.dump() << "\n";
  } else {
    throw mmot::InvalidInput("unknown constructor: " + cfg.name);
  }

  const mmot::Certificate cert = mmot::hyperplane_certificate(*plan);
  json cert_json = mmot::certificate_to_json(cert);
  for (auto& [k, v] : extra.items()) cert_json[k] = v;

  if (cfg.out.empty()) {
    json combined = {{"certificate", cert_json}};
    combined["plan"] = cfg.format == "csv" ? json(mmot::plan_to_csv(*plan))
                                           : mmot::plan_to_json(*plan);
    std::cout << combined.dump(2) << "\n";
  } else {
    emit(cfg.out, cfg.format == "csv" ? mmot::plan_to_csv(*plan)
                                      : mmot::plan_to_json(*plan).dump(2));
    mmot::write_file(stem_suffix(cfg.out, ".cert"), cert_json.dump(2));
  }
  return 0;
}

struct SolveCfg {
  std::vector<std::string> measures;
  int N = 0;
  std::string cost = "repulsive";
  std::string method = "lp";
  double epsilon = 0.1;
  double tol = 1e-9;
  std::size_t max_iter = 10'000;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

int run_solve(const SolveCfg& cfg) {
  if (cfg.measures.empty()) throw mmot::InvalidInput("solve needs at least one --measure");
  json hashes = json::object();
  std::vector<mmot::DiscreteMeasure> measures;
  for (const auto& path : cfg.measures) {
    hashes[path] = mmot::content_hash(mmot::read_file(path));
    measures.push_back(load_measure(path));
  }
  if (cfg.N > 0 && measures.size() == 1)
    while (measures.size() < static_cast<std::size_t>(cfg.N)) measures.push_back(measures[0]);

  const mmot::CostSpec spec{mmot::cost_kind_from_name(cfg.cost),
                            static_cast<int>(measures.size()), measures[0].dim()};
  mmot::SolveReport report;
  if (cfg.method == "lp") {
    report = mmot::solve_lp(measures, spec);
  } else if (cfg.method == "sinkhorn") {
    mmot::SinkhornOptions opts;
    opts.epsilon = cfg.epsilon;
    opts.max_iter = cfg.max_iter;
    opts.tol = cfg.tol;
    report = mmot::solve_sinkhorn(measures, spec, opts);
  } else {
    throw mmot::InvalidInput("unknown method: " + cfg.method);
  }

  if (cfg.format == "csv") {
    if (!report.plan) throw mmot::InvalidInput("no plan to export as csv");
    emit(cfg.out, mmot::plan_to_csv(*report.plan));
    return 0;
  }
  json j = mmot::solve_report_to_json(report);
  j["parameters"] = {{"cost", cfg.cost}, {"method", cfg.method}, {"epsilon", cfg.epsilon},
                     {"tol", cfg.tol},   {"seed", cfg.seed},     {"N", measures.size()}};
  j["input_hashes"] = hashes;
  j["environment"] = environment_json();
  emit(cfg.out, j.dump(2));
  return 0;
}

struct CertifyCfg {
  std::string plan;
  double tol = -1.0;
  std::string out;
};

int run_certify(const CertifyCfg& cfg) {
  const std::string text = mmot::read_file(cfg.plan);
  const mmot::SparsePlan plan = load_plan(cfg.plan);
  json j = mmot::certificate_to_json(mmot::hyperplane_certificate(plan, cfg.tol));
  j["input_hashes"] = {{cfg.plan, mmot::content_hash(text)}};
  j["environment"] = environment_json();
  emit(cfg.out, j.dump(2));
  return 0;
}

struct ReproduceCfg {
  int d = 1;
  std::vector<int> n_list{1, 2, 4};
  double tol = 1e-9;
  std::string out;
};

int run_reproduce(const ReproduceCfg& cfg) {
  json report = {{"experiment", "reproduce-counterexample"},
                 {"parameters", {{"d", cfg.d}, {"n", cfg.n_list}, {"tol", cfg.tol}}},
                 {"environment", environment_json()},
                 {"results", json::array()}};
  bool ok = true;

  for (int n : cfg.n_list) {
    json entry = {{"n", n}};
    const auto parts = mmot::build_counterexample_parts(cfg.d, n);
    const std::vector<mmot::DiscreteMeasure> trio{parts.mu_c, parts.mu_r, parts.mu_l};
    const mmot::CostSpec spec{mmot::CostKind::Repulsive, 3, cfg.d};

    const mmot::SparsePlan g0 = mmot::gamma0(cfg.d, n);
    const mmot::SolveReport lp = mmot::solve_lp(trio, spec);
    entry["lp_value"] = lp.value;
    entry["gamma0_value"] = mmot::plan_cost(spec, g0);
    const bool support_ok = lp.plan && same_support(*lp.plan, g0);
    entry["support_matches_gamma0"] = support_ok;
    ok = ok && support_ok;
    if (!support_ok && lp.plan) entry["lp_support"] = plan_support_json(*lp.plan);

    // Symmetric instance on the combined measure.
    const auto mu = mmot::build_counterexample_measure(cfg.d, n);
    const mmot::SolveReport sym_lp = mmot::solve_lp({mu, mu, mu}, spec);
    entry["symmetric_lp_value"] = sym_lp.value;
    const mmot::SparsePlan symmetrized = mmot::symmetrize(*sym_lp.plan);
    const mmot::SparsePlan g1 = mmot::gamma1(cfg.d, n);
    json failing = json::array();
    const double dist = plan_mass_distance(symmetrized, g1, &failing);
    entry["gamma1_mass_distance"] = dist;
    const bool gamma1_ok = dist <= cfg.tol;
    ok = ok && gamma1_ok;
    if (!gamma1_ok) entry["failing_atoms"] = failing;

    json hist = json::array();
    bool any_graphical = false;
    for (std::size_t j = 0; j < 3; ++j) {
      const auto diag = mmot::graph_multiplicity(symmetrized, j);
      hist.push_back({{"coordinate", j},
                      {"multiplicity", diag.multiplicity},
                      {"max", diag.max_multiplicity},
                      {"min", diag.min_multiplicity},
                      {"is_graphical", diag.is_graphical}});
      any_graphical = any_graphical || diag.is_graphical;
    }
    entry["multiplicity_histograms"] = hist;
    entry["graphical_optimum_found"] = any_graphical;

    json inputs = json::object();
    inputs["mu_c"] = mmot::content_hash(mmot::measure_to_json(parts.mu_c).dump());
    inputs["mu_r"] = mmot::content_hash(mmot::measure_to_json(parts.mu_r).dump());
    inputs["mu_l"] = mmot::content_hash(mmot::measure_to_json(parts.mu_l).dump());
    entry["input_hashes"] = inputs;

    report["results"].push_back(entry);
  }
  report["passed"] = ok;
  emit(cfg.out, report.dump(2));
  if (!ok) throw mmot::SolverFailure("reproduction assertions failed; see report");
  return 0;
}

struct GapCfg {
  int d = 1;
  std::vector<int> m_list{6};
  std::string mode = "exhaustive";
  std::uint64_t seed = 0;
  std::string out;
};

int run_gap(const GapCfg& cfg) {
  if (cfg.d != 1) throw mmot::InvalidInput("the gap experiment is one-dimensional");
  json report = {{"experiment", "monge-gap"},
                 {"parameters",
                  {{"d", cfg.d}, {"m", cfg.m_list}, {"mode", cfg.mode}, {"seed", cfg.seed}}},
                 {"environment", environment_json()},
                 {"results", json::array()}};

  for (int m : cfg.m_list) {
    const auto mu = gap_measure(m);
    const mmot::CostSpec spec{mmot::CostKind::Repulsive, 3, 1};
    const mmot::SolveReport lp = mmot::solve_lp({mu, mu, mu}, spec);

    mmot::MongeOptions opts;
    opts.mode = cfg.mode == "local" ? mmot::MongeMode::Local : mmot::MongeMode::Exhaustive;
    opts.num_marginals = 3;
    opts.seed = cfg.seed;
    const mmot::MongeReport monge = mmot::monge_search(mu, spec, opts);

    json entry = {{"m", m},
                  {"lp_value", lp.value},
                  {"monge_value", monge.report.value},
                  {"monge_mode", monge.report.method},
                  {"gap", monge.report.value - lp.value},
                  {"monge_maps", monge.best.maps},
                  {"input_hash", mmot::content_hash(mmot::measure_to_json(mu).dump())}};
    report["results"].push_back(entry);
  }
  emit(cfg.out, report.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete multi-marginal optimal transport with harmonic costs"};
  app.require_subcommand(1);

  GenCfg gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate measure files");
  gen_cmd->add_option("--preset", gen.preset, "counterexample | counterexample-parts | uniform-box")
      ->required()
      ->check(CLI::IsMember({"counterexample", "counterexample-parts", "uniform-box"}));
  gen_cmd->add_option("--d", gen.d, "dimension");
  gen_cmd->add_option("--n", gen.n, "atoms per axis per block");
  gen_cmd->add_option("--box", gen.box, "box spec lo,hi[xlo,hi...]");
  gen_cmd->add_option("--out", gen.out, "output path (stdout if omitted)");

  ConstructCfg con;
  auto* con_cmd = app.add_subcommand("construct", "build a named plan and certify it");
  con_cmd->add_option("name", con.name, "gamma0 | gamma1 | anti-monotone | fractal | reflection | fat")
      ->required();
  con_cmd->add_option("--d", con.d, "dimension");
  con_cmd->add_option("--n", con.n, "atoms per axis per block");
  con_cmd->add_option("--N", con.N, "number of marginals / digit base");
  con_cmd->add_option("--K", con.depth, "digit depth for fractal");
  con_cmd->add_option("--samples", con.samples, "fractal grid samples per axis");
  con_cmd->add_option("--m", con.resolution, "fat plan quadrature resolution");
  con_cmd->add_option("--mu1", con.mu1, "first measure file (anti-monotone)");
  con_cmd->add_option("--mu2", con.mu2, "second measure file (anti-monotone)");
  con_cmd->add_option("--measure", con.measure, "measure file (reflection)");
  con_cmd->add_option("--out", con.out, "plan output path (stdout if omitted)");
  con_cmd->add_option("--format", con.format)->check(CLI::IsMember({"json", "csv"}));

  SolveCfg sol;
  auto* sol_cmd = app.add_subcommand("solve", "solve the Kantorovich problem");
  sol_cmd->add_option("--measure", sol.measures, "measure file (repeatable)")->required();
  sol_cmd->add_option("--N", sol.N, "replicate a single measure to N marginals");
  sol_cmd->add_option("--cost", sol.cost)->check(CLI::IsMember({"attractive", "repulsive", "sum-square"}));
  sol_cmd->add_option("--method", sol.method)->check(CLI::IsMember({"lp", "sinkhorn"}));
  sol_cmd->add_option("--epsilon", sol.epsilon, "entropic regularization strength");
  sol_cmd->add_option("--tol", sol.tol, "marginal violation target");
  sol_cmd->add_option("--max-iter", sol.max_iter);
  sol_cmd->add_option("--seed", sol.seed);
  sol_cmd->add_option("--out", sol.out, "report output path (stdout if omitted)");
  sol_cmd->add_option("--format", sol.format)->check(CLI::IsMember({"json", "csv"}));

  CertifyCfg cert;
  auto* cert_cmd = app.add_subcommand("certify", "hyperplane certificate for a plan file");
  cert_cmd->add_option("--plan", cert.plan, "plan JSON file")->required();
  cert_cmd->add_option("--tol", cert.tol, "deviation tolerance (default scale aware)");
  cert_cmd->add_option("--out", cert.out, "output path (stdout if omitted)");

  ReproduceCfg rep;
  auto* rep_cmd = app.add_subcommand("reproduce", "run the counterexample reproduction");
  rep_cmd->add_option("--d", rep.d, "dimension");
  rep_cmd->add_option("--n", rep.n_list, "resolutions (repeatable)");
  rep_cmd->add_option("--tol", rep.tol, "atom-mass tolerance");
  rep_cmd->add_option("--out", rep.out, "report output path (stdout if omitted)");

  GapCfg gap;
  auto* gap_cmd = app.add_subcommand("gap", "LP value vs best Monge value");
  gap_cmd->add_option("--d", gap.d, "dimension (must be 1)");
  gap_cmd->add_option("--m", gap.m_list, "total atom counts (multiples of 6, repeatable)");
  gap_cmd->add_option("--mode", gap.mode)->check(CLI::IsMember({"exhaustive", "local"}));
  gap_cmd->add_option("--seed", gap.seed);
  gap_cmd->add_option("--out", gap.out, "report output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*con_cmd) return run_construct(con);
    if (*sol_cmd) return run_solve(sol);
    if (*cert_cmd) return run_certify(cert);
    if (*rep_cmd) return run_reproduce(rep);
    if (*gap_cmd) return run_gap(gap);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
