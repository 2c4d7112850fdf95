#include "mmot/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "mmot/errors.hpp"

namespace mmot {

using nlohmann::json;

json measure_to_json(const DiscreteMeasure& mu) {
  json j;
  j["d"] = mu.dim();
  j["points"] = mu.points();
  j["weights"] = mu.weights();
  return j;
}

DiscreteMeasure measure_from_json(const json& j) {
  if (!j.contains("d") || !j.contains("points") || !j.contains("weights"))
    throw InvalidInput("measure JSON needs d, points and weights");
  const int d = j.at("d").get<int>();
  auto points = j.at("points").get<std::vector<Point>>();
  auto weights = j.at("weights").get<std::vector<double>>();
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidInput("measure weights sum to " + std::to_string(total));
  // Normalize the residue so the 1e-12 construction invariant holds.
  for (double& w : weights) w /= total;
  return DiscreteMeasure(d, std::move(points), std::move(weights));
}

json plan_to_json(const SparsePlan& plan) {
  json j;
  j["N"] = plan.num_marginals();
  j["marginals"] = json::array();
  for (const auto& mu : plan.marginals()) j["marginals"].push_back(measure_to_json(mu));
  j["atoms"] = json::array();
  for (const auto& atom : plan.atoms())
    j["atoms"].push_back({{"idx", atom.idx}, {"mass", atom.mass}});
  return j;
}

SparsePlan plan_from_json(const json& j) {
  if (!j.contains("N") || !j.contains("marginals") || !j.contains("atoms"))
    throw InvalidInput("plan JSON needs N, marginals and atoms");
  std::vector<DiscreteMeasure> marginals;
  for (const auto& m : j.at("marginals")) marginals.push_back(measure_from_json(m));
  if (marginals.size() != j.at("N").get<std::size_t>())
    throw InvalidInput("plan JSON marginal count does not match N");
  std::vector<PlanAtom> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.push_back({a.at("idx").get<std::vector<std::size_t>>(), a.at("mass").get<double>()});
  return SparsePlan(std::move(marginals), std::move(atoms));
}

json certificate_to_json(const Certificate& cert) {
  json j;
  j["k"] = cert.k;
  j["max_deviation"] = cert.max_deviation;
  j["jensen_bound"] = cert.jensen_bound;
  j["plan_sum_square_cost"] = cert.plan_sum_square_cost;
  j["gap"] = cert.gap;
  j["verdict"] = verdict_name(cert.verdict);
  j["tolerance"] = cert.tolerance;
  return j;
}

json solve_report_to_json(const SolveReport& report) {
  json j;
  j["value"] = report.value;
  j["method"] = report.method;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["residuals"] = {{"marginal_violation", report.residuals.marginal_violation}};
  if (report.residuals.duality_gap)
    j["residuals"]["duality_gap"] = *report.residuals.duality_gap;
  j["wall_seconds"] = report.wall_seconds;
  if (report.plan) j["plan"] = plan_to_json(*report.plan);
  return j;
}

std::string plan_to_csv(const SparsePlan& plan) {
  std::ostringstream out;
  out.precision(17);
  const std::size_t n = plan.num_marginals();
  const int d = plan.marginal_ref(0).dim();
  for (std::size_t j = 0; j < n; ++j) out << "i" << j + 1 << ",";
  for (std::size_t j = 0; j < n; ++j)
    for (int a = 0; a < d; ++a) out << "x" << j + 1 << "_" << a + 1 << ",";
  out << "mass\n";
  for (std::size_t a = 0; a < plan.atoms().size(); ++a) {
    const auto& atom = plan.atoms()[a];
    for (std::size_t j = 0; j < n; ++j) out << atom.idx[j] << ",";
    for (double c : plan.coords(a)) out << c << ",";
    out << atom.mass << "\n";
  }
  return out.str();
}

CostKind cost_kind_from_name(const std::string& name) {
  if (name == "attractive") return CostKind::Attractive;
  if (name == "repulsive") return CostKind::Repulsive;
  if (name == "sum-square" || name == "sum_square") return CostKind::SumSquare;
  throw InvalidInput("unknown cost kind: " + name);
}

std::string cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::Attractive: return "attractive";
    case CostKind::Repulsive: return "repulsive";
    case CostKind::SumSquare: return "sum-square";
  }
  return "unknown";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << contents;
  if (!out) throw std::ios_base::failure("short write to " + path);
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "fnv1a:" << std::hex << h;
  return out.str();
}

}  // namespace mmot
