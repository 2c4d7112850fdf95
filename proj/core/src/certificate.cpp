#include "mmot/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmot/errors.hpp"

namespace mmot {

std::string verdict_name(Verdict v) {
  return v == Verdict::CertifiedOptimal ? "certified_optimal" : "gap_reported";
}

double default_certificate_tolerance(const SparsePlan& plan) {
  const int d = plan.marginal_ref(0).dim();
  const std::size_t n = plan.num_marginals();
  std::vector<double> lo(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& p : plan.marginal_ref(j).points()) {
      for (int a = 0; a < d; ++a) {
        lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], p[a]);
        hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], p[a]);
      }
    }
  }
  double diam2 = 0.0;
  for (int a = 0; a < d; ++a) {
    const double e = hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
    diam2 += e * e;
  }
  return 1e-9 * (1.0 + diam2);
}

double jensen_bound(const std::vector<DiscreteMeasure>& measures) {
  const int d = measures.front().dim();
  Point k(static_cast<std::size_t>(d), 0.0);
  for (const auto& mu : measures) {
    const Moments m = moments(mu);
    for (int a = 0; a < d; ++a) k[static_cast<std::size_t>(a)] += m.mean[static_cast<std::size_t>(a)];
  }
  double bound = 0.0;
  for (double v : k) bound += v * v;
  return bound;
}

Certificate hyperplane_certificate(const SparsePlan& plan, double tol) {
  const int d = plan.marginal_ref(0).dim();
  const std::size_t n = plan.num_marginals();

  Certificate cert;
  cert.k.assign(static_cast<std::size_t>(d), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const Moments m = moments(plan.marginal_ref(j));
    for (int a = 0; a < d; ++a) cert.k[static_cast<std::size_t>(a)] += m.mean[static_cast<std::size_t>(a)];
  }
  for (double v : cert.k) cert.jensen_bound += v * v;

  CostSpec sum_square{CostKind::SumSquare, static_cast<int>(n), d};
  for (std::size_t a = 0; a < plan.atoms().size(); ++a) {
    const std::vector<double> tuple = plan.coords(a);
    double dev2 = 0.0;
    for (int c = 0; c < d; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += tuple[j * static_cast<std::size_t>(d) + c];
      const double dv = s - cert.k[static_cast<std::size_t>(c)];
      dev2 += dv * dv;
    }
    cert.max_deviation = std::max(cert.max_deviation, std::sqrt(dev2));
    cert.plan_sum_square_cost += plan.atoms()[a].mass * eval_cost(sum_square, tuple);
  }

  cert.gap = cert.plan_sum_square_cost - cert.jensen_bound;
  cert.tolerance = tol < 0.0 ? default_certificate_tolerance(plan) : tol;
  cert.verdict = cert.max_deviation <= cert.tolerance ? Verdict::CertifiedOptimal
                                                      : Verdict::GapReported;
  return cert;
}

double optimality_gap(const SparsePlan& plan, const CostSpec& spec) {
  if (spec.kind == CostKind::Attractive)
    throw Unsupported("no hyperplane certificate for the attractive cost");
  CostSpec sum_square{CostKind::SumSquare, spec.num_marginals, spec.dim};
  return plan_cost(sum_square, plan) - jensen_bound(plan.marginals());
}

}  // namespace mmot
