#include "core/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace rvelab {

namespace {

Eigen::Vector3d mean_of(const std::vector<Eigen::Vector3d>& v) {
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  for (const auto& x : v) m += x;
  return v.empty() ? m : Eigen::Vector3d(m / static_cast<double>(v.size()));
}

} // namespace

Eigen::Vector3d volume_average_stress(const std::vector<Eigen::Vector3d>& stress) {
  return mean_of(stress);
}

Eigen::Vector3d volume_average_strain(const std::vector<Eigen::Vector3d>& strain) {
  return mean_of(strain);
}

double hill_mandel_residual(const std::vector<Eigen::Vector3d>& stress,
                            const std::vector<Eigen::Vector3d>& strain) {
  if (stress.size() != strain.size() || stress.empty())
    throw InvalidSpecError("hill_mandel_residual: mismatched fields");
  double mean_product = 0.0;
  for (std::size_t e = 0; e < stress.size(); ++e) mean_product += stress[e].dot(strain[e]);
  mean_product /= static_cast<double>(stress.size());
  const double product_of_means = mean_of(stress).dot(mean_of(strain));
  if (product_of_means == 0.0)
    throw DegenerateError("hill_mandel_residual undefined at zero load");
  return std::abs(mean_product - product_of_means) / std::abs(product_of_means);
}

FdCurve curve_from_trace(const SolveTrace& trace, const CurveMetadata& meta) {
  FdCurve c;
  c.meta = meta;
  c.d.reserve(trace.rows.size());
  c.F.reserve(trace.rows.size());
  for (const auto& r : trace.rows) {
    c.d.push_back(r.applied_u);
    c.F.push_back(r.reaction_sum);
  }
  return c;
}

std::optional<double> detect_initiation(const SolveTrace& trace, double domain_length) {
  for (const auto& r : trace.rows)
    if (r.n_damaged > 0) return r.applied_u / domain_length;
  return std::nullopt;
}

std::optional<double> detect_failure(const FdCurve& curve, double domain_length, double f_fail) {
  if (curve.F.empty()) return std::nullopt;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < curve.F.size(); ++i)
    if (curve.F[i] > curve.F[peak]) peak = i;
  const double level = f_fail * curve.F[peak];
  for (std::size_t i = peak + 1; i < curve.F.size(); ++i)
    if (curve.F[i] <= level) return curve.d[i] / domain_length;
  return std::nullopt;
}

double elastic_slope(const FdCurve& curve, std::optional<double> initiation_displacement) {
  double num = 0.0, den = 0.0;
  const double cutoff = initiation_displacement ? 0.8 * *initiation_displacement
                                                : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.d.size(); ++i) {
    if (curve.d[i] > cutoff) break;
    num += curve.F[i] * curve.d[i];
    den += curve.d[i] * curve.d[i];
  }
  if (den == 0.0) {
    // No sample below the cutoff; fall back to the first point.
    if (curve.d.empty() || curve.d.front() == 0.0)
      throw InvalidSpecError("elastic_slope: curve has no usable samples");
    return curve.F.front() / curve.d.front();
  }
  return num / den;
}

CurveMetrics curve_metrics(const SolveTrace& trace, const FdCurve& curve, double domain_length,
                           double f_fail) {
  CurveMetrics m;
  m.eps0_rve = detect_initiation(trace, domain_length);
  m.epsf_rve = detect_failure(curve, domain_length, f_fail);
  m.peak_force = curve.F.empty() ? 0.0 : *std::max_element(curve.F.begin(), curve.F.end());
  m.elastic_slope =
      elastic_slope(curve, m.eps0_rve ? std::optional<double>(*m.eps0_rve * domain_length)
                                      : std::nullopt);
  double area = 0.0;
  double pd = 0.0, pf = 0.0;
  for (std::size_t i = 0; i < curve.d.size(); ++i) {
    area += 0.5 * (pf + curve.F[i]) * (curve.d[i] - pd);
    pd = curve.d[i];
    pf = curve.F[i];
  }
  m.dissipated_energy = area;
  return m;
}

double rod_stress_analytic(double u, double L, double lambda, double E, double H, double eps0) {
  if (!(L > 0.0) || !(lambda > 0.0) || !(E > 0.0) || !(H > 0.0) || !(eps0 > 0.0))
    throw InvalidSpecError("rod_stress_analytic: parameters must be positive");
  const double g = (lambda / L) * (1.0 + E / H);
  const double denom = 1.0 - g;
  if (denom <= 0.0)
    throw InadmissibleLocalizationError(
        "rod localization inadmissible: lambda (1 + E/H) must be below L");
  return E * eps0 * (u / (L * eps0) - g) / denom;
}

} // namespace rvelab
