#include "diracdfb/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "diracdfb/errors.hpp"

namespace diracdfb {

namespace {

Complex ldexp_c(Complex z, int k) {
  return Complex(std::ldexp(z.real(), k), std::ldexp(z.imag(), k));
}

// Parameter lookup at a point strictly inside the structure; segments are
// closed on the left, open on the right, and the last one owns its right
// edge.
const Segment& segment_at(const StructureSpec& spec, double x) {
  double left = spec.left_edge();
  const auto& segs = spec.segments();
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const double right = left + segs[i].length;
    if (x < right) return segs[i];
    left = right;
  }
  return segs.back();
}

}  // namespace

ScatteringCoefficients scattering_coefficients(const StructureSpec& spec, Energy E) {
  const TransferMatrix M = structure_matrix(spec, E);
  const double scale = M.max_abs_stored();
  if (std::abs(M.m22) <= 1e-14 * scale) {
    throw SpectralSingularityHit(E, M.entry(1, 1));
  }
  ScatteringCoefficients out;
  out.at_energy = E;
  // The stored-entry ratios are exponent free; only t carries 2^-scale_exp.
  out.t = ldexp_c(1.0 / M.m22, -M.scale_exp);
  out.r_left = -M.m21 / M.m22;
  out.r_right = M.m12 / M.m22;
  return out;
}

Complex reflectionless_companion_amplitude(const StructureSpec& spec, Energy E0) {
  return structure_matrix(spec, E0).entry(1, 0);
}

std::vector<SpectrumRow> transmission_scan(const StructureSpec& spec, double e_min, double e_max,
                                           int n_points) {
  if (!(e_min < e_max)) throw InvalidInput("transmission_scan needs e_min < e_max");
  if (n_points < 2) throw InvalidInput("transmission_scan needs at least 2 points");

  std::vector<SpectrumRow> rows;
  rows.reserve(static_cast<std::size_t>(n_points));
  const double step = (e_max - e_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double e = (i == n_points - 1) ? e_max : e_min + step * i;
    const TransferMatrix M = structure_matrix(spec, Energy(e, 0.0));
    SpectrumRow row;
    row.EL = e;
    // |t| may legitimately overflow to inf at a lasing singularity; rows
    // are emitted regardless.
    row.abs_t = std::ldexp(1.0 / std::abs(M.m22), -M.scale_exp);
    row.arg_t = std::arg(1.0 / M.m22);
    row.abs_r_left = std::abs(M.m21 / M.m22);
    row.abs_r_right = std::abs(M.m12 / M.m22);
    rows.push_back(row);
  }
  return rows;
}

PtCheckReport pt_check(const StructureSpec& spec, double tol) {
  PtCheckReport report;
  report.symmetric = true;

  // Common refinement of the interface grid and its mirror image.  Cell
  // midpoints of the refinement lie strictly inside one segment of both the
  // structure and its mirror, so the comparison is exact on the algebra.
  std::vector<double> cuts = spec.interfaces();
  for (const double x : spec.interfaces()) cuts.push_back(-x);
  std::sort(cuts.begin(), cuts.end());
  const double merge_eps = 1e-12 * std::max(1.0, spec.total_length());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [merge_eps](double a, double b) { return b - a <= merge_eps; }),
             cuts.end());

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const Segment& here = segment_at(spec, mid);
    const Segment& mirrored = segment_at(spec, -mid);
    const double mass_defect = std::abs(here.mass - mirrored.mass);
    const double detuning_defect = std::abs(here.detuning - mirrored.detuning);
    const double gain_defect = std::abs(here.gain + mirrored.gain);
    report.max_mass_defect = std::max(report.max_mass_defect, mass_defect);
    report.max_detuning_defect = std::max(report.max_detuning_defect, detuning_defect);
    report.max_gain_defect = std::max(report.max_gain_defect, gain_defect);

    const char* failed = nullptr;
    if (mass_defect > tol) failed = "mass";
    else if (detuning_defect > tol) failed = "detuning";
    else if (gain_defect > tol) failed = "gain";
    if (failed != nullptr && report.symmetric) {
      report.symmetric = false;
      report.first_violation_x = cuts[i];
      report.first_violation_field = failed;
    }
  }
  return report;
}

}  // namespace diracdfb
