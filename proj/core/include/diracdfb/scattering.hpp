#pragma once

#include <string>
#include <vector>

#include "diracdfb/transfer_matrix.hpp"
#include "diracdfb/types.hpp"

namespace diracdfb {

// Transmission and reflection amplitudes of the structure at one energy,
// derived from the transfer matrix:
//   t = 1 / M22,  r_left = -M21 / M22,  r_right = M12 / M22.
// Transmission is the same from both sides because det M = 1.
struct ScatteringCoefficients {
  Complex t{};
  Complex r_left{};
  Complex r_right{};
  Energy at_energy{};
};

// Computes the coefficients at E.  Throws SpectralSingularityHit when M22
// vanishes to machine precision (|stored M22| <= 1e-14 * max stored entry):
// the structure lases at that energy and the coefficients diverge.
ScatteringCoefficients scattering_coefficients(const StructureSpec& spec, Energy E);

// At a reflectionless singular energy (real zero of M11) the structure
// transmits a two-sided excitation with no net reflection; the companion
// wave incident from the right must carry relative amplitude M21(E0).
Complex reflectionless_companion_amplitude(const StructureSpec& spec, Energy E0);

// One row of a real-axis spectrum scan.
struct SpectrumRow {
  double EL = 0.0;
  double abs_t = 0.0;
  double arg_t = 0.0;
  double abs_r_left = 0.0;
  double abs_r_right = 0.0;
};

// Samples n_points energies uniformly (both endpoints included) on
// [e_min, e_max].  Never throws for singular energies: magnitudes are
// reported as-is and may be huge or infinite at a lasing singularity.
std::vector<SpectrumRow> transmission_scan(const StructureSpec& spec, double e_min, double e_max,
                                           int n_points);

// Result of the parity/time-reversal symmetry test V(-x) = conj(V(x)),
// m(-x) = m(x).  Checked exactly on the piecewise-constant algebra: the
// structure and its mirror image are compared cell by cell on the common
// refinement of their interface grids, with tolerance `tol` per parameter.
struct PtCheckReport {
  bool symmetric = false;
  double max_mass_defect = 0.0;      // max |m(x) - m(-x)|
  double max_detuning_defect = 0.0;  // max |detuning(x) - detuning(-x)|
  double max_gain_defect = 0.0;      // max |gain(x) + gain(-x)|
  // Left interface of the first violating cell and which field failed,
  // empty when symmetric.
  double first_violation_x = 0.0;
  std::string first_violation_field{};
};

PtCheckReport pt_check(const StructureSpec& spec, double tol = 1e-12);

}  // namespace diracdfb
