#pragma once

#include <vector>

#include "diracdfb/types.hpp"

namespace diracdfb {

enum class HalfPlane { upper, lower };

// Value of the resolvent kernel G(x,y;E) of the structure Hamiltonian.
// Assembled from the two scattering solutions that decay toward -inf and
// +inf in the selected half plane, divided by their cross-Wronskian, which
// is the Jost-normalized diagonal transfer-matrix entry whose zeros are the
// discrete spectrum.
struct GreenKernelValue {
  Complex g11{};
  Complex g12{};
  Complex g21{};
  Complex g22{};
  HalfPlane half_plane = HalfPlane::upper;

  double max_abs() const;
};

// Evaluates G(x,y;E) for complex E off the real axis (the half plane is
// chosen by the sign of Im E; the kernel is two-sided on the axis itself,
// so Im E == 0 is rejected).  Throws PoleProximity when E sits numerically
// on a discrete eigenvalue or resonance of the relevant entry.
GreenKernelValue green_eval(const StructureSpec& spec, Energy E, double x, double y);

enum class ScanSide { above, below };

struct ResolventScanRow {
  double offset = 0.0;    // distance from the real axis
  double sup_norm = 0.0;  // max matrix-element magnitude over the grid
};

// Probes boundedness of the resolvent near the real-axis point E0: for each
// offset delta (positive, descending), evaluates E = E0 + i*delta (above)
// or E0 - i*delta (below) and takes the sup of |G_ij(x,y)| over a 21x21
// (x,y) grid covering the structure.  Near a spectral singularity the
// sup grows like 1/delta; at a regular point it saturates.
std::vector<ResolventScanRow> resolvent_bound_scan(const StructureSpec& spec, double E0,
                                                   ScanSide side, const std::vector<double>& offsets);

}  // namespace diracdfb
