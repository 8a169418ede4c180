#pragma once

#include "diracdfb/types.hpp"

namespace diracdfb {

// 2x2 amplitude propagator across a structure (or part of one), mapping the
// two counter-propagating wave amplitudes at the left edge to those at the
// right edge.  For free space of length d it is diag(e^{iEd}, e^{-iEd}); the
// product over adjacent pieces composes left to right.
//
// The represented matrix is 2^scale_exp * [[m11, m12], [m21, m22]].  The
// shared power-of-two exponent keeps stored entries within [2^-512, 2^512]
// so that products over high-gain structures never overflow.  The true
// matrix always has determinant 1.
struct TransferMatrix {
  Complex m11{1.0, 0.0};
  Complex m12{};
  Complex m21{};
  Complex m22{1.0, 0.0};
  int scale_exp = 0;

  static TransferMatrix identity() { return TransferMatrix{}; }

  // True entry value with the exponent applied (may overflow to inf for
  // extreme exponents; stored entries never do).
  Complex entry(int row, int col) const;

  double max_abs_stored() const;

  // Rescales entries by a power of two when they leave a safe band,
  // folding the factor into scale_exp.  Idempotent on in-band matrices.
  void normalize();

  // Adjugate; equals the inverse because det = 1.
  TransferMatrix inverse() const;

  // Compensated 2x2 determinant of the stored entries (fma-based, so the
  // subtraction itself adds no cancellation error).
  Complex det_stored() const;

  // |det(true matrix) - 1|.  Faithful up to the conditioning limit: entry
  // roundoff alone perturbs the determinant by ~ eps * max|entry|^2.
  double det_defect() const;

  Spinor2 apply(const Spinor2& v) const;
};

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

// Largest entry-wise difference between two matrices divided by the largest
// entry magnitude, with both operands brought to a common power-of-two
// exponent first.
double max_relative_difference(const TransferMatrix& a, const TransferMatrix& b);

// Closed form for one uniform segment at energy E:
//   sigma = (detuning - i gain) - E,  rho = sqrt(m^2 - sigma^2),
//   M = [[cosh(rho l) - i sigma sinh(rho l)/rho,  -i m sinh(rho l)/rho],
//        [        i m sinh(rho l)/rho,  cosh(rho l) + i sigma sinh(rho l)/rho]].
// All entries are even in rho, so the sqrt branch does not matter; near
// rho l = 0 the ratio sinh(rho l)/rho is evaluated by its Taylor series.
struct SegmentMatrixParams {
  Complex sigma{};
  Complex rho{};
};

SegmentMatrixParams segment_matrix_params(const Segment& segment, Energy E);

TransferMatrix segment_matrix(const Segment& segment, Energy E);

// Same, with an explicit parameter pack; pass rho with either sign to check
// branch independence.
TransferMatrix segment_matrix(const Segment& segment, Energy E, const SegmentMatrixParams& params);

// Ordered product of segment matrices, leftmost segment applied first.
TransferMatrix structure_matrix(const StructureSpec& spec, Energy E);

// Independent check of structure_matrix: fixed-step RK4 integration of the
// first-order system  psi' = i s3 [(E - V(x)) - m(x) s1] psi  across
// [-L/2, L/2], assembled from two independent initial spinors.  Requires
// steps_per_unit_length >= 100; error decreases as the 4th power of the
// step.
TransferMatrix ode_oracle_matrix(const StructureSpec& spec, Energy E, int steps_per_unit_length);

// The four scattering solutions fixed by their plane-wave asymptotics:
//   phi1     -> (1,0) e^{iEx}   for x <= -L/2      (left-anchored)
//   phi2     -> (0,1) e^{-iEx}  for x <= -L/2      (left-anchored)
//   varphi1  -> (1,0) e^{iEx}   for x >= +L/2      (right-anchored)
//   varphi2  -> (0,1) e^{-iEx}  for x >= +L/2      (right-anchored)
enum class JostBranch { phi1, phi2, varphi1, varphi2 };

// Value of the selected solution at any x (inside or outside the structure).
Spinor2 jost_solution(const StructureSpec& spec, Energy E, JostBranch which, double x);

// Propagator from the left edge to x (x clipped to the structure support).
TransferMatrix partial_propagator_from_left(const StructureSpec& spec, Energy E, double x);

}  // namespace diracdfb
