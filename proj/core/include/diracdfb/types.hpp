#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace diracdfb {

using Complex = std::complex<double>;

// Complex energy E, in units of 1/x where x is the dimensionless coordinate.
// For the built-in families the structure length is 1, so E coincides with
// the dimensionless product EL used in all reports.
using Energy = Complex;

// One uniform piece of the piecewise-constant structure.
//
// The stationary problem solved everywhere in this library is
//   -i s3 psi' + m(x) s1 psi + V(x) psi = E psi,   V(x) = detuning - i*gain,
// with s3 = diag(1,-1), s1 the off-diagonal Pauli matrix.  gain < 0 means
// amplification, gain > 0 loss.  Outside the structure m = V = 0.
struct Segment {
  double length = 1.0;    // > 0
  double mass = 0.0;      // grating amplitude m
  double gain = 0.0;      // gamma
  double detuning = 0.0;  // phase-gradient term theta'

  Complex potential() const { return Complex(detuning, -gain); }
};

// Validates a single segment; throws InvalidInput on non-finite fields or
// non-positive length.
void validate(const Segment& segment);

// An immutable left-to-right list of segments occupying [-L/2, L/2].
class StructureSpec {
 public:
  explicit StructureSpec(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  double total_length() const { return total_length_; }
  double left_edge() const { return -0.5 * total_length_; }
  double right_edge() const { return 0.5 * total_length_; }

  // Interface positions, including both outer edges (segment boundaries are
  // closed on the left, open on the right).
  std::vector<double> interfaces() const;

  // True when every gain coefficient vanishes (within |gain| <= tol).
  bool is_hermitian(double tol = 0.0) const;

  // Stable content hash of the canonical serialization; used to seed
  // reproducible spot checks and to tag emitted reports.
  std::uint64_t content_hash() const;

 private:
  std::vector<Segment> segments_;
  double total_length_ = 0.0;
};

// Single uniform segment of length 1 with |gain| = lambdaL.
// amplifying = true selects gain = -lambdaL (an amplifier), false selects
// gain = +lambdaL (an absorber).  lambdaL must be >= 0, m0L >= 0.
StructureSpec make_uniform_gain_structure(double m0L, double lambdaL, bool amplifying = true);

// Two half-length segments: amplifying on the left (gain = -lambdaL),
// lossy on the right (gain = +lambdaL).  The potential obeys
// V(-x) = conj(V(x)), so the structure is PT-symmetric for every lambdaL.
StructureSpec make_pt_pair_structure(double m0L, double lambdaL);

// Two-component field value at a point.
struct Spinor2 {
  Complex c1{};
  Complex c2{};

  double norm() const;
};

// Conversion constants between laboratory units of a distributed-feedback
// grating and the dimensionless units of the wave problem.
//
//   x = z / Z,  t = tau / T,  Z = 2 n0 Lambda / (pi dn),  T = Z n0 / c.
struct PhysicalScaling {
  double n0 = 1.0;              // modal refractive index
  double delta_n = 0.0;         // peak index modulation, > 0
  double lambda_grating = 0.0;  // grating period in meters, > 0
  double alpha0 = 0.0;          // gain/absorption coefficient in 1/m

  double Z() const;                  // length scale, meters
  double T() const;                  // time scale, seconds
  double v_g() const;                // group velocity c/n0
  double omega_B() const;            // Bragg angular frequency pi c / (Lambda n0)
  double k_B() const;                // Bragg wavenumber pi / Lambda
  double dimensionless_gain() const; // gamma = Z * alpha0
};

void validate(const PhysicalScaling& scaling);

struct NormalizedCoordinates {
  double x = 0.0;
  double t = 0.0;
};

// Maps a laboratory-frame point (z meters, tau seconds) into dimensionless
// coordinates; from_normalized is its exact inverse.
NormalizedCoordinates to_normalized(const PhysicalScaling& scaling, double z_meters,
                                    double tau_seconds);
struct LabCoordinates {
  double z_meters = 0.0;
  double tau_seconds = 0.0;
};
LabCoordinates from_normalized(const PhysicalScaling& scaling, double x, double t);

}  // namespace diracdfb
