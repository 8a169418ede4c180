#pragma once

// Deterministic random inputs shared by the property-style tests.  Every
// generator takes the engine by reference so a test controls its own seed
// and stays reproducible in isolation.

#include <cmath>
#include <random>
#include <vector>

#include "diracdfb/types.hpp"

namespace testsupport {

using diracdfb::Complex;
using diracdfb::Energy;
using diracdfb::Segment;
using diracdfb::StructureSpec;

// Up to max_segments uniform pieces, lengths rescaled so the total is
// exactly 1, all physical parameters bounded by 5 in magnitude.
inline StructureSpec random_structure(std::mt19937_64& rng, int max_segments = 8) {
  std::uniform_int_distribution<int> count(1, max_segments);
  std::uniform_real_distribution<double> raw_length(0.2, 1.0);
  std::uniform_real_distribution<double> mass(0.0, 5.0);
  std::uniform_real_distribution<double> signed_param(-5.0, 5.0);

  const int n = count(rng);
  std::vector<double> lengths(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    lengths[i] = raw_length(rng);
    sum += lengths[i];
  }
  std::vector<Segment> segments;
  segments.reserve(n);
  for (int i = 0; i < n; ++i) {
    Segment s;
    s.length = lengths[i] / sum;
    s.mass = mass(rng);
    s.gain = signed_param(rng);
    s.detuning = signed_param(rng);
    segments.push_back(s);
  }
  return StructureSpec(std::move(segments));
}

// Same ensemble restricted to gain = 0 everywhere.
inline StructureSpec random_hermitian_structure(std::mt19937_64& rng, int max_segments = 8) {
  StructureSpec base = random_structure(rng, max_segments);
  std::vector<Segment> segments = base.segments();
  for (Segment& s : segments) s.gain = 0.0;
  return StructureSpec(std::move(segments));
}

// Mirror-symmetric structure with antisymmetric gain: the right half is the
// left half reversed with gain negated, so V(-x) = conj(V(x)) holds exactly.
inline StructureSpec random_pt_structure(std::mt19937_64& rng, int max_half_segments = 4) {
  std::uniform_int_distribution<int> count(1, max_half_segments);
  std::uniform_real_distribution<double> raw_length(0.2, 1.0);
  std::uniform_real_distribution<double> mass(0.0, 5.0);
  std::uniform_real_distribution<double> signed_param(-5.0, 5.0);

  const int n = count(rng);
  std::vector<double> lengths(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    lengths[i] = raw_length(rng);
    sum += lengths[i];
  }
  std::vector<Segment> left(n);
  for (int i = 0; i < n; ++i) {
    left[i].length = 0.5 * lengths[i] / sum;
    left[i].mass = mass(rng);
    left[i].gain = signed_param(rng);
    left[i].detuning = signed_param(rng);
  }
  std::vector<Segment> segments = left;
  for (int i = n - 1; i >= 0; --i) {
    Segment s = left[i];
    s.gain = -s.gain;
    segments.push_back(s);
  }
  return StructureSpec(std::move(segments));
}

inline double random_real_energy(std::mt19937_64& rng, double bound = 20.0) {
  std::uniform_real_distribution<double> u(-bound, bound);
  return u(rng);
}

// Uniform over the disk |E| <= bound, excluding a thin band around the real
// axis so both half-planes are exercised without degenerate cases.
inline Energy random_complex_energy(std::mt19937_64& rng, double bound = 20.0) {
  std::uniform_real_distribution<double> u(-bound, bound);
  for (;;) {
    const double re = u(rng);
    const double im = u(rng);
    if (re * re + im * im > bound * bound) continue;
    if (std::abs(im) < 1e-3) continue;
    return Energy(re, im);
  }
}

}  // namespace testsupport
