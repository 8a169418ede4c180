#include "diracdfb/types.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "diracdfb/errors.hpp"

namespace diracdfb {

namespace {
constexpr double speed_of_light = 299792458.0;  // m/s
}

void validate(const Segment& segment) {
  if (!std::isfinite(segment.length) || segment.length <= 0.0) {
    throw InvalidInput("segment length must be finite and > 0");
  }
  if (!std::isfinite(segment.mass) || !std::isfinite(segment.gain) ||
      !std::isfinite(segment.detuning)) {
    throw InvalidInput("segment parameters must be finite");
  }
}

StructureSpec::StructureSpec(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) {
    throw InvalidInput("a structure needs at least one segment");
  }
  for (const Segment& s : segments_) {
    validate(s);
    total_length_ += s.length;
  }
  if (!std::isfinite(total_length_)) {
    throw InvalidInput("total structure length must be finite");
  }
}

std::vector<double> StructureSpec::interfaces() const {
  std::vector<double> xs;
  xs.reserve(segments_.size() + 1);
  double pos = left_edge();
  xs.push_back(pos);
  for (const Segment& s : segments_) {
    pos += s.length;
    xs.push_back(pos);
  }
  // Guard against accumulated rounding on the right edge.
  xs.back() = right_edge();
  return xs;
}

bool StructureSpec::is_hermitian(double tol) const {
  for (const Segment& s : segments_) {
    if (std::abs(s.gain) > tol) return false;
  }
  return true;
}

std::uint64_t StructureSpec::content_hash() const {
  // FNV-1a over the canonical text form of each segment.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 1099511628211ull;
    }
  };
  char buf[160];
  for (const Segment& s : segments_) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%.17g;", s.length, s.mass,
                                s.gain, s.detuning);
    mix(buf, static_cast<std::size_t>(n));
  }
  return h;
}

StructureSpec make_uniform_gain_structure(double m0L, double lambdaL, bool amplifying) {
  if (!std::isfinite(m0L) || m0L < 0.0) {
    throw InvalidInput("m0L must be finite and >= 0");
  }
  if (!std::isfinite(lambdaL) || lambdaL < 0.0) {
    throw InvalidInput("lambdaL must be finite and >= 0");
  }
  Segment s;
  s.length = 1.0;
  s.mass = m0L;
  s.gain = amplifying ? -lambdaL : lambdaL;
  s.detuning = 0.0;
  return StructureSpec({s});
}

StructureSpec make_pt_pair_structure(double m0L, double lambdaL) {
  if (!std::isfinite(m0L) || m0L < 0.0) {
    throw InvalidInput("m0L must be finite and >= 0");
  }
  if (!std::isfinite(lambdaL) || lambdaL < 0.0) {
    throw InvalidInput("lambdaL must be finite and >= 0");
  }
  Segment left;
  left.length = 0.5;
  left.mass = m0L;
  left.gain = -lambdaL;
  Segment right = left;
  right.gain = lambdaL;
  return StructureSpec({left, right});
}

double Spinor2::norm() const { return std::sqrt(std::norm(c1) + std::norm(c2)); }

double PhysicalScaling::Z() const {
  return 2.0 * n0 * lambda_grating / (std::numbers::pi * delta_n);
}

double PhysicalScaling::v_g() const { return speed_of_light / n0; }

double PhysicalScaling::T() const { return Z() / v_g(); }

double PhysicalScaling::omega_B() const {
  return std::numbers::pi * speed_of_light / (lambda_grating * n0);
}

double PhysicalScaling::k_B() const { return std::numbers::pi / lambda_grating; }

double PhysicalScaling::dimensionless_gain() const { return Z() * alpha0; }

void validate(const PhysicalScaling& scaling) {
  if (!std::isfinite(scaling.n0) || scaling.n0 <= 0.0) {
    throw InvalidInput("n0 must be finite and > 0");
  }
  if (!std::isfinite(scaling.delta_n) || scaling.delta_n <= 0.0) {
    throw InvalidInput("delta_n must be finite and > 0");
  }
  if (!std::isfinite(scaling.lambda_grating) || scaling.lambda_grating <= 0.0) {
    throw InvalidInput("lambda_grating must be finite and > 0");
  }
  if (!std::isfinite(scaling.alpha0)) {
    throw InvalidInput("alpha0 must be finite");
  }
}

NormalizedCoordinates to_normalized(const PhysicalScaling& scaling, double z_meters,
                                    double tau_seconds) {
  validate(scaling);
  return {z_meters / scaling.Z(), tau_seconds / scaling.T()};
}

LabCoordinates from_normalized(const PhysicalScaling& scaling, double x, double t) {
  validate(scaling);
  return {x * scaling.Z(), t * scaling.T()};
}

}  // namespace diracdfb
