#include "diracdfb/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diracdfb/errors.hpp"

namespace diracdfb {

namespace {

// Stored entries are renormalized once they leave [2^-256, 2^256]; with both
// factors in band, a product stays far below the overflow threshold.
const double renorm_high = std::ldexp(1.0, 256);
const double renorm_low = std::ldexp(1.0, -256);

Complex ldexp_c(Complex z, int e) {
  return Complex(std::ldexp(z.real(), e), std::ldexp(z.imag(), e));
}

// Compensated sum of four products a_i*b_i (Neumaier accumulation of the
// fma-exact product errors), accurate even under heavy cancellation.
double dot4(double a0, double b0, double a1, double b1, double a2, double b2, double a3,
            double b3) {
  double sum = 0.0, comp = 0.0;
  auto add = [&](double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  };
  auto add_prod = [&](double x, double y) {
    const double p = x * y;
    const double e = std::fma(x, y, -p);
    add(p);
    add(e);
  };
  add_prod(a0, b0);
  add_prod(a1, b1);
  add_prod(a2, b2);
  add_prod(a3, b3);
  return sum + comp;
}

}  // namespace

Complex TransferMatrix::entry(int row, int col) const {
  const Complex v = (row == 0) ? (col == 0 ? m11 : m12) : (col == 0 ? m21 : m22);
  return ldexp_c(v, scale_exp);
}

double TransferMatrix::max_abs_stored() const {
  return std::max(std::max(std::abs(m11), std::abs(m12)),
                  std::max(std::abs(m21), std::abs(m22)));
}

void TransferMatrix::normalize() {
  const double m = max_abs_stored();
  if (!(m > 0.0) || !std::isfinite(m)) return;
  if (m > renorm_high || m < renorm_low) {
    int e = 0;
    std::frexp(m, &e);
    const int shift = e - 1;  // brings the max magnitude into [1, 2)
    const double f = std::ldexp(1.0, -shift);
    m11 *= f;
    m12 *= f;
    m21 *= f;
    m22 *= f;
    scale_exp += shift;
  }
}

TransferMatrix TransferMatrix::inverse() const {
  // True matrix is 2^k S with det(2^k S) = 1, so det S = 2^-2k and the true
  // inverse is adj(S) 2^2k / 2^k = 2^k adj(S): the exponent carries over.
  TransferMatrix r;
  r.m11 = m22;
  r.m12 = -m12;
  r.m21 = -m21;
  r.m22 = m11;
  r.scale_exp = scale_exp;
  return r;
}

Complex TransferMatrix::det_stored() const {
  const double re = dot4(m11.real(), m22.real(), -m11.imag(), m22.imag(), -m12.real(),
                         m21.real(), m12.imag(), m21.imag());
  const double im = dot4(m11.real(), m22.imag(), m11.imag(), m22.real(), -m12.real(),
                         m21.imag(), -m12.imag(), m21.real());
  return Complex(re, im);
}

double TransferMatrix::det_defect() const {
  const Complex d = ldexp_c(det_stored(), 2 * scale_exp);
  return std::abs(d - Complex(1.0, 0.0));
}

Spinor2 TransferMatrix::apply(const Spinor2& v) const {
  return {ldexp_c(m11 * v.c1 + m12 * v.c2, scale_exp),
          ldexp_c(m21 * v.c1 + m22 * v.c2, scale_exp)};
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  TransferMatrix r;
  r.m11 = a.m11 * b.m11 + a.m12 * b.m21;
  r.m12 = a.m11 * b.m12 + a.m12 * b.m22;
  r.m21 = a.m21 * b.m11 + a.m22 * b.m21;
  r.m22 = a.m21 * b.m12 + a.m22 * b.m22;
  r.scale_exp = a.scale_exp + b.scale_exp;
  r.normalize();
  return r;
}

double max_relative_difference(const TransferMatrix& a, const TransferMatrix& b) {
  const int k = std::max(a.scale_exp, b.scale_exp);
  const Complex av[4] = {ldexp_c(a.m11, a.scale_exp - k), ldexp_c(a.m12, a.scale_exp - k),
                         ldexp_c(a.m21, a.scale_exp - k), ldexp_c(a.m22, a.scale_exp - k)};
  const Complex bv[4] = {ldexp_c(b.m11, b.scale_exp - k), ldexp_c(b.m12, b.scale_exp - k),
                         ldexp_c(b.m21, b.scale_exp - k), ldexp_c(b.m22, b.scale_exp - k)};
  double scale = 0.0;
  double diff = 0.0;
  for (int i = 0; i < 4; ++i) {
    scale = std::max(scale, std::max(std::abs(av[i]), std::abs(bv[i])));
    diff = std::max(diff, std::abs(av[i] - bv[i]));
  }
  if (!(scale > 0.0)) return 0.0;
  return diff / scale;
}

SegmentMatrixParams segment_matrix_params(const Segment& segment, Energy E) {
  const Complex sigma = segment.potential() - E;
  const Complex rho = std::sqrt(segment.mass * segment.mass - sigma * sigma);
  return {sigma, rho};
}

TransferMatrix segment_matrix(const Segment& segment, Energy /*E*/,
                              const SegmentMatrixParams& params) {
  const double l = segment.length;
  Complex rho = params.rho;
  Complex z = rho * l;
  if (z.real() < 0.0) {  // entries are even in rho; evaluate on Re(z) >= 0
    z = -z;
    rho = -rho;
  }

  Complex c;  // cosh(rho l) / 2^k
  Complex s;  // sinh(rho l) / rho / 2^k
  int k = 0;
  if (std::abs(z) < 1e-4) {
    // sinh(z)/z by series; relative error below 1e-20 at the cutover.
    const Complex zz = z * z;
    c = std::cosh(z);
    s = l * (1.0 + zz / 6.0 + zz * zz / 120.0);
  } else if (z.real() <= 300.0) {
    c = std::cosh(z);
    s = std::sinh(z) / rho;
  } else {
    // Factor out 2^k so the hyperbolic pair stays representable.
    k = static_cast<int>(std::floor(z.real() / std::numbers::ln2)) - 2;
    const Complex shift(static_cast<double>(k) * std::numbers::ln2, 0.0);
    const Complex ep = std::exp(z - shift);   // magnitude in [4, 8)
    const Complex em = std::exp(-z - shift);  // negligible or zero
    c = 0.5 * (ep + em);
    s = 0.5 * (ep - em) / rho;
  }

  const Complex i_sigma_s = Complex(0.0, 1.0) * params.sigma * s;
  const Complex i_m_s = Complex(0.0, segment.mass) * s;
  TransferMatrix M;
  M.m11 = c - i_sigma_s;
  M.m12 = -i_m_s;
  M.m21 = i_m_s;
  M.m22 = c + i_sigma_s;
  M.scale_exp = k;
  M.normalize();
  return M;
}

TransferMatrix segment_matrix(const Segment& segment, Energy E) {
  return segment_matrix(segment, E, segment_matrix_params(segment, E));
}

TransferMatrix structure_matrix(const StructureSpec& spec, Energy E) {
  TransferMatrix M = TransferMatrix::identity();
  for (const Segment& s : spec.segments()) {
    M = segment_matrix(s, E) * M;
  }
  return M;
}

TransferMatrix partial_propagator_from_left(const StructureSpec& spec, Energy E, double x) {
  TransferMatrix M = TransferMatrix::identity();
  double pos = spec.left_edge();
  for (const Segment& s : spec.segments()) {
    if (x <= pos) break;
    const double take = std::min(s.length, x - pos);
    if (take > 0.0) {
      Segment clipped = s;
      clipped.length = take;
      M = segment_matrix(clipped, E) * M;
    }
    pos += s.length;
  }
  return M;
}

namespace {

// Propagator from x to the right edge.
TransferMatrix partial_propagator_to_right(const StructureSpec& spec, Energy E, double x) {
  TransferMatrix M = TransferMatrix::identity();
  double pos = spec.left_edge();
  for (const Segment& s : spec.segments()) {
    const double seg_end = pos + s.length;
    if (seg_end > x) {
      const double start = std::max(x, pos);
      const double take = seg_end - start;
      if (take > 0.0) {
        Segment clipped = s;
        clipped.length = take;
        M = segment_matrix(clipped, E) * M;
      }
    }
    pos = seg_end;
  }
  return M;
}

Spinor2 free_value(Energy E, bool forward, double x) {
  const Complex iEx = Complex(0.0, 1.0) * E * x;
  if (forward) return {std::exp(iEx), Complex()};
  return {Complex(), std::exp(-iEx)};
}

}  // namespace

Spinor2 jost_solution(const StructureSpec& spec, Energy E, JostBranch which, double x) {
  const double xl = spec.left_edge();
  const double xr = spec.right_edge();
  const bool forward = (which == JostBranch::phi1 || which == JostBranch::varphi1);
  const bool left_anchored = (which == JostBranch::phi1 || which == JostBranch::phi2);

  if (left_anchored) {
    if (x <= xl) return free_value(E, forward, x);
    Spinor2 v = free_value(E, forward, xl);
    v = partial_propagator_from_left(spec, E, std::min(x, xr)).apply(v);
    if (x > xr) {
      const Complex iEd = Complex(0.0, 1.0) * E * (x - xr);
      v.c1 *= std::exp(iEd);
      v.c2 *= std::exp(-iEd);
    }
    return v;
  }

  if (x >= xr) return free_value(E, forward, x);
  Spinor2 v = free_value(E, forward, xr);
  v = partial_propagator_to_right(spec, E, std::max(x, xl)).inverse().apply(v);
  if (x < xl) {
    const Complex iEd = Complex(0.0, 1.0) * E * (x - xl);
    v.c1 *= std::exp(iEd);
    v.c2 *= std::exp(-iEd);
  }
  return v;
}

}  // namespace diracdfb
