#include <cmath>

#include "diracdfb/errors.hpp"
#include "diracdfb/transfer_matrix.hpp"

namespace diracdfb {

namespace {

// Plain 2x2 complex matrix used only inside the integrator.
struct Mat2 {
  Complex a11, a12, a21, a22;
};

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

Mat2 axpy(const Mat2& y, double h, const Mat2& k) {
  return {y.a11 + h * k.a11, y.a12 + h * k.a12, y.a21 + h * k.a21, y.a22 + h * k.a22};
}

double max_abs(const Mat2& m) {
  return std::max(std::max(std::abs(m.a11), std::abs(m.a12)),
                  std::max(std::abs(m.a21), std::abs(m.a22)));
}

}  // namespace

TransferMatrix ode_oracle_matrix(const StructureSpec& spec, Energy E, int steps_per_unit_length) {
  if (steps_per_unit_length < 100) {
    throw InvalidInput("ode_oracle_matrix needs at least 100 steps per unit length");
  }

  // Fundamental solution of psi' = A psi with
  //   A = [[ i(E - V), -i m], [ i m, -i(E - V)]]   (constant on each segment),
  // integrated with classical fixed-step RK4.  Columns are the images of the
  // two unit spinors at the left edge.
  Mat2 Y{Complex(1.0, 0.0), Complex(), Complex(), Complex(1.0, 0.0)};
  int scale_exp = 0;
  const double rescale_band = std::ldexp(1.0, 256);

  for (const Segment& seg : spec.segments()) {
    const Complex a = Complex(0.0, 1.0) * (E - seg.potential());
    const Complex b = Complex(0.0, 1.0) * seg.mass;
    const Mat2 A{a, -b, b, -a};
    auto rhs = [&A](const Mat2& y) { return mul(A, y); };

    const int n = std::max(1, static_cast<int>(std::ceil(seg.length * steps_per_unit_length)));
    const double h = seg.length / n;
    for (int i = 0; i < n; ++i) {
      const Mat2 k1 = rhs(Y);
      const Mat2 k2 = rhs(axpy(Y, 0.5 * h, k1));
      const Mat2 k3 = rhs(axpy(Y, 0.5 * h, k2));
      const Mat2 k4 = rhs(axpy(Y, h, k3));
      Y = axpy(Y, h / 6.0,
               Mat2{k1.a11 + 2.0 * (k2.a11 + k3.a11) + k4.a11,
                    k1.a12 + 2.0 * (k2.a12 + k3.a12) + k4.a12,
                    k1.a21 + 2.0 * (k2.a21 + k3.a21) + k4.a21,
                    k1.a22 + 2.0 * (k2.a22 + k3.a22) + k4.a22});
    }

    const double m = max_abs(Y);
    if (m > rescale_band) {
      int e = 0;
      std::frexp(m, &e);
      const int shift = e - 1;
      const double f = std::ldexp(1.0, -shift);
      Y = {Y.a11 * f, Y.a12 * f, Y.a21 * f, Y.a22 * f};
      scale_exp += shift;
    }
  }

  TransferMatrix M;
  M.m11 = Y.a11;
  M.m12 = Y.a12;
  M.m21 = Y.a21;
  M.m22 = Y.a22;
  M.scale_exp = scale_exp;
  M.normalize();
  return M;
}

}  // namespace diracdfb
