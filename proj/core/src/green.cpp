#include "diracdfb/green.hpp"

#include <algorithm>
#include <cmath>

#include "diracdfb/errors.hpp"
#include "diracdfb/transfer_matrix.hpp"

namespace diracdfb {

namespace {

// The kernel is built from the solution decaying toward -inf ("left") and
// the one decaying toward +inf ("right") in the chosen half plane:
//   Im E > 0:  left = phi2    ~ (0,1) e^{-iEx},  right = varphi1 ~ (1,0) e^{iEx}
//   Im E < 0:  left = phi1    ~ (1,0) e^{iEx},   right = varphi2 ~ (0,1) e^{-iEx}
// as
//   G(x,y) = pref * [ H(y-x) left(x) right(y)^T + H(x-y) right(x) left(y)^T ] s1
// with H the unit step (H(0) = 1/2), s1 the column swap, and
// pref = -i/N (upper) or +i/N (lower), N the left/right cross-Wronskian.
struct KernelContext {
  JostBranch left;
  JostBranch right;
  Complex pref;
  HalfPlane half_plane;
};

KernelContext make_context(const StructureSpec& spec, Energy E) {
  if (E.imag() == 0.0) {
    throw InvalidInput("green_eval requires Im E != 0; the kernel is two-sided on the real axis");
  }
  if (!std::isfinite(E.real()) || !std::isfinite(E.imag())) {
    throw InvalidInput("green_eval requires finite E");
  }
  const bool upper = E.imag() > 0.0;
  KernelContext ctx;
  ctx.half_plane = upper ? HalfPlane::upper : HalfPlane::lower;
  ctx.left = upper ? JostBranch::phi2 : JostBranch::phi1;
  ctx.right = upper ? JostBranch::varphi1 : JostBranch::varphi2;

  // Cross-Wronskian at a fixed interior point; constant in x because the
  // first-order system is trace free.  Its zeros are exactly the discrete
  // spectrum attached to this half plane.
  const Spinor2 l0 = jost_solution(spec, E, ctx.left, 0.0);
  const Spinor2 r0 = jost_solution(spec, E, ctx.right, 0.0);
  const Complex N = upper ? (r0.c1 * l0.c2 - r0.c2 * l0.c1) : (l0.c1 * r0.c2 - l0.c2 * r0.c1);
  if (std::abs(N) <= 1e-13 * l0.norm() * r0.norm()) {
    throw PoleProximity(E, N);
  }
  ctx.pref = (upper ? Complex(0.0, -1.0) : Complex(0.0, 1.0)) / N;
  return ctx;
}

// u v^T s1, scaled: the column swap turns the row (v1, v2) into (v2, v1).
void add_outer_swapped(GreenKernelValue& G, Complex c, const Spinor2& u, const Spinor2& v) {
  G.g11 += c * u.c1 * v.c2;
  G.g12 += c * u.c1 * v.c1;
  G.g21 += c * u.c2 * v.c2;
  G.g22 += c * u.c2 * v.c1;
}

GreenKernelValue assemble(const KernelContext& ctx, double x, double y, const Spinor2& left_x,
                          const Spinor2& right_x, const Spinor2& left_y, const Spinor2& right_y) {
  GreenKernelValue G;
  G.half_plane = ctx.half_plane;
  const double step_xy = (x < y) ? 1.0 : (x == y ? 0.5 : 0.0);
  if (step_xy > 0.0) add_outer_swapped(G, ctx.pref * step_xy, left_x, right_y);
  const double step_yx = 1.0 - step_xy;
  if (step_yx > 0.0) add_outer_swapped(G, ctx.pref * step_yx, right_x, left_y);
  return G;
}

}  // namespace

double GreenKernelValue::max_abs() const {
  return std::max(std::max(std::abs(g11), std::abs(g12)), std::max(std::abs(g21), std::abs(g22)));
}

GreenKernelValue green_eval(const StructureSpec& spec, Energy E, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw InvalidInput("green_eval requires finite x, y");
  const KernelContext ctx = make_context(spec, E);
  const Spinor2 left_x = jost_solution(spec, E, ctx.left, x);
  const Spinor2 right_x = jost_solution(spec, E, ctx.right, x);
  const Spinor2 left_y = jost_solution(spec, E, ctx.left, y);
  const Spinor2 right_y = jost_solution(spec, E, ctx.right, y);
  return assemble(ctx, x, y, left_x, right_x, left_y, right_y);
}

std::vector<ResolventScanRow> resolvent_bound_scan(const StructureSpec& spec, double E0,
                                                   ScanSide side,
                                                   const std::vector<double>& offsets) {
  if (offsets.empty()) throw InvalidInput("resolvent_bound_scan needs at least one offset");
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (!(offsets[i] > 0.0)) throw InvalidInput("resolvent_bound_scan offsets must be positive");
    if (i > 0 && !(offsets[i] < offsets[i - 1])) {
      throw InvalidInput("resolvent_bound_scan offsets must be descending");
    }
  }

  constexpr int kGridN = 21;
  const double a = spec.left_edge();
  const double L = spec.total_length();

  std::vector<ResolventScanRow> rows;
  rows.reserve(offsets.size());
  for (const double delta : offsets) {
    const Energy E(E0, side == ScanSide::above ? delta : -delta);
    const KernelContext ctx = make_context(spec, E);

    Spinor2 left_vals[kGridN];
    Spinor2 right_vals[kGridN];
    double xs[kGridN];
    for (int i = 0; i < kGridN; ++i) {
      xs[i] = a + L * i / (kGridN - 1);
      left_vals[i] = jost_solution(spec, E, ctx.left, xs[i]);
      right_vals[i] = jost_solution(spec, E, ctx.right, xs[i]);
    }

    double sup = 0.0;
    for (int i = 0; i < kGridN; ++i) {
      for (int j = 0; j < kGridN; ++j) {
        const GreenKernelValue G =
            assemble(ctx, xs[i], xs[j], left_vals[i], right_vals[i], left_vals[j], right_vals[j]);
        sup = std::max(sup, G.max_abs());
      }
    }
    rows.push_back({delta, sup});
  }
  return rows;
}

}  // namespace diracdfb
