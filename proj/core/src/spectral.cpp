#include "diracdfb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <vector>

#include "diracdfb/errors.hpp"
#include "diracdfb/transfer_matrix.hpp"

namespace diracdfb {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex ldexp_c(Complex z, int k) {
  return Complex(std::ldexp(z.real(), k), std::ldexp(z.imag(), k));
}

// Entry value with its scale context: true value = stored * 2^k, and
// `scale` is the largest stored entry magnitude of the same matrix, so
// rel() is an exponent-free measure of how small the entry is.
struct EntryValue {
  Complex stored{};
  int k = 0;
  double scale = 1.0;

  double rel() const { return std::abs(stored) / scale; }
};

struct Evaluator {
  const StructureSpec* spec = nullptr;
  MatrixEntry entry = MatrixEntry::M22;

  EntryValue operator()(Energy E) const {
    const TransferMatrix M = structure_matrix(*spec, E);
    EntryValue v;
    v.stored = (entry == MatrixEntry::M11) ? M.m11 : M.m22;
    v.k = M.scale_exp;
    v.scale = M.max_abs_stored();
    return v;
  }
};

// --- deterministic jitter -------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t bits_of(double x) {
  std::uint64_t u = 0;
  std::memcpy(&u, &x, sizeof(u));
  return u;
}

std::uint64_t cell_seed(const Window& c, std::uint64_t salt) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL ^ salt;
  h = splitmix64(h ^ bits_of(c.re_min));
  h = splitmix64(h ^ bits_of(c.re_max));
  h = splitmix64(h ^ bits_of(c.im_min));
  h = splitmix64(h ^ bits_of(c.im_max));
  return h;
}

double unit_interval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// --- winding count --------------------------------------------------------

// Raised when a perimeter sample lands on (or within 1e-12 of) a zero, or
// when adaptive refinement bottoms out without taming the phase steps; the
// caller reacts by dilating the cell and recounting.
struct PerimeterHazard {};

double wrap_phase(double d) {
  while (d > kPi) d -= 2.0 * kPi;
  while (d <= -kPi) d += 2.0 * kPi;
  return d;
}

struct PerimeterSample {
  double t = 0.0;
  double arg = 0.0;
};

PerimeterSample probe(const Evaluator& f, Energy a, Energy b, double t) {
  const Energy E = a + t * (b - a);
  const EntryValue v = f(E);
  if (!(v.rel() > 1e-12)) throw PerimeterHazard{};
  return {t, std::arg(v.stored)};
}

// Phase change along one straight edge from sample s0 to s1, with recursive
// bisection until every step is below pi/2.
double edge_phase(const Evaluator& f, Energy a, Energy b, const PerimeterSample& s0,
                  const PerimeterSample& s1) {
  const double d = wrap_phase(s1.arg - s0.arg);
  if (std::abs(d) < 0.5 * kPi) return d;
  if (s1.t - s0.t < 1e-9) throw PerimeterHazard{};
  const PerimeterSample mid = probe(f, a, b, 0.5 * (s0.t + s1.t));
  return edge_phase(f, a, b, s0, mid) + edge_phase(f, a, b, mid, s1);
}

int winding_once(const Evaluator& f, const Window& c, double samples_per_unit) {
  const Energy corners[5] = {Energy(c.re_min, c.im_min), Energy(c.re_max, c.im_min),
                             Energy(c.re_max, c.im_max), Energy(c.re_min, c.im_max),
                             Energy(c.re_min, c.im_min)};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const Energy a = corners[e];
    const Energy b = corners[e + 1];
    const double len = std::abs(b - a);
    const int n = 4 + static_cast<int>(std::ceil(len * samples_per_unit));
    std::vector<PerimeterSample> samples;
    samples.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) samples.push_back(probe(f, a, b, static_cast<double>(i) / n));
    for (int i = 0; i < n; ++i) total += edge_phase(f, a, b, samples[i], samples[i + 1]);
  }
  const double w_real = total / (2.0 * kPi);
  const long w = std::lround(w_real);
  // An entire function has a non-negative count; a broken phase sum means a
  // zero sat too close to the perimeter after all.
  if (w < 0 || std::abs(w_real - static_cast<double>(w)) > 0.25) throw PerimeterHazard{};
  return static_cast<int>(w);
}

Window dilate(const Window& c, int attempt) {
  std::uint64_t h = cell_seed(c, 0x5bd1e995u + static_cast<std::uint64_t>(attempt));
  auto draw = [&h]() {
    h = splitmix64(h);
    return 1e-6 + unit_interval(h) * (1e-5 - 1e-6);
  };
  Window d = c;
  d.re_min -= draw() * c.width();
  d.re_max += draw() * c.width();
  d.im_min -= draw() * c.height();
  d.im_max += draw() * c.height();
  return d;
}

// Counts zeros inside the cell; the cell may grow by a relative 1e-5 per
// retry when its perimeter keeps hitting zeros.  Returns -1 when every
// retry failed.
int winding_with_retry(const Evaluator& f, Window& cell, double samples_per_unit) {
  for (int attempt = 0; attempt < 12; ++attempt) {
    try {
      return winding_once(f, cell, samples_per_unit);
    } catch (const PerimeterHazard&) {
      cell = dilate(cell, attempt);
    }
  }
  return -1;
}

// --- Newton refinement ----------------------------------------------------

struct RefinedZero {
  Energy energy{};
  double residual = 0.0;
};

std::optional<RefinedZero> newton_refine(const Evaluator& f, Energy start, double tol,
                                         int max_iters) {
  Energy E = start;
  int polish = -1;
  for (int iter = 0; iter < max_iters; ++iter) {
    const EntryValue v0 = f(E);
    const double h = 1e-6 * (1.0 + std::abs(E));
    const EntryValue vp = f(E + h);
    const EntryValue vm = f(E - h);
    // All three exponents differ by at most a few; renormalize onto v0's.
    const Complex der =
        (ldexp_c(vp.stored, vp.k - v0.k) - ldexp_c(vm.stored, vm.k - v0.k)) / (2.0 * h);
    if (der == Complex(0.0, 0.0)) return std::nullopt;
    const Complex step = -v0.stored / der;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return std::nullopt;
    E += step;
    if (polish >= 0) {
      if (++polish >= 2) return RefinedZero{E, f(E).rel()};
    } else if (std::abs(step) <=
               std::max(0.5 * tol, 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(E)))) {
      polish = 0;
    }
  }
  return std::nullopt;
}

double perimeter_rate(const StructureSpec& spec) {
  // The entries oscillate roughly like exp(iEL), so a sampling density of a
  // few points per 1/L keeps the initial phase steps well under pi/2 before
  // any adaptive splitting.
  return std::max(2.0, 3.0 * spec.total_length());
}

void sort_zeros(std::vector<LocatedZero>& zeros) {
  std::sort(zeros.begin(), zeros.end(), [](const LocatedZero& a, const LocatedZero& b) {
    if (a.energy.real() != b.energy.real()) return a.energy.real() < b.energy.real();
    return a.energy.imag() < b.energy.imag();
  });
}

}  // namespace

std::string_view to_string(MatrixEntry entry) {
  return entry == MatrixEntry::M11 ? "M11" : "M22";
}

std::string_view to_string(SpectralKind kind) {
  switch (kind) {
    case SpectralKind::bound_state: return "bound_state";
    case SpectralKind::resonance: return "resonance";
    case SpectralKind::antiresonance: return "antiresonance";
    case SpectralKind::spectral_singularity: return "spectral_singularity";
  }
  return "unknown";
}

std::string_view to_string(SingularitySubtype subtype) {
  return subtype == SingularitySubtype::lasing ? "lasing" : "reflectionless";
}

std::string_view to_string(StructureFamily family) {
  switch (family) {
    case StructureFamily::uniform_gain: return "uniform-gain";
    case StructureFamily::uniform_loss: return "uniform-loss";
    case StructureFamily::pt_pair: return "pt-pair";
  }
  return "unknown";
}

std::optional<StructureFamily> family_from_name(std::string_view name) {
  if (name == "uniform-gain") return StructureFamily::uniform_gain;
  if (name == "uniform-loss") return StructureFamily::uniform_loss;
  if (name == "pt-pair") return StructureFamily::pt_pair;
  return std::nullopt;
}

StructureSpec make_family_structure(StructureFamily family, double m0L, double lambdaL) {
  switch (family) {
    case StructureFamily::uniform_gain: return make_uniform_gain_structure(m0L, lambdaL, true);
    case StructureFamily::uniform_loss: return make_uniform_gain_structure(m0L, lambdaL, false);
    case StructureFamily::pt_pair: return make_pt_pair_structure(m0L, lambdaL);
  }
  throw InvalidInput("unknown structure family");
}

int winding_number(const StructureSpec& spec, MatrixEntry entry, const Window& cell) {
  const Evaluator f{&spec, entry};
  Window c = cell;
  return winding_with_retry(f, c, perimeter_rate(spec));
}

ZeroSearchResult find_zeros(const StructureSpec& spec, MatrixEntry entry, const Window& window,
                            const ZeroSearchOptions& options) {
  if (!(window.re_min < window.re_max) || !(window.im_min < window.im_max) ||
      !std::isfinite(window.re_min) || !std::isfinite(window.re_max) ||
      !std::isfinite(window.im_min) || !std::isfinite(window.im_max)) {
    throw InvalidInput("find_zeros window is degenerate");
  }
  if (!(options.refinement_tol >= 1e-13 && options.refinement_tol <= 1e-3)) {
    throw InvalidInput("find_zeros refinement_tol must lie in [1e-13, 1e-3]");
  }
  if (options.max_subdivision_depth < 1) {
    throw InvalidInput("find_zeros needs a positive subdivision depth");
  }

  const Evaluator f{&spec, entry};
  const double rate = perimeter_rate(spec);
  const double tol = options.refinement_tol;
  const double min_size = 10.0 * tol;

  struct Task {
    Window cell;
    int depth;
  };
  std::vector<Task> tasks;

  // Initial tiling in cells of at most ~2 units per side, so each cell holds
  // only a few zeros and the perimeter stays short.
  const int nx = std::max(1, static_cast<int>(std::ceil(window.width() / 2.0)));
  const int ny = std::max(1, static_cast<int>(std::ceil(window.height() / 2.0)));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      Window c;
      c.re_min = window.re_min + window.width() * i / nx;
      c.re_max = window.re_min + window.width() * (i + 1) / nx;
      c.im_min = window.im_min + window.height() * j / ny;
      c.im_max = window.im_min + window.height() * (j + 1) / ny;
      tasks.push_back({c, 0});
    }
  }

  std::vector<LocatedZero> found;
  std::vector<UnresolvedCell> unresolved;

  auto subdivide = [&tasks](const Window& c, int depth) {
    // Split lines are jittered off center so a zero sitting exactly on a
    // midline (e.g. on the real axis) does not straddle the children.
    std::uint64_t h = cell_seed(c, 0x2545f491u);
    h = splitmix64(h);
    const double fx = 0.48 + 0.04 * unit_interval(h);
    h = splitmix64(h);
    const double fy = 0.48 + 0.04 * unit_interval(h);
    const double cx = c.re_min + fx * c.width();
    const double cy = c.im_min + fy * c.height();
    tasks.push_back({{c.re_min, cx, c.im_min, cy}, depth + 1});
    tasks.push_back({{cx, c.re_max, c.im_min, cy}, depth + 1});
    tasks.push_back({{c.re_min, cx, cy, c.im_max}, depth + 1});
    tasks.push_back({{cx, c.re_max, cy, c.im_max}, depth + 1});
  };

  while (!tasks.empty()) {
    Task task = tasks.back();
    tasks.pop_back();
    Window cell = task.cell;
    const int w = winding_with_retry(f, cell, rate);
    if (w == 0) continue;
    if (w == -1) {
      unresolved.push_back({cell, -1});
      continue;
    }
    const double size = std::max(cell.width(), cell.height());
    if (w == 1) {
      const Energy center(0.5 * (cell.re_min + cell.re_max), 0.5 * (cell.im_min + cell.im_max));
      const auto refined = newton_refine(f, center, tol, 100);
      if (refined.has_value()) {
        // Accept only when Newton stayed home; otherwise tighten the cell
        // around the zero first.
        const double margin = 0.2 * size;
        const Window accept{cell.re_min - margin, cell.re_max + margin, cell.im_min - margin,
                            cell.im_max + margin};
        if (accept.contains(refined->energy)) {
          found.push_back({refined->energy, refined->residual});
          continue;
        }
      }
      if (task.depth < options.max_subdivision_depth && size > min_size) {
        subdivide(cell, task.depth);
      } else {
        unresolved.push_back({cell, w});
      }
      continue;
    }
    // w >= 2
    if (size <= min_size || task.depth >= options.max_subdivision_depth) {
      unresolved.push_back({cell, w});
    } else {
      subdivide(cell, task.depth);
    }
  }

  // Deduplicate: dilated neighbor cells can both capture a boundary zero.
  sort_zeros(found);
  std::vector<LocatedZero> unique;
  for (const LocatedZero& z : found) {
    bool merged = false;
    for (LocatedZero& u : unique) {
      if (std::abs(u.energy - z.energy) <= 10.0 * tol) {
        if (z.residual < u.residual) u = z;
        merged = true;
        break;
      }
    }
    if (!merged) unique.push_back(z);
  }
  sort_zeros(unique);

  std::sort(unresolved.begin(), unresolved.end(), [](const UnresolvedCell& a, const UnresolvedCell& b) {
    if (a.cell.re_min != b.cell.re_min) return a.cell.re_min < b.cell.re_min;
    return a.cell.im_min < b.cell.im_min;
  });

  return {std::move(unique), std::move(unresolved)};
}

SpectrumReport classify_spectrum(const StructureSpec& spec, const Window& window,
                                 double real_axis_tol, const ZeroSearchOptions& options) {
  if (!(real_axis_tol >= 0.0)) throw InvalidInput("real_axis_tol must be non-negative");

  SpectrumReport report;
  report.search_window = window;
  report.real_axis_tol = real_axis_tol;
  report.refinement_tol = options.refinement_tol;
  report.structure_hash = spec.content_hash();
  report.continuum_note = "continuous spectrum: entire real energy axis";

  for (const MatrixEntry entry : {MatrixEntry::M11, MatrixEntry::M22}) {
    const ZeroSearchResult zr = find_zeros(spec, entry, window, options);
    for (const LocatedZero& z : zr.zeros) {
      SpectralPoint p;
      p.energy = z.energy;
      p.entry = entry;
      p.residual = z.residual;
      if (std::abs(z.energy.imag()) <= real_axis_tol) {
        p.kind = SpectralKind::spectral_singularity;
        p.subtype = (entry == MatrixEntry::M22) ? SingularitySubtype::lasing
                                                : SingularitySubtype::reflectionless;
      } else if (entry == MatrixEntry::M22) {
        p.kind = (z.energy.imag() > 0.0) ? SpectralKind::bound_state : SpectralKind::resonance;
      } else {
        p.kind = (z.energy.imag() > 0.0) ? SpectralKind::antiresonance : SpectralKind::bound_state;
      }
      report.points.push_back(p);
    }
    for (const UnresolvedCell& cell : zr.unresolved) {
      report.unresolved.push_back({entry, cell.cell, cell.winding});
    }
  }

  std::sort(report.points.begin(), report.points.end(),
            [](const SpectralPoint& a, const SpectralPoint& b) {
              if (a.energy.real() != b.energy.real()) return a.energy.real() < b.energy.real();
              if (a.energy.imag() != b.energy.imag()) return a.energy.imag() < b.energy.imag();
              return static_cast<int>(a.entry) < static_cast<int>(b.entry);
            });
  return report;
}

// --- threshold tracking ---------------------------------------------------

namespace {

struct TrackState {
  double lambda = 0.0;
  std::vector<Energy> zeros;
};

struct TrackContext {
  StructureFamily family;
  double m0L;
  MatrixEntry entry;
  Window window;
  std::vector<std::string> notes;
};

// Moves every tracked zero to the structure at lambda_next by warm-started
// Newton.  Returns nothing when a zero refused to converge or jumped
// implausibly far (caller halves the step).  Collisions (two zeros merging
// at an entry degeneracy) trigger a local re-search around the merge point
// so both post-collision branches are recovered.
std::optional<std::vector<Energy>> attempt_step(TrackContext& ctx, const std::vector<Energy>& prev,
                                                double lambda_next, double dlambda) {
  const StructureSpec spec = make_family_structure(ctx.family, ctx.m0L, lambda_next);
  const Evaluator f{&spec, ctx.entry};
  const double cap = 0.2 + 5.0 * dlambda;

  std::vector<Energy> moved;
  moved.reserve(prev.size());
  for (const Energy& z : prev) {
    const auto r = newton_refine(f, z, 1e-10, 60);
    if (!r.has_value()) return std::nullopt;
    if (std::abs(r->energy - z) > cap) return std::nullopt;
    moved.push_back(r->energy);
  }

  // Merge detection: distinct seeds converging to one point.
  std::vector<Energy> out;
  std::vector<Energy> merge_points;
  for (const Energy& z : moved) {
    bool dup = false;
    for (const Energy& u : out) {
      if (std::abs(u - z) <= 1e-7) {
        dup = true;
        merge_points.push_back(u);
        break;
      }
    }
    if (!dup) out.push_back(z);
  }
  for (const Energy& m : merge_points) {
    Window box{m.real() - 0.5, m.real() + 0.5, m.imag() - 0.5, m.imag() + 0.5};
    ZeroSearchOptions opts;
    opts.refinement_tol = 1e-10;
    const ZeroSearchResult local = find_zeros(spec, ctx.entry, box, opts);
    for (const LocatedZero& z : local.zeros) {
      bool known = false;
      for (const Energy& u : out) {
        if (std::abs(u - z.energy) <= 1e-7) {
          known = true;
          break;
        }
      }
      if (!known) out.push_back(z.energy);
    }
  }

  std::vector<Energy> inside;
  for (const Energy& z : out) {
    if (ctx.window.contains(z)) {
      inside.push_back(z);
    } else {
      std::ostringstream msg;
      msg << "zero at E = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
          << "i left the window at lambda = " << lambda_next;
      ctx.notes.push_back(msg.str());
    }
  }
  if (inside.empty()) {
    std::ostringstream msg;
    msg << "every tracked zero left the search window by lambda = " << lambda_next
        << "; enlarge the window";
    for (const std::string& n : ctx.notes) msg << "\n  " << n;
    throw ConvergenceError(msg.str());
  }
  return inside;
}

void advance(TrackContext& ctx, TrackState& state, double target) {
  const double step0 = 0.25;
  double step = step0;
  while (state.lambda < target - 1e-15) {
    const double next = std::min(target, state.lambda + step);
    auto moved = attempt_step(ctx, state.zeros, next, next - state.lambda);
    if (!moved.has_value()) {
      step *= 0.5;
      if (step < 1e-7) {
        std::ostringstream msg;
        msg << "zero tracking stalled near lambda = " << state.lambda
            << " (Newton warm restarts kept failing)";
        throw ConvergenceError(msg.str());
      }
      continue;
    }
    state.lambda = next;
    state.zeros = std::move(*moved);
    step = std::min(step0, step * 1.7);
  }
}

bool crossed(const TrackState& state, int direction) {
  for (const Energy& z : state.zeros) {
    if (direction * z.imag() >= 0.0) return true;
  }
  return false;
}

}  // namespace

ThresholdResult threshold_lambda_c_detailed(StructureFamily family, double m0L,
                                            const Window& window, double tol) {
  if (!(m0L > 0.0)) throw InvalidInput("threshold needs m0L > 0");
  if (!(tol >= 1e-6)) throw InvalidInput("threshold tol must be >= 1e-6");

  // The loss family never loses transmission poles (M22 zeros stay below the
  // axis); its singularities come from the other diagonal entry.
  const MatrixEntry entry =
      (family == StructureFamily::uniform_loss) ? MatrixEntry::M11 : MatrixEntry::M22;
  const int direction = (family == StructureFamily::uniform_loss) ? -1 : +1;

  TrackContext ctx{family, m0L, entry, window, {}};

  const StructureSpec spec0 = make_family_structure(family, m0L, 0.0);
  ZeroSearchOptions opts;
  opts.refinement_tol = 1e-10;
  const ZeroSearchResult zr = find_zeros(spec0, entry, window, opts);
  if (zr.zeros.empty()) {
    std::ostringstream msg;
    msg << "no zeros of " << to_string(entry) << " inside the window at lambda = 0"
        << "; enlarge the window";
    throw ConvergenceError(msg.str());
  }

  TrackState lo{0.0, {}};
  for (const LocatedZero& z : zr.zeros) lo.zeros.push_back(z.energy);

  ThresholdResult result;
  result.entry = entry;

  if (crossed(lo, direction)) {
    // A zero already sits on the axis with no gain at all.
    result.lambda_c = 0.0;
    for (const Energy& z : lo.zeros) {
      if (direction * z.imag() >= 0.0) result.crossing_energies.push_back(z);
    }
    return result;
  }

  double bracket_max = 2.0 * (m0L + 5.0);
  bool expanded = false;
  TrackState hi_state;
  bool have_hi = false;
  while (!have_hi) {
    if (lo.lambda >= bracket_max - 1e-12) {
      if (!expanded) {
        bracket_max *= 4.0;
        expanded = true;
      } else {
        std::ostringstream msg;
        msg << "no real-axis crossing of " << to_string(entry) << " zeros up to lambda = "
            << bracket_max;
        throw ConvergenceError(msg.str());
      }
    }
    const double next = std::min(bracket_max, lo.lambda + 0.25);
    TrackState trial = lo;
    advance(ctx, trial, next);
    if (crossed(trial, direction)) {
      hi_state = trial;
      have_hi = true;
    } else {
      lo = std::move(trial);
    }
  }

  int steps = 0;
  while (hi_state.lambda - lo.lambda > tol) {
    const double mid = 0.5 * (lo.lambda + hi_state.lambda);
    TrackState trial = lo;
    advance(ctx, trial, mid);
    if (crossed(trial, direction)) {
      hi_state = std::move(trial);
    } else {
      lo = std::move(trial);
    }
    ++steps;
  }

  result.lambda_c = 0.5 * (lo.lambda + hi_state.lambda);
  result.bisection_steps = steps;
  for (const Energy& z : hi_state.zeros) {
    if (direction * z.imag() >= -10.0 * tol) result.crossing_energies.push_back(z);
  }
  if (result.crossing_energies.empty() && !hi_state.zeros.empty()) {
    Energy best = hi_state.zeros.front();
    for (const Energy& z : hi_state.zeros) {
      if (direction * z.imag() > direction * best.imag()) best = z;
    }
    result.crossing_energies.push_back(best);
  }
  std::sort(result.crossing_energies.begin(), result.crossing_energies.end(),
            [](const Energy& a, const Energy& b) { return a.real() < b.real(); });
  return result;
}

double threshold_lambda_c(StructureFamily family, double m0L, const Window& window, double tol) {
  return threshold_lambda_c_detailed(family, m0L, window, tol).lambda_c;
}

// --- trajectory tracing ---------------------------------------------------

TraceResult trace_zeros(StructureFamily family, double m0L, const std::vector<double>& lambda_values,
                        const Window& window, const ZeroSearchOptions& options) {
  if (lambda_values.empty()) throw InvalidInput("trace_zeros needs at least one lambda value");
  for (std::size_t i = 0; i + 1 < lambda_values.size(); ++i) {
    if (!(lambda_values[i] < lambda_values[i + 1])) {
      throw InvalidInput("trace_zeros lambda grid must be strictly ascending");
    }
  }

  TraceResult result;
  for (const double lam : lambda_values) {
    const StructureSpec spec = make_family_structure(family, m0L, lam);
    result.reports.emplace_back(lam, classify_spectrum(spec, window, 1e-6, options));
  }

  std::vector<int> prev_ids;
  int next_id = 0;
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    const double lam = result.reports[k].first;
    const auto& points = result.reports[k].second.points;
    std::vector<int> ids(points.size(), -1);
    std::vector<bool> ambiguous(points.size(), false);

    if (k == 0) {
      for (std::size_t i = 0; i < points.size(); ++i) ids[i] = next_id++;
    } else {
      const auto& prev_points = result.reports[k - 1].second.points;
      const double dlam = lam - result.reports[k - 1].first;
      const double cap = 0.5 + 3.0 * dlam;

      struct Link {
        double d;
        std::size_t i;  // previous index
        std::size_t j;  // current index
      };
      std::vector<Link> links;
      for (std::size_t i = 0; i < prev_points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
          if (prev_points[i].entry != points[j].entry) continue;
          const double d = std::abs(prev_points[i].energy - points[j].energy);
          if (d <= cap) links.push_back({d, i, j});
        }
      }
      std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.d < b.d; });

      std::vector<bool> prev_used(prev_points.size(), false);
      std::vector<bool> cur_used(points.size(), false);
      for (const Link& link : links) {
        if (prev_used[link.i] || cur_used[link.j]) continue;
        prev_used[link.i] = true;
        cur_used[link.j] = true;
        ids[link.j] = prev_ids[link.i];
        // Nearest-neighbor confidence: how close was the best alternative
        // for either endpoint?
        double second = std::numeric_limits<double>::infinity();
        for (const Link& other : links) {
          if (&other == &link) continue;
          if (other.i == link.i || other.j == link.j) second = std::min(second, other.d);
        }
        if (link.d == 0.0 ? second == 0.0 : second < 2.0 * link.d) ambiguous[link.j] = true;
      }
      for (std::size_t j = 0; j < points.size(); ++j) {
        if (ids[j] < 0) ids[j] = next_id++;
      }
    }

    for (std::size_t j = 0; j < points.size(); ++j) {
      result.rows.push_back({lam, ids[j], points[j], ambiguous[j]});
    }
    prev_ids = std::move(ids);
  }

  std::sort(result.rows.begin(), result.rows.end(), [](const TraceRow& a, const TraceRow& b) {
    if (a.lambdaL != b.lambdaL) return a.lambdaL < b.lambdaL;
    return a.trajectory_id < b.trajectory_id;
  });
  return result;
}

}  // namespace diracdfb
