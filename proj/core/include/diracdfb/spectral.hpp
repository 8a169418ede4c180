#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diracdfb/types.hpp"

namespace diracdfb {

// Which transfer-matrix entry a zero belongs to.  Zeros of M22 are poles of
// the transmission t = 1/M22; zeros of M11 are poles of the lower-half-plane
// resolvent.
enum class MatrixEntry { M11, M22 };

std::string_view to_string(MatrixEntry entry);

// Axis-aligned search rectangle in the complex energy plane.
struct Window {
  double re_min = -20.0;
  double re_max = 20.0;
  double im_min = -10.0;
  double im_max = 10.0;

  static Window default_window() { return Window{}; }

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(Energy E) const {
    return E.real() >= re_min && E.real() <= re_max && E.imag() >= im_min && E.imag() <= im_max;
  }
};

struct ZeroSearchOptions {
  // Requested absolute accuracy of each zero location, in [1e-13, 1e-3].
  double refinement_tol = 1e-9;
  // Cells are never split more than this many times.
  int max_subdivision_depth = 40;
};

// A cell the search could not resolve into isolated simple zeros (winding
// count >= 2 at the minimum cell size, a Newton run that failed to converge,
// or, with winding -1, a perimeter that kept landing on zeros after repeated
// dilation).  Never silently dropped.
struct UnresolvedCell {
  Window cell{};
  int winding = 0;
};

struct LocatedZero {
  Energy energy{};
  // |entry| at the zero divided by the largest matrix-entry magnitude,
  // exponent-aware; a faithful "how exactly does it vanish" figure.
  double residual = 0.0;
};

struct ZeroSearchResult {
  std::vector<LocatedZero> zeros;  // sorted by (Re, Im), deduplicated
  std::vector<UnresolvedCell> unresolved;
};

// Counting integral of the chosen entry around the rectangle perimeter
// (accumulated phase / 2pi, with adaptive sampling keeping every phase step
// below pi/2).  The cell is dilated by a small random factor and recounted
// when the perimeter passes through a zero.
int winding_number(const StructureSpec& spec, MatrixEntry entry, const Window& cell);

// Locates every simple zero of the selected entry inside the window to
// |dE| <= refinement_tol: recursive rectangle subdivision on the winding
// count until each cell holds at most one zero, then Newton refinement with
// a central-difference derivative.
ZeroSearchResult find_zeros(const StructureSpec& spec, MatrixEntry entry, const Window& window,
                            const ZeroSearchOptions& options = {});

enum class SpectralKind { bound_state, resonance, antiresonance, spectral_singularity };
enum class SingularitySubtype { lasing, reflectionless };

std::string_view to_string(SpectralKind kind);
std::string_view to_string(SingularitySubtype subtype);

// One classified zero.  The label follows from the entry and the half
// plane: M22 zeros are bound states above the real axis and resonances
// below; M11 zeros are antiresonances above and bound states below; within
// real_axis_tol of the axis either entry gives a spectral singularity
// (lasing type for M22, reflectionless type for M11).
struct SpectralPoint {
  Energy energy{};
  MatrixEntry entry = MatrixEntry::M22;
  SpectralKind kind = SpectralKind::resonance;
  std::optional<SingularitySubtype> subtype{};
  double residual = 0.0;
};

struct UnresolvedRegion {
  MatrixEntry entry = MatrixEntry::M22;
  Window cell{};
  int winding = 0;
};

struct SpectrumReport {
  std::vector<SpectralPoint> points;  // sorted by (Re, Im, entry)
  std::vector<UnresolvedRegion> unresolved;
  Window search_window{};
  double real_axis_tol = 1e-6;
  double refinement_tol = 1e-9;
  std::uint64_t structure_hash = 0;
  // The continuous spectrum is not a list of points; it is reported as this
  // constant banner.
  std::string continuum_note{};
};

// Zeros of both entries inside the window, classified and merged into one
// sorted report.  Points of the same entry closer than 10x refinement_tol
// are deduplicated; coincident zeros of different entries are kept (they
// carry distinct physics, e.g. the two singularity types of a symmetric
// structure at threshold).
SpectrumReport classify_spectrum(const StructureSpec& spec, const Window& window,
                                 double real_axis_tol = 1e-6, const ZeroSearchOptions& options = {});

// The built-in one-parameter families used throughout: a single uniform
// amplifying segment, the same segment absorbing, and the half-amplifying /
// half-absorbing symmetric pair.
enum class StructureFamily { uniform_gain, uniform_loss, pt_pair };

std::string_view to_string(StructureFamily family);
std::optional<StructureFamily> family_from_name(std::string_view name);

StructureSpec make_family_structure(StructureFamily family, double m0L, double lambdaL);

struct ThresholdResult {
  // Smallest lambdaL at which a zero of `entry` reaches the real axis.
  double lambda_c = 0.0;
  MatrixEntry entry = MatrixEntry::M22;
  // The zeros on/nearest the axis at the upper bracket end (Re-symmetric
  // pairs for the symmetric families).
  std::vector<Energy> crossing_energies;
  int bisection_steps = 0;
};

// Critical gain of a family: zeros of the relevant entry (M11 for
// uniform_loss, M22 otherwise) are tracked in lambdaL by warm-started Newton
// steps, and the first real-axis crossing is bracketed and bisected to
// within tol (tol >= 1e-6).  Throws ConvergenceError with a diagnostic when
// every tracked zero escapes the window before crossing, or when no
// crossing occurs below the expanded bracket limit.
ThresholdResult threshold_lambda_c_detailed(StructureFamily family, double m0L,
                                            const Window& window = Window::default_window(),
                                            double tol = 1e-4);

double threshold_lambda_c(StructureFamily family, double m0L,
                          const Window& window = Window::default_window(), double tol = 1e-4);

// One classified zero at one lambdaL value, linked across the lambda grid.
struct TraceRow {
  double lambdaL = 0.0;
  int trajectory_id = 0;
  SpectralPoint point{};
  // Set when the nearest-neighbor link that produced this row was ambiguous
  // (second-best candidate closer than twice the chosen one): a trajectory
  // collision or bifurcation.
  bool ambiguous_link = false;
};

struct TraceResult {
  std::vector<std::pair<double, SpectrumReport>> reports;  // per lambdaL, ascending
  std::vector<TraceRow> rows;                              // sorted by (lambdaL, trajectory_id)
};

// Classifies the spectrum at every lambdaL in ascending `lambda_values` and
// links zeros of consecutive reports (same entry, greedy nearest neighbor)
// into trajectories.
TraceResult trace_zeros(StructureFamily family, double m0L, const std::vector<double>& lambda_values,
                        const Window& window = Window::default_window(),
                        const ZeroSearchOptions& options = {});

}  // namespace diracdfb
