// End-to-end acceptance gate for the toolkit.  Each criterion prints one
// PASS/FAIL line; the process exits nonzero if any fails.  Tolerances are
// pinned here on purpose: they are the contract, not tuning knobs.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diracdfb/errors.hpp"
#include "diracdfb/green.hpp"
#include "diracdfb/scattering.hpp"
#include "diracdfb/spectral.hpp"
#include "diracdfb/transfer_matrix.hpp"
#include "diracdfb/types.hpp"

using namespace diracdfb;

namespace {

bool all_pass = true;

void report(int n, bool pass, const std::string& text) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", n, text.c_str());
  if (!pass) all_pass = false;
}

void run_criterion(int n, const std::string& label, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("threw: ") + e.what();
    ok = false;
  }
  report(n, ok, label + (detail.empty() ? "" : " [" + detail + "]"));
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- helpers -------------------------------------------------------------

double cli_threshold(const std::string& family, std::string& detail) {
  const std::string path = "acceptance_tmp_threshold_" + family + ".txt";
  const std::string cmd = std::string(DIRACDFB_TOOL_PATH) + " threshold --family " + family +
                          " --m0L 1 --tol 1e-4 > " + path;
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    detail = "tool exited abnormally";
    return std::nan("");
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  const std::string prefix = "lambda_c_L = ";
  if (line.rfind(prefix, 0) != 0) {
    detail = "unexpected output '" + line + "'";
    return std::nan("");
  }
  return std::strtod(line.c_str() + prefix.size(), nullptr);
}

double abs_t(const StructureSpec& spec, double E) {
  const TransferMatrix m = structure_matrix(spec, Energy(E, 0.0));
  return std::ldexp(1.0 / std::abs(m.m22), -m.scale_exp);
}

double max_abs_t_near(const StructureSpec& spec, double center, double half_width, int n) {
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double E = center - half_width + 2.0 * half_width * i / (n - 1);
    best = std::max(best, abs_t(spec, E));
  }
  return best;
}

struct PeakShape {
  double energy = 0.0;
  double height = 0.0;
  double width = 0.0;  // local-quadratic width 2 sqrt(peak / |curvature|)
};

PeakShape resonance_shape(const StructureSpec& spec) {
  // Coarse grid over the first resonance above the gap, then a ternary
  // search, then a five-point second difference with a width-matched step.
  double e_best = 2.4, f_best = 0.0;
  const int n = 4801;
  for (int i = 0; i < n; ++i) {
    const double E = 2.4 + 1.2 * i / (n - 1.0);
    const double f = abs_t(spec, E);
    if (f > f_best) {
      f_best = f;
      e_best = E;
    }
  }
  double lo = e_best - 2.5e-4, hi = e_best + 2.5e-4;
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (abs_t(spec, m1) < abs_t(spec, m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  PeakShape shape;
  shape.energy = 0.5 * (lo + hi);
  shape.height = abs_t(spec, shape.energy);

  double h = 1e-3;
  for (int pass = 0; pass < 2; ++pass) {
    const double f0 = abs_t(spec, shape.energy);
    const double fp = abs_t(spec, shape.energy + h), fm = abs_t(spec, shape.energy - h);
    const double fpp = abs_t(spec, shape.energy + 2 * h), fmm = abs_t(spec, shape.energy - 2 * h);
    const double d2 = (-fpp + 16 * fp - 30 * f0 + 16 * fm - fmm) / (12 * h * h);
    shape.width = 2.0 * std::sqrt(shape.height / std::abs(d2));
    const double h_matched = std::max(1e-4, shape.width / 20.0);
    if (std::abs(h_matched - h) / h < 0.5) break;
    h = h_matched;
  }
  return shape;
}

StructureSpec random_structure(std::mt19937_64& rng, int max_segments = 8) {
  std::uniform_int_distribution<int> count(1, max_segments);
  std::uniform_real_distribution<double> raw_length(0.2, 1.0);
  std::uniform_real_distribution<double> mass(0.0, 5.0);
  std::uniform_real_distribution<double> param(-5.0, 5.0);
  const int n = count(rng);
  std::vector<double> lengths(n);
  double sum = 0.0;
  for (auto& l : lengths) {
    l = raw_length(rng);
    sum += l;
  }
  std::vector<Segment> segments(n);
  for (int i = 0; i < n; ++i) {
    segments[i].length = lengths[i] / sum;
    segments[i].mass = mass(rng);
    segments[i].gain = param(rng);
    segments[i].detuning = param(rng);
  }
  return StructureSpec(std::move(segments));
}

Energy random_disk_energy(std::mt19937_64& rng, double bound) {
  std::uniform_real_distribution<double> u(-bound, bound);
  for (;;) {
    const double re = u(rng), im = u(rng);
    if (re * re + im * im <= bound * bound && std::abs(im) >= 1e-3) return Energy(re, im);
  }
}

}  // namespace

int main() {
  // 1: the amplifier lases at the frozen critical pump.
  run_criterion(1, "uniform amplifier threshold within 1.755 +/- 0.005", [](std::string& detail) {
    const double lc = cli_threshold("uniform-gain", detail);
    if (std::isnan(lc)) return false;
    detail = "lambda_c_L = " + g17(lc);
    return std::abs(lc - 1.755) <= 0.005;
  });

  // 2: the balanced gain/loss pair breaks symmetry at the frozen pump.
  run_criterion(2, "balanced-pair threshold within 4.46 +/- 0.02", [](std::string& detail) {
    const double lc = cli_threshold("pt-pair", detail);
    if (std::isnan(lc)) return false;
    detail = "lambda_c_L = " + g17(lc);
    return std::abs(lc - 4.46) <= 0.02;
  });

  // 3: absorber duality: same critical strength, opposite entry and
  // physics (reflectionless instead of lasing; bounded instead of
  // divergent transmission).
  run_criterion(3, "absorber threshold mirrors the amplifier threshold", [](std::string& detail) {
    const double tol = 1e-6;
    const auto gain = threshold_lambda_c_detailed(StructureFamily::uniform_gain, 1.0,
                                                  Window::default_window(), tol);
    const auto loss = threshold_lambda_c_detailed(StructureFamily::uniform_loss, 1.0,
                                                  Window::default_window(), tol);
    detail = "gain=" + g17(gain.lambda_c) + " loss=" + g17(loss.lambda_c);
    if (std::abs(gain.lambda_c - loss.lambda_c) > 2 * tol) return false;
    if (loss.entry != MatrixEntry::M11) return false;

    const auto cpa = classify_spectrum(make_uniform_gain_structure(1.0, loss.lambda_c, false),
                                       Window::default_window(), 1e-4);
    bool reflectionless_seen = false;
    for (const auto& p : cpa.points) {
      if (p.kind == SpectralKind::spectral_singularity) {
        if (p.entry != MatrixEntry::M11) return false;
        if (!p.subtype.has_value() || *p.subtype != SingularitySubtype::reflectionless)
          return false;
        reflectionless_seen = true;
      }
    }
    if (!reflectionless_seen) return false;

    double ec = 0.0;
    for (const Energy& e : gain.crossing_energies) ec = std::max(ec, e.real());
    const double amplified =
        max_abs_t_near(make_uniform_gain_structure(1.0, gain.lambda_c), ec, 1e-4, 21);
    const double absorbed =
        max_abs_t_near(make_uniform_gain_structure(1.0, loss.lambda_c, false), ec, 1e-4, 21);
    detail += " |t|_gain=" + g17(amplified) + " |t|_loss=" + g17(absorbed);
    return amplified > 1e3 && absorbed < 10.0;
  });

  // 4: just past threshold each family holds exactly one symmetric pair of
  // discrete eigenvalues.
  run_criterion(4, "two bound states per family at lambdaL = 1.9", [](std::string& detail) {
    const auto gain =
        classify_spectrum(make_uniform_gain_structure(1.0, 1.9), Window::default_window());
    const auto loss =
        classify_spectrum(make_uniform_gain_structure(1.0, 1.9, false), Window::default_window());
    std::vector<Energy> g, l;
    for (const auto& p : gain.points) {
      if (p.kind == SpectralKind::bound_state) {
        if (p.entry != MatrixEntry::M22 || p.energy.imag() <= 0.0) return false;
        g.push_back(p.energy);
      }
    }
    for (const auto& p : loss.points) {
      if (p.kind == SpectralKind::bound_state) {
        if (p.entry != MatrixEntry::M11 || p.energy.imag() >= 0.0) return false;
        l.push_back(p.energy);
      }
    }
    detail = "amplifier=" + std::to_string(g.size()) + " absorber=" + std::to_string(l.size());
    if (g.size() != 2 || l.size() != 2) return false;
    return std::abs(g[0].real() + g[1].real()) <= 1e-6 &&
           std::abs(l[0].real() + l[1].real()) <= 1e-6;
  });

  // 5: pumping harder makes the dominant resonance taller and narrower,
  // monotonically along the frozen pump ladder.
  run_criterion(5, "resonance peak grows and narrows with pump", [](std::string& detail) {
    const double pumps[] = {0.0, 1.0, 1.5, 1.65, 1.74};
    double last_height = 0.0, last_width = 1e300;
    std::ostringstream log;
    for (const double lambda : pumps) {
      const PeakShape s = resonance_shape(make_uniform_gain_structure(1.0, lambda));
      log << " (" << lambda << ": h=" << s.height << " w=" << s.width << ")";
      if (!(s.height > last_height) || !(s.width < last_width)) {
        detail = "monotonicity broken at lambdaL=" + g17(lambda) + log.str();
        return false;
      }
      last_height = s.height;
      last_width = s.width;
    }
    detail = log.str().substr(1);
    return true;
  });

  // 6: the six 200-case property suites, each with its pinned bound.
  run_criterion(6, "property suites over 200-case random ensembles", [](std::string& detail) {
    double det_worst = 0.0, branch_worst = 0.0, unitarity_worst = 0.0, pt_worst = 0.0,
           shift_worst = 0.0, oracle_worst = 0.0;

    {
      std::mt19937_64 rng(1001);
      for (int i = 0; i < 200; ++i) {
        const StructureSpec spec = random_structure(rng);
        std::uniform_real_distribution<double> u(-20.0, 20.0);
        det_worst = std::max(det_worst, structure_matrix(spec, Energy(u(rng), 0.0)).det_defect());
      }
    }
    {
      std::mt19937_64 rng(1002);
      for (int i = 0; i < 200; ++i) {
        const StructureSpec spec = random_structure(rng, 1);
        const Energy E = random_disk_energy(rng, 20.0);
        SegmentMatrixParams p = segment_matrix_params(spec.segments()[0], E);
        const TransferMatrix plus = segment_matrix(spec.segments()[0], E, p);
        p.rho = -p.rho;
        branch_worst =
            std::max(branch_worst,
                     max_relative_difference(plus, segment_matrix(spec.segments()[0], E, p)));
      }
    }
    {
      std::mt19937_64 rng(1003);
      for (int i = 0; i < 200; ++i) {
        std::vector<Segment> hermitian = random_structure(rng).segments();
        for (Segment& s : hermitian) s.gain = 0.0;
        std::uniform_real_distribution<double> u(-20.0, 20.0);
        const auto c = scattering_coefficients(StructureSpec(hermitian), Energy(u(rng), 0.0));
        unitarity_worst =
            std::max(unitarity_worst, std::abs(std::norm(c.t) + std::norm(c.r_left) - 1.0));
      }
    }
    {
      std::mt19937_64 rng(1004);
      for (int i = 0; i < 200; ++i) {
        // Mirror the left half with negated gain: exact balanced symmetry.
        const StructureSpec half = random_structure(rng, 4);
        std::vector<Segment> segments = half.segments();
        for (auto& s : segments) s.length *= 0.5;
        const std::size_t n_left = segments.size();
        for (std::size_t k = 0; k < n_left; ++k) {
          Segment s = segments[n_left - 1 - k];
          s.gain = -s.gain;
          segments.push_back(s);
        }
        const StructureSpec spec(std::move(segments));
        const Energy E = random_disk_energy(rng, 10.0);
        const TransferMatrix a = structure_matrix(spec, E);
        const TransferMatrix b = structure_matrix(spec, std::conj(E));
        const double scale = std::max(a.max_abs_stored(), b.max_abs_stored());
        if (a.scale_exp != b.scale_exp) return false;
        pt_worst = std::max(pt_worst, std::abs(a.m11 - std::conj(b.m22)) / scale);
      }
    }
    {
      std::mt19937_64 rng(1005);
      for (int i = 0; i < 200; ++i) {
        std::vector<Segment> segments = random_structure(rng, 4).segments();
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        const double gamma = u(rng);
        std::vector<Segment> stripped = segments;
        for (auto& s : segments) s.gain = gamma;
        for (auto& s : stripped) s.gain = 0.0;
        const Energy E = random_disk_energy(rng, 10.0);
        shift_worst = std::max(
            shift_worst, max_relative_difference(structure_matrix(StructureSpec(segments), E),
                                                 structure_matrix(StructureSpec(stripped),
                                                                  E + Complex(0.0, gamma))));
      }
    }
    {
      std::mt19937_64 rng(1006);
      for (int i = 0; i < 200; ++i) {
        const StructureSpec spec = random_structure(rng);
        const Energy E = random_disk_energy(rng, 20.0);
        oracle_worst = std::max(oracle_worst,
                                max_relative_difference(structure_matrix(spec, E),
                                                        ode_oracle_matrix(spec, E, 2000)));
      }
    }

    std::ostringstream log;
    log << "det=" << det_worst << " branch=" << branch_worst << " unitarity=" << unitarity_worst
        << " conj=" << pt_worst << " shift=" << shift_worst << " oracle=" << oracle_worst;
    detail = log.str();
    return det_worst <= 1e-10 && branch_worst <= 1e-12 && unitarity_worst <= 1e-10 &&
           pt_worst <= 1e-10 && shift_worst <= 1e-12 && oracle_worst <= 1e-7;
  });

  // 7: the resolvent diverges like 1/delta at a lasing line and stays
  // bounded at a regular real energy.
  run_criterion(7, "resolvent boundedness scans near and away from a singularity",
                [](std::string& detail) {
    const auto gain = threshold_lambda_c_detailed(StructureFamily::uniform_gain, 1.0,
                                                  Window::default_window(), 1e-6);
    double ec = 0.0;
    for (const Energy& e : gain.crossing_energies) ec = std::max(ec, e.real());
    const std::vector<double> offsets = {1e-2, 1e-3, 1e-4};
    const auto singular = resolvent_bound_scan(make_uniform_gain_structure(1.0, gain.lambda_c), ec,
                                               ScanSide::above, offsets);
    const double slope = std::log10(singular[2].sup_norm / singular[0].sup_norm) /
                         std::log10(offsets[0] / offsets[2]);
    const auto regular =
        resolvent_bound_scan(make_uniform_gain_structure(1.0, 0.0), 1.0, ScanSide::above, offsets);
    const double ratio = regular[2].sup_norm / regular[0].sup_norm;
    detail = "slope=" + g17(slope) + " regular_ratio=" + g17(ratio);
    return std::abs(slope - 1.0) <= 0.1 && ratio < 10.0;
  });

  // 8: the zero census is stable under tighter search settings.
  run_criterion(8, "zero finder stable under depth x2 and tol / 10", [](std::string& detail) {
    const StructureSpec spec = make_uniform_gain_structure(1.0, 0.0);
    ZeroSearchOptions base;  // 1e-9, depth 40
    const auto coarse = find_zeros(spec, MatrixEntry::M22, Window::default_window(), base);
    ZeroSearchOptions tight;
    tight.refinement_tol = 1e-10;
    tight.max_subdivision_depth = 80;
    const auto fine = find_zeros(spec, MatrixEntry::M22, Window::default_window(), tight);
    detail = "coarse=" + std::to_string(coarse.zeros.size()) +
             " fine=" + std::to_string(fine.zeros.size());
    if (coarse.zeros.size() != fine.zeros.size()) return false;
    if (!coarse.unresolved.empty() || !fine.unresolved.empty()) return false;
    double worst = 0.0;
    for (const auto& z : coarse.zeros) {
      double best = 1e300;
      for (const auto& f : fine.zeros) best = std::min(best, std::abs(f.energy - z.energy));
      worst = std::max(worst, best);
    }
    detail += " max_shift=" + g17(worst);
    return worst <= 10.0 * base.refinement_tol;
  });

  return all_pass ? 0 : 1;
}
