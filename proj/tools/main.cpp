// Command-line front end: parses structure files or builds the builtin
// families, dispatches the computation, and emits deterministic CSV/JSON.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diracdfb/errors.hpp"
#include "diracdfb/green.hpp"
#include "diracdfb/report_io.hpp"
#include "diracdfb/scattering.hpp"
#include "diracdfb/spectral.hpp"
#include "diracdfb/structure_io.hpp"
#include "diracdfb/transfer_matrix.hpp"
#include "diracdfb/types.hpp"
#include "diracdfb/version.hpp"

namespace {

using diracdfb::Energy;
using diracdfb::StructureSpec;
using diracdfb::Window;

std::vector<double> parse_double_list(const std::string& text, const std::string& flag,
                                      std::size_t expected_count = 0) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string token =
        (comma == std::string::npos) ? text.substr(pos) : text.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
      throw diracdfb::InvalidInput(flag + " expects comma-separated numbers, got '" + text + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (expected_count != 0 && out.size() != expected_count) {
    throw diracdfb::InvalidInput(flag + " expects " + std::to_string(expected_count) +
                                 " comma-separated numbers, got '" + text + "'");
  }
  return out;
}

struct StructureOpts {
  std::string path;
  std::string family;
  double m0L = 0.0;
  double lambdaL = 0.0;
};

void add_structure_flags(CLI::App* cmd, StructureOpts& o) {
  cmd->add_option("--structure", o.path, "structure file (dirac-dfb-structure v1)");
  cmd->add_option("--family", o.family, "builtin family: uniform-gain|uniform-loss|pt-pair");
  cmd->add_option("--m0L", o.m0L, "dimensionless grating strength (builtin families)");
  cmd->add_option("--lambdaL", o.lambdaL, "dimensionless gain/loss strength (builtin families)");
}

// Builds the structure and a deterministic description of its source for the
// output header.
StructureSpec resolve_structure(const CLI::App* cmd, const StructureOpts& o, std::string& desc) {
  const bool has_file = cmd->count("--structure") > 0;
  const bool has_family = cmd->count("--family") > 0;
  if (has_file == has_family) {
    throw diracdfb::InvalidInput("provide exactly one structure source: --structure or --family");
  }
  if (has_file) {
    desc = "structure=" + o.path;
    return diracdfb::load_structure_file(o.path);
  }
  const auto family = diracdfb::family_from_name(o.family);
  if (!family.has_value()) {
    throw diracdfb::InvalidInput("unknown family '" + o.family +
                                 "' (expected uniform-gain, uniform-loss, or pt-pair)");
  }
  if (cmd->count("--m0L") == 0 || cmd->count("--lambdaL") == 0) {
    throw diracdfb::InvalidInput("--family requires --m0L and --lambdaL");
  }
  desc = "family=" + std::string(diracdfb::to_string(*family)) +
         " m0L=" + diracdfb::format_g17(o.m0L) + " lambdaL=" + diracdfb::format_g17(o.lambdaL);
  return diracdfb::make_family_structure(*family, o.m0L, o.lambdaL);
}

void emit(const std::string& out_path, const std::function<void(std::ostream&)>& writer) {
  if (out_path.empty()) {
    writer(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw diracdfb::InvalidInput("cannot open output file: " + out_path);
  writer(file);
  if (!file) throw diracdfb::InvalidInput("failed while writing output file: " + out_path);
}

Window parse_window(const std::string& text) {
  const std::vector<double> v = parse_double_list(text, "--window", 4);
  Window w{v[0], v[1], v[2], v[3]};
  if (!(w.re_min < w.re_max) || !(w.im_min < w.im_max)) {
    throw diracdfb::InvalidInput("--window expects re_min,re_max,im_min,im_max with min < max");
  }
  return w;
}

struct SpectrumCmd {
  StructureOpts structure;
  double emin = 0.0;
  double emax = 0.0;
  int points = 0;
  std::string out;
  CLI::App* cmd = nullptr;

  int run() const {
    std::string desc;
    const StructureSpec spec = resolve_structure(cmd, structure, desc);
    const auto rows = diracdfb::transmission_scan(spec, emin, emax, points);
    std::ostringstream cfg;
    cfg << "spectrum " << desc << " emin=" << diracdfb::format_g17(emin)
        << " emax=" << diracdfb::format_g17(emax) << " points=" << points;
    emit(out, [&](std::ostream& os) {
      diracdfb::write_spectrum_csv(os, diracdfb::report_header(cfg.str()), rows);
    });
    return 0;
  }
};

struct ZerosCmd {
  StructureOpts structure;
  std::string window_text = "-20,20,-10,10";
  double tol = 1e-9;
  std::string entry = "both";
  std::string out;
  CLI::App* cmd = nullptr;

  int run() const {
    std::string desc;
    const StructureSpec spec = resolve_structure(cmd, structure, desc);
    const Window window = parse_window(window_text);
    diracdfb::ZeroSearchOptions opts;
    opts.refinement_tol = tol;
    const auto report = diracdfb::classify_spectrum(spec, window, 1e-6, opts);

    std::vector<diracdfb::SpectralPoint> points;
    for (const auto& p : report.points) {
      if (entry == "both" || (entry == "m11" && p.entry == diracdfb::MatrixEntry::M11) ||
          (entry == "m22" && p.entry == diracdfb::MatrixEntry::M22)) {
        points.push_back(p);
      }
    }
    for (const auto& u : report.unresolved) {
      if (!(entry == "both" || (entry == "m11" && u.entry == diracdfb::MatrixEntry::M11) ||
            (entry == "m22" && u.entry == diracdfb::MatrixEntry::M22))) {
        continue;
      }
      std::cerr << "warning: unresolved cell [" << diracdfb::format_g17(u.cell.re_min) << ","
                << diracdfb::format_g17(u.cell.re_max) << "]x["
                << diracdfb::format_g17(u.cell.im_min) << ","
                << diracdfb::format_g17(u.cell.im_max) << "] entry=" << diracdfb::to_string(u.entry)
                << " winding=" << u.winding << '\n';
    }

    std::ostringstream cfg;
    cfg << "zeros " << desc << " window=" << diracdfb::format_g17(window.re_min) << ","
        << diracdfb::format_g17(window.re_max) << "," << diracdfb::format_g17(window.im_min) << ","
        << diracdfb::format_g17(window.im_max) << " tol=" << diracdfb::format_g17(tol)
        << " entry=" << entry;
    emit(out, [&](std::ostream& os) {
      diracdfb::write_zeros_json(os, diracdfb::report_header(cfg.str()), points);
    });
    return 0;
  }
};

struct ThresholdCmd {
  std::string family;
  double m0L = 0.0;
  double tol = 1e-4;

  int run() const {
    const auto fam = diracdfb::family_from_name(family);
    if (!fam.has_value()) {
      throw diracdfb::InvalidInput("unknown family '" + family +
                                   "' (expected uniform-gain, uniform-loss, or pt-pair)");
    }
    const auto result =
        diracdfb::threshold_lambda_c_detailed(*fam, m0L, Window::default_window(), tol);
    std::cout << "lambda_c_L = " << diracdfb::format_g17(result.lambda_c) << '\n';
    std::cout.flush();
    return 0;
  }
};

struct TraceCmd {
  std::string family;
  double m0L = 0.0;
  std::string grid_text;
  std::string out;

  int run() const {
    const auto fam = diracdfb::family_from_name(family);
    if (!fam.has_value()) {
      throw diracdfb::InvalidInput("unknown family '" + family +
                                   "' (expected uniform-gain, uniform-loss, or pt-pair)");
    }
    const std::vector<double> grid = parse_double_list(grid_text, "--lambda-grid");
    const auto result = diracdfb::trace_zeros(*fam, m0L, grid);
    std::ostringstream cfg;
    cfg << "trace family=" << diracdfb::to_string(*fam) << " m0L=" << diracdfb::format_g17(m0L)
        << " lambda-grid=";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i) cfg << ',';
      cfg << diracdfb::format_g17(grid[i]);
    }
    emit(out, [&](std::ostream& os) {
      diracdfb::write_trace_csv(os, diracdfb::report_header(cfg.str()), result.rows);
    });
    return 0;
  }
};

struct GreenCmd {
  StructureOpts structure;
  std::string energy_text;
  double scan_e0 = 0.0;
  std::string side = "above";
  std::string out;
  CLI::App* cmd = nullptr;

  int run() const {
    std::string desc;
    const StructureSpec spec = resolve_structure(cmd, structure, desc);
    const bool has_energy = cmd->count("--E") > 0;
    const bool has_scan = cmd->count("--scan-singularity") > 0;
    if (has_energy == has_scan) {
      throw diracdfb::InvalidInput("provide exactly one of --E re,im or --scan-singularity E0");
    }

    if (has_energy) {
      const std::vector<double> v = parse_double_list(energy_text, "--E", 2);
      const Energy E(v[0], v[1]);
      const auto G = diracdfb::green_eval(spec, E, 0.0, 0.0);
      std::ostringstream cfg;
      cfg << "green " << desc << " E=" << diracdfb::format_g17(v[0]) << ","
          << diracdfb::format_g17(v[1]);
      emit(out, [&](std::ostream& os) {
        os << diracdfb::report_header(cfg.str()) << '\n';
        os << "re_E,im_E,g11_re,g11_im,g12_re,g12_im,g21_re,g21_im,g22_re,g22_im\n";
        os << diracdfb::format_g17(v[0]) << ',' << diracdfb::format_g17(v[1]) << ','
           << diracdfb::format_g17(G.g11.real()) << ',' << diracdfb::format_g17(G.g11.imag()) << ','
           << diracdfb::format_g17(G.g12.real()) << ',' << diracdfb::format_g17(G.g12.imag()) << ','
           << diracdfb::format_g17(G.g21.real()) << ',' << diracdfb::format_g17(G.g21.imag()) << ','
           << diracdfb::format_g17(G.g22.real()) << ',' << diracdfb::format_g17(G.g22.imag())
           << '\n';
      });
      return 0;
    }

    const diracdfb::ScanSide scan_side =
        (side == "below") ? diracdfb::ScanSide::below : diracdfb::ScanSide::above;
    if (side != "above" && side != "below") {
      throw diracdfb::InvalidInput("--side must be above or below");
    }
    const std::vector<double> offsets = {1e-2, 1e-3, 1e-4};
    const auto rows = diracdfb::resolvent_bound_scan(spec, scan_e0, scan_side, offsets);
    std::ostringstream cfg;
    cfg << "green " << desc << " scan-singularity=" << diracdfb::format_g17(scan_e0)
        << " side=" << side << " offsets=1e-2,1e-3,1e-4";
    emit(out, [&](std::ostream& os) {
      diracdfb::write_resolvent_scan_csv(os, diracdfb::report_header(cfg.str()), rows);
    });
    return 0;
  }
};

struct CheckCmd {
  StructureOpts structure;
  CLI::App* cmd = nullptr;

  int run() const {
    std::string desc;
    const StructureSpec spec = resolve_structure(cmd, structure, desc);
    std::cout << diracdfb::report_header("check " + desc) << '\n';

    std::mt19937_64 rng(spec.content_hash());
    std::uniform_real_distribution<double> real_energy(-20.0, 20.0);

    double det_max = 0.0;
    for (int i = 0; i < 10; ++i) {
      const auto M = diracdfb::structure_matrix(spec, Energy(real_energy(rng), 0.0));
      det_max = std::max(det_max, M.det_defect());
    }
    const bool det_ok = det_max <= 1e-10;
    std::cout << "det_defect_max = " << diracdfb::format_g17(det_max) << '\n';

    std::uniform_real_distribution<double> re_dist(-10.0, 10.0);
    std::uniform_real_distribution<double> im_dist(-2.0, 2.0);
    double oracle_max = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Energy E(re_dist(rng), im_dist(rng));
      const auto analytic = diracdfb::structure_matrix(spec, E);
      const auto integrated = diracdfb::ode_oracle_matrix(spec, E, 2000);
      oracle_max = std::max(oracle_max, diracdfb::max_relative_difference(analytic, integrated));
    }
    const bool oracle_ok = oracle_max <= 1e-7;
    std::cout << "oracle_defect_max = " << diracdfb::format_g17(oracle_max) << '\n';

    const auto pt = diracdfb::pt_check(spec);
    std::cout << "pt_symmetric = " << (pt.symmetric ? "true" : "false") << '\n';

    bool unitarity_ok = true;
    if (spec.is_hermitian()) {
      double unit_max = 0.0;
      for (int i = 0; i < 10; ++i) {
        const auto sc = diracdfb::scattering_coefficients(spec, Energy(real_energy(rng), 0.0));
        unit_max = std::max(unit_max, std::abs(std::norm(sc.t) + std::norm(sc.r_left) - 1.0));
      }
      unitarity_ok = unit_max <= 1e-10;
      std::cout << "unitarity_defect_max = " << diracdfb::format_g17(unit_max) << '\n';
    } else {
      std::cout << "unitarity_defect_max = skipped (structure has gain or loss)\n";
    }

    const bool pass = det_ok && oracle_ok && unitarity_ok;
    std::cout << (pass ? "PASS" : "FAIL") << '\n';
    std::cout.flush();
    return pass ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"transmission spectra, complex-plane zero classification, lasing thresholds, and "
               "resolvent kernels of piecewise-uniform gain/loss grating structures"};
  app.set_version_flag("--version", std::string(diracdfb::tool_name) + " " +
                                        std::string(diracdfb::tool_version));
  app.require_subcommand(1);

  SpectrumCmd spectrum;
  spectrum.cmd = app.add_subcommand("spectrum", "real-axis transmission/reflection scan (CSV)");
  add_structure_flags(spectrum.cmd, spectrum.structure);
  spectrum.cmd->add_option("--emin", spectrum.emin, "scan start (EL units)")->required();
  spectrum.cmd->add_option("--emax", spectrum.emax, "scan end (EL units)")->required();
  spectrum.cmd->add_option("--points", spectrum.points, "number of samples, >= 2")->required();
  spectrum.cmd->add_option("--out", spectrum.out, "output path (default: stdout)");

  ZerosCmd zeros;
  zeros.cmd = app.add_subcommand("zeros", "classified complex-plane zeros of M11/M22 (JSON)");
  add_structure_flags(zeros.cmd, zeros.structure);
  zeros.cmd->add_option("--window", zeros.window_text, "search window re_min,re_max,im_min,im_max");
  zeros.cmd->add_option("--tol", zeros.tol, "zero refinement tolerance");
  zeros.cmd->add_option("--entry", zeros.entry, "m11, m22, or both")
      ->check(CLI::IsMember({"m11", "m22", "both"}));
  zeros.cmd->add_option("--out", zeros.out, "output path (default: stdout)");

  ThresholdCmd threshold;
  CLI::App* threshold_cmd =
      app.add_subcommand("threshold", "critical gain where a zero reaches the real axis");
  threshold_cmd->add_option("--family", threshold.family, "uniform-gain|uniform-loss|pt-pair")
      ->required();
  threshold_cmd->add_option("--m0L", threshold.m0L, "dimensionless grating strength")->required();
  threshold_cmd->add_option("--tol", threshold.tol, "bisection tolerance, >= 1e-6");

  TraceCmd trace;
  CLI::App* trace_cmd =
      app.add_subcommand("trace", "zero trajectories over an ascending gain grid (CSV)");
  trace_cmd->add_option("--family", trace.family, "uniform-gain|uniform-loss|pt-pair")->required();
  trace_cmd->add_option("--m0L", trace.m0L, "dimensionless grating strength")->required();
  trace_cmd->add_option("--lambda-grid", trace.grid_text, "comma-separated ascending lambdaL values")
      ->required();
  trace_cmd->add_option("--out", trace.out, "output path (default: stdout)");

  GreenCmd green;
  green.cmd = app.add_subcommand("green", "resolvent kernel value or near-axis boundedness scan");
  add_structure_flags(green.cmd, green.structure);
  green.cmd->add_option("--E", green.energy_text, "kernel evaluation energy re,im (off the axis)");
  green.cmd->add_option("--scan-singularity", green.scan_e0,
                        "real energy to probe with offsets 1e-2,1e-3,1e-4");
  green.cmd->add_option("--side", green.side, "above|below (scan mode)")
      ->check(CLI::IsMember({"above", "below"}));
  green.cmd->add_option("--out", green.out, "output path (default: stdout)");

  CheckCmd check;
  check.cmd = app.add_subcommand(
      "check", "self-diagnostics: determinant, integrator agreement, symmetry, unitarity");
  add_structure_flags(check.cmd, check.structure);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (spectrum.cmd->parsed()) return spectrum.run();
    if (zeros.cmd->parsed()) return zeros.run();
    if (threshold_cmd->parsed()) return threshold.run();
    if (trace_cmd->parsed()) return trace.run();
    if (green.cmd->parsed()) return green.run();
    if (check.cmd->parsed()) return check.run();
  } catch (const diracdfb::ParseError& e) {
    std::cerr << "structure parse error: " << e.what() << '\n';
    return 2;
  } catch (const diracdfb::ConvergenceError& e) {
    std::cerr << "did not converge: " << e.what() << '\n';
    return 3;
  } catch (const diracdfb::PoleProximity& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const diracdfb::SpectralSingularityHit& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const diracdfb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
