#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "diracdfb/green.hpp"
#include "diracdfb/scattering.hpp"
#include "diracdfb/spectral.hpp"

namespace diracdfb {

// Shortest exact decimal form of a double (printf %.17g), locale independent.
std::string format_g17(double value);

// "# diracdfb <version> | <description>" -- the one-line comment header
// every emitted file starts with; the description records the subcommand and
// its full effective configuration.
std::string report_header(std::string_view description);

// CSV, columns EL,abs_t,arg_t,abs_r_left,abs_r_right.
void write_spectrum_csv(std::ostream& out, std::string_view header,
                        const std::vector<SpectrumRow>& rows);

// Header comment line followed by a JSON array of
// {re_EL, im_EL, entry, kind, subtype, residual}; subtype is null except for
// spectral singularities.
void write_zeros_json(std::ostream& out, std::string_view header,
                      const std::vector<SpectralPoint>& points);

// CSV, columns lambdaL,trajectory_id,re_EL,im_EL,entry,kind.
void write_trace_csv(std::ostream& out, std::string_view header, const std::vector<TraceRow>& rows);

// CSV, columns offset,sup_norm.
void write_resolvent_scan_csv(std::ostream& out, std::string_view header,
                              const std::vector<ResolventScanRow>& rows);

}  // namespace diracdfb
