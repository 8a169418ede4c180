#include "diracdfb/report_io.hpp"

#include <cstdio>
#include <ostream>

#include "diracdfb/version.hpp"
#include "json.hpp"

namespace diracdfb {

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string report_header(std::string_view description) {
  std::string line = "# ";
  line += tool_name;
  line += ' ';
  line += tool_version;
  line += " | ";
  line += description;
  return line;
}

void write_spectrum_csv(std::ostream& out, std::string_view header,
                        const std::vector<SpectrumRow>& rows) {
  out << header << '\n';
  out << "EL,abs_t,arg_t,abs_r_left,abs_r_right\n";
  for (const SpectrumRow& r : rows) {
    out << format_g17(r.EL) << ',' << format_g17(r.abs_t) << ',' << format_g17(r.arg_t) << ','
        << format_g17(r.abs_r_left) << ',' << format_g17(r.abs_r_right) << '\n';
  }
}

void write_zeros_json(std::ostream& out, std::string_view header,
                      const std::vector<SpectralPoint>& points) {
  out << header << '\n';
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SpectralPoint& p : points) {
    nlohmann::ordered_json item;
    item["re_EL"] = p.energy.real();
    item["im_EL"] = p.energy.imag();
    item["entry"] = std::string(to_string(p.entry));
    item["kind"] = std::string(to_string(p.kind));
    if (p.subtype.has_value()) {
      item["subtype"] = std::string(to_string(*p.subtype));
    } else {
      item["subtype"] = nullptr;
    }
    item["residual"] = p.residual;
    arr.push_back(std::move(item));
  }
  out << arr.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, std::string_view header, const std::vector<TraceRow>& rows) {
  out << header << '\n';
  out << "lambdaL,trajectory_id,re_EL,im_EL,entry,kind\n";
  for (const TraceRow& r : rows) {
    out << format_g17(r.lambdaL) << ',' << r.trajectory_id << ','
        << format_g17(r.point.energy.real()) << ',' << format_g17(r.point.energy.imag()) << ','
        << to_string(r.point.entry) << ',' << to_string(r.point.kind) << '\n';
  }
}

void write_resolvent_scan_csv(std::ostream& out, std::string_view header,
                              const std::vector<ResolventScanRow>& rows) {
  out << header << '\n';
  out << "offset,sup_norm\n";
  for (const ResolventScanRow& r : rows) {
    out << format_g17(r.offset) << ',' << format_g17(r.sup_norm) << '\n';
  }
}

}  // namespace diracdfb
