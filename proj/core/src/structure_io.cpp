#include "diracdfb/structure_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "diracdfb/errors.hpp"

namespace diracdfb {

namespace {

constexpr const char* magic_line = "dirac-dfb-structure v1";

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

double parse_double(const std::string& text, int line_no, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(line_no, "invalid numeric value for '" + key + "': '" + text + "'");
  }
  return v;
}

}  // namespace

StructureSpec load_structure(std::istream& in) {
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError(1, "empty input; expected header '" + std::string(magic_line) + "'");
  }
  ++line_no;
  if (strip_cr(line) != magic_line) {
    throw ParseError(1, "unrecognized header; expected '" + std::string(magic_line) + "'");
  }

  std::vector<Segment> segments;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (is_blank(line) || line[line.find_first_not_of(" \t")] == '#') continue;

    std::istringstream tokens(line);
    std::string word;
    tokens >> word;
    if (word != "segment") {
      throw ParseError(line_no, "expected 'segment', got '" + word + "'");
    }

    Segment seg;
    bool seen_length = false, seen_mass = false, seen_gain = false, seen_detuning = false;
    while (tokens >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) {
        throw ParseError(line_no, "expected key=value, got '" + word + "'");
      }
      const std::string key = word.substr(0, eq);
      const std::string value = word.substr(eq + 1);
      const double v = parse_double(value, line_no, key);
      if (key == "length") {
        if (seen_length) throw ParseError(line_no, "duplicate key 'length'");
        seg.length = v;
        seen_length = true;
      } else if (key == "mass") {
        if (seen_mass) throw ParseError(line_no, "duplicate key 'mass'");
        seg.mass = v;
        seen_mass = true;
      } else if (key == "gain") {
        if (seen_gain) throw ParseError(line_no, "duplicate key 'gain'");
        seg.gain = v;
        seen_gain = true;
      } else if (key == "detuning") {
        if (seen_detuning) throw ParseError(line_no, "duplicate key 'detuning'");
        seg.detuning = v;
        seen_detuning = true;
      } else {
        throw ParseError(line_no, "unknown key '" + key + "'");
      }
    }
    if (!seen_length || !seen_mass || !seen_gain || !seen_detuning) {
      throw ParseError(line_no, "segment needs length=, mass=, gain= and detuning=");
    }
    try {
      validate(seg);
    } catch (const InvalidInput& e) {
      throw ParseError(line_no, e.what());
    }
    segments.push_back(seg);
  }

  if (segments.empty()) {
    throw ParseError(line_no == 0 ? 1 : line_no, "no segments found");
  }
  return StructureSpec(std::move(segments));
}

StructureSpec load_structure_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(0, "cannot open '" + path + "'");
  }
  return load_structure(in);
}

void save_structure(std::ostream& out, const StructureSpec& spec) {
  out << magic_line << '\n';
  char buf[256];
  for (const Segment& s : spec.segments()) {
    std::snprintf(buf, sizeof buf, "segment length=%.17g mass=%.17g gain=%.17g detuning=%.17g\n",
                  s.length, s.mass, s.gain, s.detuning);
    out << buf;
  }
}

void save_structure_file(const std::string& path, const StructureSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path + "' for writing");
  }
  save_structure(out, spec);
}

}  // namespace diracdfb
