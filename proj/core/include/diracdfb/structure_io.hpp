#pragma once

#include <iosfwd>
#include <string>

#include "diracdfb/types.hpp"

namespace diracdfb {

// Text format, one segment per line:
//
//   dirac-dfb-structure v1
//   # optional comments
//   segment length=<float> mass=<float> gain=<float> detuning=<float>
//
// Blank lines and lines starting with '#' are ignored after the mandatory
// first line.  Syntax errors throw ParseError carrying the 1-based line
// number.
StructureSpec load_structure(std::istream& in);
StructureSpec load_structure_file(const std::string& path);

void save_structure(std::ostream& out, const StructureSpec& spec);
void save_structure_file(const std::string& path, const StructureSpec& spec);

}  // namespace diracdfb
