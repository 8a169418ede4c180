#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace diracdfb {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or precondition violation on a public entry point.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

// Structure-file syntax error; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// An iterative solve failed to converge or a search window was inadequate.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(what) {}
};

// Scattering coefficients were requested at (numerically) a zero of M22,
// where t and r diverge.  This signals a divergence of the physics, not a
// failure of the computation.
class SpectralSingularityHit : public Error {
 public:
  SpectralSingularityHit(std::complex<double> energy, std::complex<double> m22)
      : Error("scattering coefficients diverge: |M22| vanishes at E = (" +
              std::to_string(energy.real()) + ", " + std::to_string(energy.imag()) + ")"),
        energy_(energy),
        m22_(m22) {}
  std::complex<double> energy() const { return energy_; }
  std::complex<double> m22() const { return m22_; }

 private:
  std::complex<double> energy_;
  std::complex<double> m22_;
};

// Green-function evaluation too close to a pole of the resolvent.
class PoleProximity : public Error {
 public:
  PoleProximity(std::complex<double> energy, std::complex<double> denominator)
      : Error("Green function evaluated too close to a resolvent pole at E = (" +
              std::to_string(energy.real()) + ", " + std::to_string(energy.imag()) + ")"),
        energy_(energy),
        denominator_(denominator) {}
  std::complex<double> energy() const { return energy_; }
  std::complex<double> denominator() const { return denominator_; }

 private:
  std::complex<double> energy_;
  std::complex<double> denominator_;
};

}  // namespace diracdfb
