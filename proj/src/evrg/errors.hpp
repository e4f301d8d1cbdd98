// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace evrg {

/// Error classes mirrored one-to-one by the C API status codes.
enum class Errc {
  invalid_argument = 1,
  unknown_id = 2,
  domain = 3,            // point outside support / parameter outside its domain
  support_mismatch = 4,  // distribution support incompatible with a rescaling group
  no_convergence = 5,    // estimator or quadrature failed to reach tolerance
  extraction = 6,        // eigen-expansion extraction failed
  unsupported = 7,       // requested feature outside the implemented families
  internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace evrg
