#pragma once

#include <stdexcept>
#include <string>

namespace minslope {

// Bad input: malformed config, out-of-range parameters, non-Kähler classes.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Class handed to a routine that needs it big.
struct NotBigError : std::domain_error {
  using std::domain_error::domain_error;
};

// Surface data that cannot come from an actual surface.
struct ModelError : std::logic_error {
  using std::logic_error::logic_error;
};

// Root finder could not certify a root.
struct RootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation outside the region where a profile exists.
struct NoMonotoneSolution : std::domain_error {
  using std::domain_error::domain_error;
};

// Flow left the admissible cone or the time step broke stability.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace minslope
