#pragma once

#include <stdexcept>
#include <string>

namespace cohmodes {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input matrix has the wrong shape or is not symmetric.
struct dimension_error : error {
    using error::error;
};

// A state failed a physicality check (symplectic eigenvalue < 1, negative
// mean excitation, ...).
struct unphysical_state_error : error {
    using error::error;
};

// Model parameters violate a stability condition.
struct invalid_params_error : error {
    using error::error;
};

// A linear system that should be regular turned out singular.
struct degeneracy_error : error {
    using error::error;
};

// Fixed-step integrator produced an unphysical state; retry with smaller dt.
struct integrator_error : error {
    using error::error;
};

// Truncated-basis result leaked too much population into the top levels to
// count as oracle-grade.
struct truncation_error : error {
    using error::error;
};

} // namespace cohmodes
