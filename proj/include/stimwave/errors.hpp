#pragma once

#include <stdexcept>
#include <string>

namespace stimwave {

/// Base class for all errors thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A physical parameter violates its admissible range.
struct invalid_parameter_error : error {
    using error::error;
};

/// The spatial grid cannot hold the requested pulse or evolution window.
struct domain_too_small_error : error {
    using error::error;
};

/// The grid is not aligned with the characteristics (c*dt != dr).
struct cfl_error : error {
    using error::error;
};

/// A run would exceed the configured memory budget.
struct resource_error : error {
    using error::error;
};

/// Evaluation requested exactly on the removable singularity of the
/// coupling factor (delta == gamma and zero detuning); use the limit forms.
struct singular_point_error : error {
    using error::error;
};

/// Asymptotic output requested before the excitation has left the atom.
struct premature_readout_error : error {
    using error::error;
};

/// Channel amplitudes do not add up to a normalized state.
struct inconsistency_error : error {
    using error::error;
};

} // namespace stimwave
