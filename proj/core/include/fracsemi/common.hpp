#ifndef FRACSEMI_COMMON_HPP
#define FRACSEMI_COMMON_HPP

#include <stdexcept>
#include <string>

namespace fracsemi {

/** A parameter or grid combination violates a documented precondition. */
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/** A field contains non-finite entries or is bound to the wrong grid. */
struct invalid_field_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/** A construction finished but misses its stated accuracy target. */
struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** An iteration hit its cap before reaching tolerance. */
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** The request exceeds a documented capability cap (e.g. dense-oracle size). */
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fracsemi

#endif
