#include "mixpade/errors.hpp"

namespace mixpade {

FactorizationError::FactorizationError(const std::string& what, std::ptrdiff_t pivot)
    : NumericalError(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}

DivergenceError::DivergenceError(const std::string& what, std::size_t step)
    : NumericalError(what + " (step " + std::to_string(step) + ")"), step_(step) {}

}  // namespace mixpade
