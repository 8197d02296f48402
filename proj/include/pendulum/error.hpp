#pragma once

#include <stdexcept>
#include <string>

namespace pendulum
{

// Operation not defined for the motion regime of the input (e.g. a period
// requested on the separatrix).
class regime_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// A computed quantity left the representable range.
class non_finite_error : public std::overflow_error
{
public:
    using std::overflow_error::overflow_error;
};

// Inputs that disagree with each other, e.g. initial conditions whose
// energy does not match the solution they are aligned to.
class consistency_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Equilibrium inputs for which a time offset is meaningless.
class degenerate_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace pendulum
