#ifndef PSQ_ERRORS_HPP
#define PSQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace psq {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument: parameter out of its documented domain.
class DomainError : public Error {
  public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// The two characteristic roots are numerically indistinguishable, so the
// root-dependent quantities (alpha, the integral representations) degenerate.
class CoalescentRoots : public Error {
  public:
    explicit CoalescentRoots(const std::string& msg) : Error(msg) {}
};

// alpha is too close to an integer for the transform assembly to be used;
// the resolvent route is authoritative at such points.
class DegenerateAlpha : public Error {
  public:
    explicit DegenerateAlpha(const std::string& msg) : Error(msg) {}
};

// Contour quadrature failed to converge or failed its realness check.
class ContourError : public Error {
  public:
    explicit ContourError(const std::string& msg) : Error(msg) {}
};

// Evaluation requested too close to a pole of the transform.
class NearPole : public Error {
  public:
    explicit NearPole(const std::string& msg) : Error(msg) {}
};

// A linear solve hit a vanishing pivot.
class SingularSystem : public Error {
  public:
    explicit SingularSystem(const std::string& msg) : Error(msg) {}
};

// An iteration (series, quadrature level doubling, root refinement) did not
// reach its target accuracy within its budget.
class ConvergenceError : public Error {
  public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// An asymptotic formula was requested outside its regime of validity.
class RegimeError : public Error {
  public:
    explicit RegimeError(const std::string& msg) : Error(msg) {}
};

// A scan failed to bracket the root it was looking for.
class NoBracket : public Error {
  public:
    explicit NoBracket(const std::string& msg) : Error(msg) {}
};

// Adaptive ODE stepping drove the step size below its floor.
class StepUnderflow : public Error {
  public:
    explicit StepUnderflow(const std::string& msg) : Error(msg) {}
};

// The eigenvector basis is too poorly conditioned for a reliable expansion.
class IllConditioned : public Error {
  public:
    explicit IllConditioned(const std::string& msg) : Error(msg) {}
};

// Inversion-contour nodes land too close to the pole set.
class ContourCollision : public Error {
  public:
    explicit ContourCollision(const std::string& msg) : Error(msg) {}
};

// A tail-fit window starts before the dominant mode separates.
class WindowTooEarly : public Error {
  public:
    explicit WindowTooEarly(const std::string& msg) : Error(msg) {}
};

// Simulation started from an inadmissible initial state.
class InvalidInitial : public Error {
  public:
    explicit InvalidInitial(const std::string& msg) : Error(msg) {}
};

} // namespace psq

#endif // PSQ_ERRORS_HPP
