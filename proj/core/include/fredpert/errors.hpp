#ifndef FREDPERT_ERRORS_HPP
#define FREDPERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fredpert {

// Base class for everything this library throws on purpose. Callers that
// want a single catch site can use this; the subclasses distinguish
// configuration mistakes from numerical failures (the CLI maps the former
// to exit code 2 and the latter to exit code 3).
class Error : public std::runtime_error {
  public:
	explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Bad input: unparseable expression, invalid rule parameters, malformed
// problem file, out-of-domain envelope request.
class ConfigError : public Error {
  public:
	explicit ConfigError(const std::string &what) : Error(what) {}
};

// Expression evaluation hit a domain fault (log or sqrt of a negative
// number, division blow-up) at a concrete point.
class EvalError : public Error {
  public:
	explicit EvalError(const std::string &what) : Error(what) {}
};

// Symbolic differentiation would exceed the AST size cap.
class ExpressionTooLarge : public Error {
  public:
	explicit ExpressionTooLarge(const std::string &what) : Error(what) {}
};

// Numerical failure: singular linear system where a unique solve was
// requested, Newton divergence, unsolvable resonant order.
class NumericalError : public Error {
  public:
	explicit NumericalError(const std::string &what) : Error(what) {}
};

class SingularSystemError : public NumericalError {
  public:
	explicit SingularSystemError(const std::string &what) : NumericalError(what) {}
};

class NewtonDivergenceError : public NumericalError {
  public:
	explicit NewtonDivergenceError(const std::string &what) : NumericalError(what) {}
};

} // namespace fredpert

#endif
