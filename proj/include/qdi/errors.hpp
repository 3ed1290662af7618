#ifndef QDI_ERRORS_HPP
#define QDI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdi {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejected arguments (arity mismatch, out-of-range value, bad config).
struct InputError : Error {
  using Error::Error;
};

// Missing or inconsistent cell-library configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed netlist text (bad JSON, unknown cell kind, missing field).
struct ParseError : Error {
  using Error::Error;
};

// Structurally broken netlist where an operation requires a valid one.
struct ValidationError : Error {
  using Error::Error;
};

// Simulation did not settle within the event budget, or an expected
// completion state was never reached.
struct DeadlockError : Error {
  using Error::Error;
};

// An illegal dual-rail codeword was observed during simulation.
struct ProtocolError : Error {
  using Error::Error;
};

// A checker was invoked on input that does not meet its preconditions.
struct CheckError : Error {
  using Error::Error;
};

}  // namespace qdi

#endif
