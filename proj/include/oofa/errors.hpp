#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace oofa {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field order is neither prime nor a supported prime power.
struct UnsupportedOrder : Error {
  using Error::Error;
};

/// Contrast table requested for fewer than two levels.
struct DegenerateOrder : Error {
  using Error::Error;
};

/// Requested computation exceeds the supported problem size.
struct SizeLimit : Error {
  using Error::Error;
};

/// Block size is impossible for the given (m, k).
struct InfeasibleSize : Error {
  using Error::Error;
};

/// The candidate Latin-square pool cannot cover the request.
struct CandidateExhausted : Error {
  using Error::Error;
};

/// Word length pattern of an empty design is undefined.
struct EmptyDesign : Error {
  using Error::Error;
};

/// Word length patterns of different shape or kind were compared.
struct ShapeMismatch : Error {
  using Error::Error;
};

/// Indicator function evaluated outside the design space.
struct InvalidPoint : Error {
  using Error::Error;
};

/// No exchange move of the requested kind exists.
struct NoMoveAvailable : Error {
  using Error::Error;
};

/// Malformed input file; message carries row/column location.
struct ParseError : Error {
  using Error::Error;
};

/// A parsed design violates its invariants.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Model matrix is numerically rank deficient; message names the column.
struct RankDeficient : Error {
  using Error::Error;
};

/// A correlation was requested for a constant column.
struct ZeroVariance : Error {
  using Error::Error;
};

/// An effect map refers to a label absent from the model matrix.
struct UnknownLabel : Error {
  using Error::Error;
};

/// Simulation configuration fails a precondition.
struct ConfigInvalid : Error {
  using Error::Error;
};

}  // namespace oofa
