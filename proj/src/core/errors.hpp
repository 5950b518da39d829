#pragma once

#include <stdexcept>
#include <string>

namespace rvelab {

// Base class for all toolkit errors. Subclasses map 1:1 onto the C API
// status codes, so anything thrown across the library boundary must
// derive from Error.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A precondition on user-supplied parameters was violated.
class InvalidSpecError : public Error {
public:
  using Error::Error;
};

// Sequential packing hit the attempt budget before placing all fibres.
class JammingError : public Error {
public:
  using Error::Error;
};

// Element size does not divide the domain dimensions.
class NonconformingMeshError : public Error {
public:
  using Error::Error;
};

class MeshTopologyError : public Error {
public:
  using Error::Error;
};

// Constraint rows are inconsistent after canonical elimination.
class RankDeficiencyError : public Error {
public:
  using Error::Error;
};

// Reduced stiffness is not symmetric positive definite.
class SingularSystemError : public Error {
public:
  using Error::Error;
};

class NoPairError : public Error {
public:
  using Error::Error;
};

class DegenerateError : public Error {
public:
  using Error::Error;
};

class NoCrackError : public Error {
public:
  using Error::Error;
};

class DegenerateDenominatorError : public Error {
public:
  using Error::Error;
};

class InadmissibleLocalizationError : public Error {
public:
  using Error::Error;
};

class NoIntersectionError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace rvelab
