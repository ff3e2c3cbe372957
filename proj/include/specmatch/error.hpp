#pragma once

#include <stdexcept>

namespace specmatch {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An instance or scenario template violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DuplicateInPreference : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownAgentId : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroQuota : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptySide : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A matching does not fit the instance it is checked against.
class InconsistentMatching : public Error {
 public:
  using Error::Error;
};

/// A matched provider is missing from the user's preference list.
class MatchNotInPreferenceList : public Error {
 public:
  using Error::Error;
};

/// Too many candidate matchings to enumerate exhaustively.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// Too many preference profiles for the exhaustive engine.
class ProfileSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class UnsupportedMode : public Error {
 public:
  using Error::Error;
};

/// Statistics with different market shapes cannot be combined.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  using Error::Error;
};

class ScenarioParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace specmatch
