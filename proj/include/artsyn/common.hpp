#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace artsyn {

inline constexpr const char* kVersion = "0.1.0";

// Time-major convention throughout: rows are frames, columns are features.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an operation's arguments was violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Bad or inconsistent configuration (files, paths, settings).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Corrupt, missing, or inconsistent data on disk.
class DataError : public Error {
public:
  using Error::Error;
};

/// An estimation step was given too few samples.
class InsufficientDataError : public Error {
public:
  using Error::Error;
};

/// A numerical procedure failed (divergence, non-finite values).
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace artsyn
