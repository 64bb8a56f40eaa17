#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace citeprof {

/// Input stream could not be opened or read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A lookup by paper id failed.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A citation series is too short to be classified.
class IneligibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called on state that violates its precondition.
class InvalidStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configuration value is missing or invalid. `path()` is the dotted key,
/// e.g. "rho.MonDec".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// The input is readable but its overall layout is wrong (e.g. a CSV header
/// lacking a required column).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An analysis needs metadata the dataset does not carry (e.g. authors).
/// `field()` names the missing field.
class CapabilityError : public std::runtime_error {
 public:
  CapabilityError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace citeprof
