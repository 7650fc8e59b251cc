#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace permcount {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: unparsable field text, bad modulus, bad flags.
class InputError : public Error {
 public:
  using Error::Error;
};

class FieldConstructionError : public InputError {
 public:
  using InputError::InputError;
};

class CompositeCharacteristic : public FieldConstructionError {
 public:
  explicit CompositeCharacteristic(std::uint64_t p)
      : FieldConstructionError("characteristic " + std::to_string(p) + " is not prime") {}
};

class ReducibleModulus : public FieldConstructionError {
 public:
  using FieldConstructionError::FieldConstructionError;
};

/// A configured size limit (dimension, Bell number, oracle cap, ...) refused the request.
class GuardError : public Error {
 public:
  GuardError(std::string guard, std::uint64_t limit, std::uint64_t requested)
      : Error("guard '" + guard + "' refused request: " + std::to_string(requested) +
              " exceeds limit " + std::to_string(limit)),
        guard_(std::move(guard)),
        limit_(limit),
        requested_(requested) {}

  const std::string& guard() const noexcept { return guard_; }
  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t requested() const noexcept { return requested_; }

 private:
  std::string guard_;
  std::uint64_t limit_;
  std::uint64_t requested_;
};

class FieldTooLarge : public GuardError {
 public:
  FieldTooLarge(std::uint64_t limit, std::uint64_t q) : GuardError("max_field", limit, q) {}
};

/// Mathematically undefined operation, e.g. inverting zero.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

/// A counting identity that must hold exactly did not. Always an engine bug.
class IdentityFailure : public Error {
 public:
  IdentityFailure(std::string identity, const std::string& detail)
      : Error("identity '" + identity + "' failed: " + detail), identity_(std::move(identity)) {}

  const std::string& identity() const noexcept { return identity_; }

 private:
  std::string identity_;
};

}  // namespace permcount
