#pragma once

#include <stdexcept>
#include <string>

namespace danopt {

// Invalid or inconsistent run configuration (bad field values, unreadable
// files, topology/problem mismatches). Carries the offending field or file
// in the message.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (graph files, CSV datasets).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure that the caller asked to be fatal (factorization of a
// non-SPD matrix, low-rank solve breakdown without fallback).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Protocol invariant violated at runtime (flooding incomplete within its
// round budget, conservation mismatch). Indicates a bug or a misuse, not
// bad user input.
class ProtocolError : public std::logic_error {
 public:
  explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace danopt
