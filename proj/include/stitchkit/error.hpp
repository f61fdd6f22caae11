// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace stitchkit {

enum class ErrorKind {
  ParseError,
  DanglingEdge,
  InvariantViolation,
  NotABranch,
  UnknownBlock,
  EmptyLevels,
  ConfigError,
  IoError,
  UnknownStrategy,
};

std::string_view to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::DanglingEdge: return "DanglingEdge";
  case ErrorKind::InvariantViolation: return "InvariantViolation";
  case ErrorKind::NotABranch: return "NotABranch";
  case ErrorKind::UnknownBlock: return "UnknownBlock";
  case ErrorKind::EmptyLevels: return "EmptyLevels";
  case ErrorKind::ConfigError: return "ConfigError";
  case ErrorKind::IoError: return "IoError";
  case ErrorKind::UnknownStrategy: return "UnknownStrategy";
  }
  return "Error";
}

} // namespace stitchkit
