// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qif {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
  public:
    SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line),
          column_(column) {}

    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// Undeclared, duplicated or otherwise ill-placed variable declarations.
class DeclarationError : public Error {
  public:
    using Error::Error;
};

/// Exhaustive enumeration would exceed the configured input-bit budget.
class CapacityError : public Error {
  public:
    using Error::Error;
};

class DomainMismatch : public Error {
  public:
    using Error::Error;
};

class DistributionError : public Error {
  public:
    using Error::Error;
};

class RangeError : public Error {
  public:
    using Error::Error;
};

class NoCounterexample : public Error {
  public:
    using Error::Error;
};

} // namespace qif
