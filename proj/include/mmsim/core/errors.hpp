#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptySide : public Error {
 public:
  EmptySide() : Error("book side is empty") {}
};

class UnknownOrder : public Error {
 public:
  explicit UnknownOrder(unsigned long long id)
      : Error("unknown order id " + std::to_string(id)) {}
};

class Overconsume : public Error {
 public:
  Overconsume(long long requested, long long available)
      : Error("trade volume " + std::to_string(requested) + " exceeds available liquidity " +
              std::to_string(available)) {}
};

// Errors that point at a line of an input file. line == 0 means "whole file".
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class NonMonotoneTimestamps : public DataError {
 public:
  using DataError::DataError;
};

class VersionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class DatasetTooShort : public Error {
 public:
  using Error::Error;
};

class SteppedAfterDone : public Error {
 public:
  SteppedAfterDone() : Error("step() called on a finished episode") {}
};

class HorizonOutOfRange : public Error {
 public:
  using Error::Error;
};

class WindowOutOfRange : public Error {
 public:
  using Error::Error;
};

class EmptyTrace : public Error {
 public:
  EmptyTrace() : Error("trace has no steps") {}
};

class NoFillsOnSide : public Error {
 public:
  NoFillsOnSide() : Error("return per trade needs fills on both sides") {}
};

}  // namespace mmsim
