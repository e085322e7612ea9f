#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stratexp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error("parse error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class PriorTooLow : public Error {
 public:
  using Error::Error;
};

class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class RootNotBracketed : public Error {
 public:
  using Error::Error;
};

class UnclassifiableTail : public Error {
 public:
  using Error::Error;
};

class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class NotAnEquilibrium : public Error {
 public:
  using Error::Error;
};

}  // namespace stratexp
