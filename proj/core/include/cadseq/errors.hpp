#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cadseq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file is not valid JSON / does not match the program schema.
class SyntaxError : public Error {
 public:
  using Error::Error;
};

// Command list violates the sketch/extrude grammar.
class GrammarError : public Error {
 public:
  using Error::Error;
};

// Quantized parameter outside {-1} u [0, 255].
class RangeError : public Error {
 public:
  using Error::Error;
};

// Program too long for the fixed 60-row encoding.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Matrix cell cannot be decoded into a command.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Program does not compile into solid geometry; carries the failing command.
class CompileError : public Error {
 public:
  CompileError(std::size_t command_index, const std::string& message)
      : Error(message + " (command " + std::to_string(command_index) + ")"),
        command_index(command_index) {}
  std::size_t command_index;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class EmptySolid : public Error {
 public:
  using Error::Error;
};

class NoCompatibleSketch : public Error {
 public:
  using Error::Error;
};

class NoCompatibleGroup : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class EmptyScan : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cadseq
