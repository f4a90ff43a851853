#pragma once

#include <stdexcept>
#include <string>

namespace pedrecon {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files or configs.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace pedrecon
