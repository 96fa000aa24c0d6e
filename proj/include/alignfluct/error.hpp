#pragma once

#include <stdexcept>
#include <string>

namespace alignfluct {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A character that is not a letter of the alphabet in use.
class SymbolError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidAlignment : public Error {
 public:
  using Error::Error;
};

// None of the letters to be changed occur in either string.
class NoOccurrence : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent user-supplied configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace alignfluct
