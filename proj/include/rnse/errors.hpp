// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RNSE_ERRORS_HPP_
#define RNSE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rnse {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched dimensions between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An argument value outside its documented domain.
class ValueError : public Error {
 public:
  using Error::Error;
};

// Signal too short to form a single analysis frame.
class EmptySignalError : public Error {
 public:
  using Error::Error;
};

// Zero-energy reference where a ratio is requested.
class DegenerateSignalError : public Error {
 public:
  using Error::Error;
};

// No speech-active frames in an utterance.
class NoSpeechError : public Error {
 public:
  using Error::Error;
};

// Operating-system level I/O failure (open/read/write).
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed file in an encoding this toolkit does not handle.
class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

// More than one audio channel.
class MultichannelError : public UnsupportedFormatError {
 public:
  using UnsupportedFormatError::UnsupportedFormatError;
};

// Problems in a dataset manifest (parse errors, duplicate ids).
class ManifestError : public Error {
 public:
  using Error::Error;
};

// Problems in a key/value config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rnse

#endif  // RNSE_ERRORS_HPP_
