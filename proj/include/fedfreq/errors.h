//
// Copyright 2026 The FedFreq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef FEDFREQ_ERRORS_H_
#define FEDFREQ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fedfreq {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside the domain an operation accepts (index out of
// range, shape mismatch, malformed parameter).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An object is not in a state the operation can act on, e.g. decoding a
// sketch with zero contributing clients.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// Incompatible configuration, e.g. a hybrid decode given a shared-sign
// hash family.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// A value does not fit the secure-summation group.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// The secure-summation round is incomplete or inconsistent.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// The power-law fit could not produce a usable model.
class FitError : public Error {
 public:
  using Error::Error;
};

// Privacy parameters outside the regime the Gaussian calibration covers.
class OutOfRegimeError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, long line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace fedfreq

#endif  // FEDFREQ_ERRORS_H_
