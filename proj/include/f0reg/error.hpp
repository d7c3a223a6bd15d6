// f0reg/error.hpp
//
// Copyright 2026  The f0reg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef F0REG_ERROR_HPP_
#define F0REG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace f0reg {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input too short to produce any output (e.g. fewer samples than one frame).
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mismatched shapes between tensors, frames or sequences.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Zero-power or otherwise unusable signal.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration record.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (ground truth, manifest, estimate files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Audio file that cannot be ingested (encoding, channels, rate).
class IngestError : public Error {
 public:
  using Error::Error;
};

/// Frame grids of estimates and references cannot be reconciled.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, corrupt or incompatible model checkpoint.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

/// Training diverged (non-finite loss or gradient).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace f0reg

#endif  // F0REG_ERROR_HPP_
