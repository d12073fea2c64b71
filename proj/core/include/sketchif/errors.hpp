// Copyright 2026 the sketchif authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SKETCHIF_ERRORS_HPP
#define SKETCHIF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sketchif {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimMismatchError : public Error {
 public:
  explicit DimMismatchError(const std::string& what) : Error(what) {}
};

class NotPsdError : public Error {
 public:
  explicit NotPsdError(const std::string& what) : Error(what) {}
};

class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what) : Error(what) {}
};

class NonPositiveLambdaError : public Error {
 public:
  explicit NonPositiveLambdaError(const std::string& what) : Error(what) {}
};

class ZeroRankError : public Error {
 public:
  explicit ZeroRankError(const std::string& what) : Error(what) {}
};

class CapExceededError : public Error {
 public:
  explicit CapExceededError(const std::string& what) : Error(what) {}
};

class InvalidSpecError : public Error {
 public:
  explicit InvalidSpecError(const std::string& what) : Error(what) {}
};

class FamilyMismatchError : public Error {
 public:
  explicit FamilyMismatchError(const std::string& what) : Error(what) {}
};

class NumericalBreakdownError : public Error {
 public:
  explicit NumericalBreakdownError(const std::string& what) : Error(what) {}
};

class OutOfRangeParamError : public Error {
 public:
  explicit OutOfRangeParamError(const std::string& what) : Error(what) {}
};

class LambdaTooLargeError : public Error {
 public:
  explicit LambdaTooLargeError(const std::string& what) : Error(what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(what) {}
};

class RegimeViolationError : public Error {
 public:
  explicit RegimeViolationError(const std::string& what) : Error(what) {}
};

class CalibrationFailedError : public Error {
 public:
  explicit CalibrationFailedError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

class InvalidParamsError : public Error {
 public:
  explicit InvalidParamsError(const std::string& what) : Error(what) {}
};

}  // namespace sketchif

#endif  // SKETCHIF_ERRORS_HPP
