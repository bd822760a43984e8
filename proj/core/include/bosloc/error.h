// Copyright 2026 The bosloc Authors
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

#ifndef BOSLOC_ERROR_H_
#define BOSLOC_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace bosloc {

// Root of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad dimension, negative
// potential, index out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An iterative method failed to converge or a certificate was violated.
// Carries whatever residuals were reached so the failure is never silent.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what,
                          std::vector<double> residuals = {})
      : Error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

// The probe energy of a resolvent lies (numerically) in the spectrum.
class SpectralCollision : public NumericalError {
 public:
  SpectralCollision(const std::string& what, double distance)
      : NumericalError(what), distance_(distance) {}

  double distance() const { return distance_; }

 private:
  double distance_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
  kIoError = 3,
};

ExitCode exit_code_for(const std::exception& e);

}  // namespace bosloc

#endif  // BOSLOC_ERROR_H_
