/*
Copyright 2026 The HIVC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef HIVC_ERROR_H_
#define HIVC_ERROR_H_

#include <stdexcept>
#include <string>

namespace hivc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on the arguments of a call was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An iterative solver did not reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

// A small dense system was numerically singular.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

// Raised while parsing any encoded payload. Subclasses in bitstream.h refine
// the container-level failures.
class DecodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace hivc

#endif  // HIVC_ERROR_H_
