// Copyright 2026 The MDIEW Authors
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

#ifndef MDIEW_ERRORS_HPP_
#define MDIEW_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mdiew {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix or subsystem dimensions do not fit together.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A value violates a domain-type invariant (Hermiticity, trace, positivity...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// The operator families of an input basis do not span Hermitian operator space.
class SingularBasisError : public Error {
 public:
  using Error::Error;
};

/// An input file does not follow its documented format.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdiew

#endif  // MDIEW_ERRORS_HPP_
