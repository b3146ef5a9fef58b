// Copyright 2026 The effchsh Authors
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

#ifndef EFFCHSH_ERRORS_H
#define EFFCHSH_ERRORS_H

#include <stdexcept>
#include <string>

namespace effchsh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A hidden-variable index outside the model's space.
class IndexError : public Error {
   public:
    using Error::Error;
};

/// Probability data that fails normalization or range checks.
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// A quantity that needs a nonzero detection rate hit a zero.
class DegenerateModelError : public Error {
   public:
    using Error::Error;
};

/// An operation was called on a model that does not satisfy its assumption.
class PreconditionError : public Error {
   public:
    using Error::Error;
};

/// A numeric argument outside its allowed domain.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// Counts with no coincidences.
class NoDataError : public Error {
   public:
    using Error::Error;
};

/// A quantity that cannot be determined from the data supplied.
class UnavailableError : public Error {
   public:
    using Error::Error;
};

/// Malformed input files or command-line values.
class InputError : public Error {
   public:
    using Error::Error;
};

}  // namespace effchsh

#endif  // EFFCHSH_ERRORS_H
