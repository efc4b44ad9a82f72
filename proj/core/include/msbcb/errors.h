// Copyright 2026 The MSBCB Authors
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

#ifndef MSBCB_ERRORS_H_
#define MSBCB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace msbcb {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vectors of mismatched length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

// An operation that requires the deterministic expected-value world was
// invoked on a stochastic configuration (or vice versa).
class ModeError : public Error {
 public:
  using Error::Error;
};

// The Dantzig certificate does not apply (some item alone exceeds the budget).
class CertificateError : public Error {
 public:
  using Error::Error;
};

// Invalid or unknown configuration. `key()` names the offending key when known.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace msbcb

#endif  // MSBCB_ERRORS_H_
