// Copyright 2026 The nomafl Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace nomafl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameter, violated precondition or malformed input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A device whose uplink rate is zero can never finish its round.
class UnreachableDevice : public Error {
 public:
  explicit UnreachableDevice(int device_id)
      : Error("device " + std::to_string(device_id) +
              " is unreachable (zero uplink rate)"),
        device_id_(device_id) {}
  int device_id() const { return device_id_; }

 private:
  int device_id_;
};

// The deadline leaves no time to upload after local computation.
class DeadlineInfeasible : public Error {
 public:
  using Error::Error;
};

// Config file problems; the message names the offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nomafl
