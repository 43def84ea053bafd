/*
Copyright 2026 ehrelay contributors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace ehrelay {

/// Bad input data: broken profile invariants, malformed files, grid mismatches.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string &what) : std::runtime_error(what) {}
};

/// a^2 < 1: the relay cannot help and the relay policies refuse to run.
class DegenerateRelayError : public std::runtime_error {
  public:
    explicit DegenerateRelayError(const std::string &what) : std::runtime_error(what) {}
};

/// A contract was broken by the caller (e.g. delta construction after a failed gate).
class ContractError : public std::logic_error {
  public:
    explicit ContractError(const std::string &what) : std::logic_error(what) {}
};

} // namespace ehrelay
