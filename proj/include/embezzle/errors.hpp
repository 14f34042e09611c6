// Copyright 2026 The Embezzle Lab Authors
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

#ifndef EMBEZZLE_ERRORS_HPP
#define EMBEZZLE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace embezzle {

enum class ErrorKind {
    SiteCollision,
    DimensionMismatch,
    PartyViolation,
    SiteSpaceMismatch,
    CatalystShapeError,
    DimensionError,
    LocalityViolation,
    CommutationViolation,
    MorphismTypeError,
    SizeBudgetExceeded,
    InvalidTarget,
    ParseError,
    ConfigError,
    FormMismatch,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string message() const { return std::string(what()).substr(to_string(kind_).size() + 2); }

   private:
    ErrorKind kind_;
};

}  // namespace embezzle

#endif
