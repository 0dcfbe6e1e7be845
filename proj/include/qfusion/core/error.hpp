// Copyright 2026 The qfusion Authors
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

namespace qfusion {

/// Shapes or lengths of operands do not agree.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A configuration value is out of its admissible range.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input data is malformed or unusable (parse failures, empty classes, ...).
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An API was called in a state where the operation is not defined.
class UsageError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

namespace detail {
inline std::string shape_str(long rows, long cols) {
    return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}
} // namespace detail

} // namespace qfusion
