// SPDX-License-Identifier: Apache-2.0
//
// proxdet - WiFi CSI proximity detection with gait monitoring
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef PROXDET_DIAGNOSTICS_HPP
#define PROXDET_DIAGNOSTICS_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace proxdet {

// Invalid parameter or configuration value.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or physically invalid input data (non-finite CSI, bad rows, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A frame that cannot be normalized (all-zero power). The stream continues without it.
class DegenerateFrameError : public DataError {
public:
    using DataError::DataError;
};

// Out-of-order samples fed to a stateful stage.
class StreamError : public DataError {
public:
    using DataError::DataError;
};

using WarningSink = std::function<void(std::string_view)>;

// Route non-fatal warnings. Default sink writes to stderr. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

} // namespace proxdet

#endif
