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

#include "proxdet/diagnostics.hpp"

#include <iostream>
#include <utility>

namespace proxdet {

namespace {
WarningSink &sink_ref()
{
    static WarningSink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}
} // namespace

WarningSink set_warning_sink(WarningSink sink)
{
    return std::exchange(sink_ref(), std::move(sink));
}

void warn(std::string_view message)
{
    if (auto &sink = sink_ref())
        sink(message);
}

} // namespace proxdet
