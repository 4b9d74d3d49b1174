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
#include "proxdet/peaks.hpp"

#include <algorithm>

namespace proxdet {

std::vector<std::size_t> local_maxima(std::span<const double> x)
{
    std::vector<std::size_t> out;
    const std::size_t n = x.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (x[i - 1] < x[i]) {
            std::size_t ahead = i + 1;
            while (ahead + 1 < n && x[ahead] == x[i])
                ++ahead;
            if (x[ahead] < x[i]) {
                out.push_back((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        ++i;
    }
    return out;
}

double prominence(std::span<const double> x, std::size_t peak)
{
    const double h = x[peak];
    double left_min = h;
    for (std::size_t j = peak; j-- > 0;) {
        if (x[j] > h)
            break;
        left_min = std::min(left_min, x[j]);
    }
    double right_min = h;
    for (std::size_t j = peak + 1; j < x.size(); ++j) {
        if (x[j] > h)
            break;
        right_min = std::min(right_min, x[j]);
    }
    return h - std::max(left_min, right_min);
}

std::vector<Peak> find_peaks(std::span<const double> x, double min_prominence)
{
    std::vector<Peak> out;
    for (std::size_t i : local_maxima(x)) {
        double p = prominence(x, i);
        if (p >= min_prominence)
            out.push_back({i, x[i], p});
    }
    return out;
}

std::vector<Peak> find_valleys(std::span<const double> x, double min_prominence)
{
    std::vector<double> neg(x.size());
    std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
    auto peaks = find_peaks(neg, min_prominence);
    for (auto &p : peaks)
        p.value = x[p.index];
    return peaks;
}

} // namespace proxdet
