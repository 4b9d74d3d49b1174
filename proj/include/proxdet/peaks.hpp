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
#ifndef PROXDET_PEAKS_HPP
#define PROXDET_PEAKS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace proxdet {

struct Peak {
    std::size_t index = 0;
    double value = 0.0;
    double prominence = 0.0;
};

// Interior local maxima of a sampled curve. Flat tops report their middle sample.
std::vector<std::size_t> local_maxima(std::span<const double> x);

// Topographic prominence: height above the higher of the two lowest points reached on
// each side before meeting a strictly higher sample (or the curve boundary).
double prominence(std::span<const double> x, std::size_t peak);

// Local maxima with their prominences, in index order.
std::vector<Peak> find_peaks(std::span<const double> x, double min_prominence = 0.0);

// Same, for minima (prominence measured on the negated curve, value is the original sample).
std::vector<Peak> find_valleys(std::span<const double> x, double min_prominence = 0.0);

} // namespace proxdet

#endif
