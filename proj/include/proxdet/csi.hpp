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
#ifndef PROXDET_CSI_HPP
#define PROXDET_CSI_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace proxdet {

using Complex = std::complex<double>;

// One timestamped CSI snapshot: complex channel gain per subcarrier.
struct CsiFrame {
    double timestamp = 0.0;                // seconds
    std::vector<Complex> csi;              // one gain per subcarrier
    std::vector<double> subcarrier_freqs;  // Hz, strictly increasing
};

// Power response |H|^2 per subcarrier.
struct PowerFrame {
    double timestamp = 0.0;
    std::vector<double> g;
};

// Time x subcarrier matrix of power responses at a nominal sample rate.
struct PowerSeries {
    double sample_rate = 0.0;  // Hz
    std::size_t num_subcarriers = 0;
    std::vector<PowerFrame> frames;

    std::size_t size() const { return frames.size(); }
    bool empty() const { return frames.empty(); }
    // Column view of one subcarrier over time.
    std::vector<double> subcarrier(std::size_t index) const;
};

// Throws DataError if the frame violates the CsiFrame invariants.
void validate(const CsiFrame &frame);

// Throws DataError on width mismatch; returns the number of frames whose spacing
// deviates from 1/sample_rate by more than `jitter_tolerance` (relative). A warning is
// emitted when that count is nonzero.
std::size_t validate(const PowerSeries &series, double jitter_tolerance = 0.1);

// Evenly spaced subcarrier centre frequencies spanning `bandwidth` around `center_freq`.
std::vector<double> subcarrier_frequencies(std::size_t count, double center_freq, double bandwidth);

PowerFrame power_response(const CsiFrame &frame);

// Divides by the cross-subcarrier mean. Throws DegenerateFrameError for all-zero frames.
PowerFrame normalize_frame(const PowerFrame &frame);

// Centered-window Hampel outlier replacement per subcarrier (truncated windows at edges).
// A sample is replaced by the window median when |x - median| > n_sigmas * 1.4826 * MAD;
// with MAD = 0 every sample differing from the median is replaced.
PowerSeries hampel_filter(const PowerSeries &series, std::size_t window, double n_sigmas);

// Block-mean decimation by an integer factor. Trailing frames that do not fill a block
// are dropped.
PowerSeries downsample(const PowerSeries &series, std::size_t factor);

// Hampel rule for one sample given its window; shared by the batch and streaming paths.
double hampel_value(double sample, std::vector<double> &window_scratch, double n_sigmas);

// Streaming Hampel filter over PowerFrames. Produces exactly the output of
// hampel_filter() on the concatenated input, delayed by window/2 frames.
class HampelStream {
public:
    HampelStream(std::size_t num_subcarriers, std::size_t window, double n_sigmas);

    // Push one frame; returns the frames that became final (0 or 1).
    std::vector<PowerFrame> push(PowerFrame frame);
    // Flush the tail using truncated windows.
    std::vector<PowerFrame> finish();

private:
    PowerFrame filter_at(std::size_t index) const;
    void trim();

    std::size_t num_subcarriers_;
    std::size_t half_;
    double n_sigmas_;
    std::vector<PowerFrame> buffer_;  // frames [offset_, offset_ + size)
    std::size_t offset_ = 0;          // absolute index of buffer_[0]
    std::size_t next_out_ = 0;        // absolute index of next frame to emit
    std::size_t total_ = 0;
    mutable std::vector<double> scratch_;
};

} // namespace proxdet

#endif
