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
#include "proxdet/csi.hpp"

#include "proxdet/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace proxdet {

namespace {

constexpr double kMadScale = 1.4826;

// Median of the first n values; reorders them.
double median_inplace(std::vector<double> &v, std::size_t n)
{
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.begin() + static_cast<std::ptrdiff_t>(n));
    double upper = *mid;
    if (n % 2 == 1)
        return upper;
    double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

} // namespace

std::vector<double> PowerSeries::subcarrier(std::size_t index) const
{
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto &f : frames)
        out.push_back(f.g.at(index));
    return out;
}

void validate(const CsiFrame &frame)
{
    if (frame.csi.size() != frame.subcarrier_freqs.size())
        throw DataError("CSI frame has " + std::to_string(frame.csi.size()) + " gains but " +
                        std::to_string(frame.subcarrier_freqs.size()) + " subcarrier frequencies");
    if (!std::isfinite(frame.timestamp))
        throw DataError("CSI frame timestamp is not finite");
    for (std::size_t i = 0; i < frame.csi.size(); ++i) {
        if (!std::isfinite(frame.csi[i].real()) || !std::isfinite(frame.csi[i].imag()))
            throw DataError("CSI frame at t=" + std::to_string(frame.timestamp) + " has a non-finite gain on subcarrier " +
                            std::to_string(i));
        if (i > 0 && !(frame.subcarrier_freqs[i] > frame.subcarrier_freqs[i - 1]))
            throw DataError("subcarrier frequencies must be strictly increasing");
    }
}

std::size_t validate(const PowerSeries &series, double jitter_tolerance)
{
    if (!(series.sample_rate > 0.0))
        throw ParameterError("power series sample rate must be positive");
    const double period = 1.0 / series.sample_rate;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < series.frames.size(); ++i) {
        if (series.frames[i].g.size() != series.num_subcarriers)
            throw DataError("power frame " + std::to_string(i) + " has width " + std::to_string(series.frames[i].g.size()) +
                            ", expected " + std::to_string(series.num_subcarriers));
        if (i > 0) {
            double dt = series.frames[i].timestamp - series.frames[i - 1].timestamp;
            if (std::abs(dt - period) > jitter_tolerance * period)
                ++violations;
        }
    }
    if (violations > 0)
        warn(std::to_string(violations) + " frame(s) deviate from the nominal " + std::to_string(series.sample_rate) +
             " Hz spacing by more than " + std::to_string(jitter_tolerance * 100.0) + "%");
    return violations;
}

std::vector<double> subcarrier_frequencies(std::size_t count, double center_freq, double bandwidth)
{
    if (count == 0 || !(center_freq > 0.0) || !(bandwidth > 0.0))
        throw ParameterError("subcarrier layout needs count > 0, center_freq > 0 and bandwidth > 0");
    std::vector<double> freqs(count);
    const double spacing = bandwidth / static_cast<double>(count);
    const double mid = 0.5 * static_cast<double>(count - 1);
    for (std::size_t n = 0; n < count; ++n)
        freqs[n] = center_freq + (static_cast<double>(n) - mid) * spacing;
    return freqs;
}

PowerFrame power_response(const CsiFrame &frame)
{
    PowerFrame out;
    out.timestamp = frame.timestamp;
    out.g.resize(frame.csi.size());
    for (std::size_t i = 0; i < frame.csi.size(); ++i) {
        const double re = frame.csi[i].real();
        const double im = frame.csi[i].imag();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw DataError("rejected frame at t=" + std::to_string(frame.timestamp) + ": non-finite CSI on subcarrier " +
                            std::to_string(i));
        out.g[i] = re * re + im * im;
    }
    return out;
}

PowerFrame normalize_frame(const PowerFrame &frame)
{
    double sum = 0.0;
    for (double v : frame.g)
        sum += v;
    if (frame.g.empty() || !(sum > 0.0) || !std::isfinite(sum))
        throw DegenerateFrameError("degenerate power frame at t=" + std::to_string(frame.timestamp));
    const double mean = sum / static_cast<double>(frame.g.size());
    PowerFrame out{frame.timestamp, frame.g};
    for (double &v : out.g)
        v /= mean;
    return out;
}

double hampel_value(double sample, std::vector<double> &window, double n_sigmas)
{
    const std::size_t n = window.size();
    const double med = median_inplace(window, n);
    for (double &v : window)
        v = std::abs(v - med);
    const double mad = median_inplace(window, n);
    const double dev = std::abs(sample - med);
    if (mad == 0.0)
        return dev > 0.0 ? med : sample;
    return dev > n_sigmas * kMadScale * mad ? med : sample;
}

PowerSeries hampel_filter(const PowerSeries &series, std::size_t window, double n_sigmas)
{
    if (window < 3 || window % 2 == 0)
        throw ParameterError("Hampel window must be odd and >= 3");
    if (!(n_sigmas > 0.0))
        throw ParameterError("Hampel n_sigmas must be positive");
    if (window > series.size()) {
        warn("Hampel window (" + std::to_string(window) + ") exceeds series length (" + std::to_string(series.size()) +
             "); returning input unchanged");
        return series;
    }

    PowerSeries out = series;
    const std::size_t n = series.size();
    const std::size_t half = window / 2;
    std::vector<double> scratch;
    scratch.reserve(window);
    for (std::size_t s = 0; s < series.num_subcarriers; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t lo = t >= half ? t - half : 0;
            const std::size_t hi = std::min(n, t + half + 1);
            scratch.clear();
            for (std::size_t j = lo; j < hi; ++j)
                scratch.push_back(series.frames[j].g[s]);
            out.frames[t].g[s] = hampel_value(series.frames[t].g[s], scratch, n_sigmas);
        }
    }
    return out;
}

PowerSeries downsample(const PowerSeries &series, std::size_t factor)
{
    if (factor == 0)
        throw ParameterError("downsample factor must be >= 1");
    PowerSeries out;
    out.sample_rate = series.sample_rate / static_cast<double>(factor);
    out.num_subcarriers = series.num_subcarriers;
    if (factor == 1) {
        out.frames = series.frames;
        return out;
    }
    const std::size_t blocks = series.size() / factor;
    out.frames.reserve(blocks);
    const double inv = 1.0 / static_cast<double>(factor);
    for (std::size_t b = 0; b < blocks; ++b) {
        PowerFrame f;
        f.g.assign(series.num_subcarriers, 0.0);
        double ts = 0.0;
        for (std::size_t j = b * factor; j < (b + 1) * factor; ++j) {
            const auto &src = series.frames[j];
            ts += src.timestamp;
            for (std::size_t s = 0; s < series.num_subcarriers; ++s)
                f.g[s] += src.g[s];
        }
        f.timestamp = ts * inv;
        for (double &v : f.g)
            v *= inv;
        out.frames.push_back(std::move(f));
    }
    return out;
}

HampelStream::HampelStream(std::size_t num_subcarriers, std::size_t window, double n_sigmas)
    : num_subcarriers_(num_subcarriers), half_(window / 2), n_sigmas_(n_sigmas)
{
    if (window < 3 || window % 2 == 0)
        throw ParameterError("Hampel window must be odd and >= 3");
    if (!(n_sigmas > 0.0))
        throw ParameterError("Hampel n_sigmas must be positive");
    scratch_.reserve(window);
}

PowerFrame HampelStream::filter_at(std::size_t index) const
{
    const std::size_t lo = index >= half_ ? index - half_ : 0;
    const std::size_t hi = std::min(total_, index + half_ + 1);
    const PowerFrame &centre = buffer_[index - offset_];
    PowerFrame out{centre.timestamp, centre.g};
    for (std::size_t s = 0; s < num_subcarriers_; ++s) {
        scratch_.clear();
        for (std::size_t j = lo; j < hi; ++j)
            scratch_.push_back(buffer_[j - offset_].g[s]);
        out.g[s] = hampel_value(centre.g[s], scratch_, n_sigmas_);
    }
    return out;
}

void HampelStream::trim()
{
    // Keep frames still needed as left context of the next output.
    const std::size_t keep_from = next_out_ >= half_ ? next_out_ - half_ : 0;
    if (keep_from > offset_ + 4 * (half_ + 1)) {
        buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(keep_from - offset_));
        offset_ = keep_from;
    }
}

std::vector<PowerFrame> HampelStream::push(PowerFrame frame)
{
    if (frame.g.size() != num_subcarriers_)
        throw DataError("Hampel stream frame width mismatch");
    buffer_.push_back(std::move(frame));
    ++total_;
    std::vector<PowerFrame> out;
    if (total_ > next_out_ + half_) {
        out.push_back(filter_at(next_out_));
        ++next_out_;
        trim();
    }
    return out;
}

std::vector<PowerFrame> HampelStream::finish()
{
    std::vector<PowerFrame> out;
    while (next_out_ < total_) {
        out.push_back(filter_at(next_out_));
        ++next_out_;
    }
    return out;
}

} // namespace proxdet
