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
#include "proxdet/spectral.hpp"

#include "proxdet/diagnostics.hpp"
#include "proxdet/peaks.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace proxdet {

struct AcfEngine::Impl {
    std::size_t fft_len = 0;
    double *time = nullptr;
    fftw_complex *freq = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Impl()
    {
        if (forward)
            fftw_destroy_plan(forward);
        if (backward)
            fftw_destroy_plan(backward);
        fftw_free(time);
        fftw_free(freq);
    }
};

AcfEngine::AcfEngine(std::size_t window_len, std::size_t max_lag)
    : impl_(std::make_unique<Impl>()), n_(window_len), max_lag_(max_lag)
{
    if (window_len < 2 || max_lag == 0 || max_lag >= window_len)
        throw ParameterError("ACF engine needs window_len >= 2 and 0 < max_lag < window_len");
    // Zero padding to n + max_lag keeps lags 0..max_lag free of circular wrap-around.
    impl_->fft_len = n_ + max_lag_;
    const std::size_t bins = impl_->fft_len / 2 + 1;
    impl_->time = fftw_alloc_real(impl_->fft_len);
    impl_->freq = fftw_alloc_complex(bins);
    const int len = static_cast<int>(impl_->fft_len);
    // FFTW_ESTIMATE keeps plan selection, and therefore rounding, deterministic.
    impl_->forward = fftw_plan_dft_r2c_1d(len, impl_->time, impl_->freq, FFTW_ESTIMATE);
    impl_->backward = fftw_plan_dft_c2r_1d(len, impl_->freq, impl_->time, FFTW_ESTIMATE);
}

AcfEngine::~AcfEngine() = default;

bool AcfEngine::compute(std::span<const double> x, std::span<double> rho)
{
    if (x.size() != n_ || rho.size() != max_lag_ + 1)
        throw ParameterError("ACF engine called with mismatched buffer sizes");
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(n_);
    double ss = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double d = x[i] - mean;
        impl_->time[i] = d;
        ss += d * d;
    }
    // Relative test: a constant window leaves only rounding residue after mean removal.
    if (!(ss > 1e-24 * std::max(1.0, mean * mean) * static_cast<double>(n_))) {
        std::fill(rho.begin(), rho.end(), 0.0);
        return false;
    }
    std::fill(impl_->time + n_, impl_->time + impl_->fft_len, 0.0);
    fftw_execute(impl_->forward);
    const std::size_t bins = impl_->fft_len / 2 + 1;
    for (std::size_t k = 0; k < bins; ++k) {
        const double re = impl_->freq[k][0];
        const double im = impl_->freq[k][1];
        impl_->freq[k][0] = re * re + im * im;
        impl_->freq[k][1] = 0.0;
    }
    fftw_execute(impl_->backward);
    const double scale = 1.0 / static_cast<double>(impl_->fft_len);
    const double var = ss / static_cast<double>(n_);
    rho[0] = 1.0;
    for (std::size_t l = 1; l <= max_lag_; ++l) {
        const double r = impl_->time[l] * scale / (static_cast<double>(n_ - l) * var);
        rho[l] = std::clamp(r, -1.0, 1.0);
    }
    return true;
}

SubcarrierAcf acf_per_subcarrier(const PowerSeries &window, double max_lag_s, AcfEngine &engine)
{
    const std::size_t n = window.size();
    if (!(window.sample_rate > 0.0))
        throw ParameterError("ACF window needs a positive sample rate");
    const auto max_lag = static_cast<std::size_t>(std::llround(max_lag_s * window.sample_rate));
    if (n < 2 * max_lag || max_lag == 0)
        throw ParameterError("ACF window must hold at least 2 x max_lag samples");
    if (engine.window_len() != n || engine.max_lag() != max_lag)
        throw ParameterError("ACF engine shape does not match the window");

    SubcarrierAcf out;
    out.lag_step = 1.0 / window.sample_rate;
    out.num_lags = max_lag + 1;
    out.num_subcarriers = window.num_subcarriers;
    out.values.assign(out.num_lags * out.num_subcarriers, 0.0);
    out.has_variance.assign(out.num_subcarriers, false);

    std::vector<double> column(n);
    std::vector<double> rho(out.num_lags);
    for (std::size_t s = 0; s < window.num_subcarriers; ++s) {
        for (std::size_t t = 0; t < n; ++t)
            column[t] = window.frames[t].g[s];
        out.has_variance[s] = engine.compute(column, rho);
        for (std::size_t l = 0; l < out.num_lags; ++l)
            out.values[l * out.num_subcarriers + s] = out.has_variance[s] ? rho[l] : 0.0;
    }
    return out;
}

SubcarrierAcf acf_per_subcarrier(const PowerSeries &window, double max_lag_s)
{
    const auto max_lag = static_cast<std::size_t>(std::llround(max_lag_s * window.sample_rate));
    if (window.size() < 2 * max_lag || max_lag == 0)
        throw ParameterError("ACF window must hold at least 2 x max_lag samples");
    AcfEngine engine(window.size(), max_lag);
    return acf_per_subcarrier(window, max_lag_s, engine);
}

std::vector<double> lag_differential(std::span<const double> lags, std::span<const double> acf)
{
    if (lags.size() != acf.size() || lags.size() < 2)
        throw ParameterError("lag differential needs matching lag/acf vectors of length >= 2");
    const std::size_t n = lags.size();
    std::vector<double> d(n - 1);
    d[0] = (acf[1] - acf[0]) / (lags[1] - lags[0]);
    for (std::size_t l = 1; l + 1 < n; ++l)
        d[l] = (acf[l + 1] - acf[l - 1]) / (lags[l + 1] - lags[l - 1]);
    return d;
}

AcfResult combine_acf(const SubcarrierAcf &per_subcarrier, double window_end)
{
    const std::size_t L = per_subcarrier.num_lags;
    const std::size_t S = per_subcarrier.num_subcarriers;
    if (L < 2)
        throw ParameterError("combined ACF needs at least lags 0 and 1");
    AcfResult out;
    out.window_end = window_end;
    out.lags.resize(L);
    for (std::size_t l = 0; l < L; ++l)
        out.lags[l] = static_cast<double>(l) * per_subcarrier.lag_step;
    out.acf.assign(L, 0.0);
    out.per_subcarrier_weight.assign(S, 0.0);

    double total = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
        if (!per_subcarrier.has_variance[s])
            continue;
        out.per_subcarrier_weight[s] = std::max(per_subcarrier.at(1, s), 0.0);
        total += out.per_subcarrier_weight[s];
    }
    if (total > 0.0) {
        for (double &w : out.per_subcarrier_weight)
            w /= total;
        for (std::size_t l = 0; l < L; ++l) {
            double acc = 0.0;
            for (std::size_t s = 0; s < S; ++s)
                acc += out.per_subcarrier_weight[s] * per_subcarrier.at(l, s);
            out.acf[l] = acc;
        }
        out.acf[0] = 1.0;
        out.valid = true;
    }
    out.acf_diff = lag_differential(out.lags, out.acf);
    return out;
}

AcfResult make_acf_result(std::vector<double> lags, std::vector<double> acf, double window_end)
{
    if (lags.size() != acf.size() || lags.size() < 2)
        throw ParameterError("ACF result needs matching lag/acf vectors of length >= 2");
    AcfResult out;
    out.window_end = window_end;
    out.acf_diff = lag_differential(lags, acf);
    out.lags = std::move(lags);
    out.acf = std::move(acf);
    out.per_subcarrier_weight = {1.0};
    out.valid = true;
    return out;
}

namespace {

// Shape gates on the differential extrema; for an ideal Bessel ACF the ratios are 1.21 and 2.90.
constexpr double kValleyHalfRatioMin = 0.9;
constexpr double kValleyHalfRatioMax = 1.6;
constexpr double kPeakValleyRatioMin = 2.3;
constexpr double kPeakValleyRatioMax = 3.5;

// Local linear-regression slope of y (unit spacing) with half-width h, truncated at edges.
std::vector<double> smoothed_slope(std::span<const double> y, std::size_t h)
{
    const std::size_t n = y.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= h ? i - h : 0;
        const std::size_t hi = std::min(n, i + h + 1);
        const double cnt = static_cast<double>(hi - lo);
        double xm = 0.0, ym = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
            xm += static_cast<double>(j);
            ym += y[j];
        }
        xm /= cnt;
        ym /= cnt;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
            const double dx = static_cast<double>(j) - xm;
            sxy += dx * (y[j] - ym);
            sxx += dx * dx;
        }
        d[i] = sxx > 0.0 ? sxy / sxx : 0.0;
    }
    return d;
}

// Vertex offset of a least-squares parabola through d[i-m..i+m] around index i.
double parabolic_offset(std::span<const double> d, std::size_t i, std::size_t m)
{
    const std::size_t lo = i >= m ? i - m : 0;
    const std::size_t hi = std::min(d.size(), i + m + 1);
    if (hi - lo < 3)
        return 0.0;
    // Normal equations for d ~ a u^2 + b u + c with u = j - i.
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t j = lo; j < hi; ++j) {
        const double u = static_cast<double>(j) - static_cast<double>(i);
        const double u2 = u * u;
        s0 += 1;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        t0 += d[j];
        t1 += u * d[j];
        t2 += u2 * d[j];
    }
    // Cramer's rule on [[s4 s3 s2][s3 s2 s1][s2 s1 s0]] [a b c]^T = [t2 t1 t0]^T.
    const double det = s4 * (s2 * s0 - s1 * s1) - s3 * (s3 * s0 - s1 * s2) + s2 * (s3 * s1 - s2 * s2);
    if (det == 0.0)
        return 0.0;
    const double a = (t2 * (s2 * s0 - s1 * s1) - s3 * (t1 * s0 - s1 * t0) + s2 * (t1 * s1 - s2 * t0)) / det;
    const double b = (s4 * (t1 * s0 - s1 * t0) - t2 * (s3 * s0 - s1 * s2) + s2 * (s3 * t0 - t1 * s2)) / det;
    if (!(a > 0.0))
        return 0.0;
    return std::clamp(-b / (2.0 * a), -static_cast<double>(m), static_cast<double>(m));
}

} // namespace

SpeedEstimate estimate_speed(const AcfResult &acf, double k, double prominence_floor)
{
    if (!(k > 0.0))
        throw ParameterError("wave number must be positive");
    SpeedEstimate est;
    const std::size_t L = acf.acf.size();
    if (!acf.valid || L < 8)
        return est;
    const double dt = acf.lags[1] - acf.lags[0];

    // Lag 0 carries the white-noise variance spike; work on lags >= 1.
    std::span<const double> y(acf.acf.data() + 1, L - 1);
    const std::size_t n = y.size();
    const double y0 = (y[0] + y[1] + y[2]) / 3.0;
    if (!(y0 > 0.0))
        return est;

    // Decorrelation scale: first lag where the short moving average halves. It sets the
    // smoothing width of the differential so the estimator adapts to the speed.
    std::size_t half_idx = n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(n, i + 3);
        double m = 0.0;
        for (std::size_t j = lo; j < hi; ++j)
            m += y[j];
        m /= static_cast<double>(hi - lo);
        if (m <= 0.5 * y0) {
            half_idx = i;
            break;
        }
    }
    if (half_idx == n)
        return est;

    const auto h = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.4 * static_cast<double>(half_idx))));
    auto d = smoothed_slope(y, h);
    double max_abs = 0.0;
    for (double v : d)
        max_abs = std::max(max_abs, std::abs(v));
    if (!(max_abs > 0.0))
        return est;
    for (double &v : d)
        v /= max_abs;

    auto valleys = find_valleys(d, prominence_floor);
    if (valleys.empty())
        return est;
    const Peak valley = valleys.front();
    const auto m = std::max<std::size_t>(1, half_idx);
    const double offset = parabolic_offset(d, valley.index, m);
    const double lag = (static_cast<double>(valley.index) + 1.0 + offset) * dt;
    if (!(lag > 0.0))
        return est;

    // A Bessel-shaped ACF puts the differential valley just past the half-decay lag and
    // the following peak near 2.9 times the valley lag. Noise-driven extrema rarely do both.
    const double half_lag = (static_cast<double>(half_idx) + 1.0) * dt;
    const double ratio = lag / half_lag;
    if (ratio < kValleyHalfRatioMin || ratio > kValleyHalfRatioMax)
        return est;
    const Peak *next = nullptr;
    auto peaks = find_peaks(d, prominence_floor);
    for (const auto &p : peaks) {
        if (p.index > valley.index) {
            next = &p;
            break;
        }
    }
    const double max_lag = static_cast<double>(n) * dt;
    if (next) {
        const double peak_ratio = (static_cast<double>(next->index) + 1.0) * dt / lag;
        if (peak_ratio < kPeakValleyRatioMin || peak_ratio > kPeakValleyRatioMax)
            return est;
    } else if (kPeakValleyRatioMax * lag < max_lag) {
        return est;
    }

    est.found = true;
    est.valley_lag = lag;
    est.v_hat = kBesselJ1FirstMax / (k * lag);
    est.valley_prominence = valley.prominence;
    if (next) {
        est.peak_prominence = next->prominence;
        est.swing = next->value - valley.value;
    }
    return est;
}

double wave_number(double center_freq)
{
    if (!(center_freq > 0.0))
        throw ParameterError("center frequency must be positive");
    return 2.0 * std::numbers::pi * center_freq / kSpeedOfLight;
}

} // namespace proxdet
