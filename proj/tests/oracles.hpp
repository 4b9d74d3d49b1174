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
// Independent reference implementations used only by the tests. They favour the most
// direct formulation (brute force, extended precision) over speed.

#ifndef PROXDET_TESTS_ORACLES_HPP
#define PROXDET_TESTS_ORACLES_HPP

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

// J0 by its power series, summed in 50-digit arithmetic.
inline double bessel_j0(double x)
{
    const Big q = Big(x) * Big(x) / 4;
    Big term = 1;
    Big sum = 1;
    for (int m = 1; m < 400; ++m) {
        term *= -q / (Big(m) * Big(m));
        sum += term;
        if (abs(term) < Big("1e-45"))
            break;
    }
    return static_cast<double>(sum);
}

// Standard normal CDF through erfc in 50-digit arithmetic.
inline Big normal_cdf(const Big &z)
{
    return boost::math::erfc(-z / boost::multiprecision::sqrt(Big(2))) / 2;
}

inline double walking_probability(double v, double mean, double sd)
{
    const Big z = (Big(v) - Big(mean)) / Big(sd);
    return static_cast<double>(1 - 2 * abs(normal_cdf(z) - Big("0.5")));
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Sliding-window Hampel: sort every window from scratch.
inline std::vector<double> hampel(const std::vector<double> &x, std::size_t window, double n_sigmas)
{
    const std::size_t n = x.size();
    const std::size_t h = window / 2;
    std::vector<double> out(x);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= h ? i - h : 0;
        const std::size_t hi = std::min(n, i + h + 1);
        std::vector<double> w(x.begin() + static_cast<std::ptrdiff_t>(lo), x.begin() + static_cast<std::ptrdiff_t>(hi));
        const double med = median(w);
        std::vector<double> dev;
        for (double v : w)
            dev.push_back(std::abs(v - med));
        const double mad = median(dev);
        const double d = std::abs(x[i] - med);
        const bool outlier = mad == 0.0 ? d > 0.0 : d > n_sigmas * 1.4826 * mad;
        if (outlier)
            out[i] = med;
    }
    return out;
}

inline double pearson(const std::vector<double> &a, const std::vector<double> &b)
{
    const std::size_t n = a.size();
    long double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    long double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0 || sbb == 0)
        return 0.0;
    return static_cast<double>(sab / std::sqrt(saa * sbb));
}

inline double ols_slope(const std::vector<double> &t, const std::vector<double> &y)
{
    const std::size_t n = t.size();
    long double mt = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (t[i] - mt) * (y[i] - my);
        den += (t[i] - mt) * (t[i] - mt);
    }
    return static_cast<double>(num / den);
}

// Direct-sum unbiased autocorrelation, clipped to [-1, 1].
inline std::vector<double> autocorrelation(const std::vector<double> &x, std::size_t max_lag)
{
    const std::size_t n = x.size();
    long double m = 0;
    for (double v : x)
        m += v;
    m /= n;
    long double var = 0;
    for (double v : x)
        var += (v - m) * (v - m);
    var /= n;
    std::vector<double> rho(max_lag + 1, 0.0);
    if (var == 0)
        return rho;
    for (std::size_t l = 0; l <= max_lag; ++l) {
        long double s = 0;
        for (std::size_t t = 0; t + l < n; ++t)
            s += (x[t] - m) * (x[t + l] - m);
        const double r = static_cast<double>(s / ((n - l) * var));
        rho[l] = std::clamp(r, -1.0, 1.0);
    }
    return rho;
}

} // namespace oracle

#endif
