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
#include "proxdet/csi_io.hpp"

#include "proxdet/diagnostics.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace proxdet {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

bool parse_double(std::string_view text, double &out)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty())
        return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

void append_double(std::string &buf, double v)
{
    char tmp[32];
    auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
    (void)ec;
    buf.append(tmp, ptr);
}

} // namespace

std::string format_double(double value)
{
    std::string s;
    append_double(s, value);
    return s;
}

std::string CaptureHeader::to_line() const
{
    std::string s = kind == CaptureKind::Csi ? "csi,v1," : "power,v1,";
    s += std::to_string(num_subcarriers);
    for (double v : {sample_rate, center_freq, bandwidth}) {
        s += ',';
        append_double(s, v);
    }
    return s;
}

CaptureHeader CaptureHeader::parse(const std::string &raw)
{
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    auto parts = split(line, ',');
    if (parts.size() != 6)
        throw DataError("line 1: header must have 6 fields (kind,v1,N,sample_rate,center_freq,bandwidth)");
    CaptureHeader h;
    if (parts[0] == "csi")
        h.kind = CaptureKind::Csi;
    else if (parts[0] == "power")
        h.kind = CaptureKind::Power;
    else
        throw DataError("line 1: unknown capture kind '" + std::string(parts[0]) + "'");
    if (parts[1] != "v1")
        throw DataError("line 1: unsupported format version '" + std::string(parts[1]) + "'");
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || n == 0)
        throw DataError("line 1: invalid subcarrier count");
    h.num_subcarriers = n;
    if (!parse_double(parts[3], h.sample_rate) || !(h.sample_rate > 0.0))
        throw DataError("line 1: invalid sample rate");
    if (!parse_double(parts[4], h.center_freq) || !(h.center_freq > 0.0))
        throw DataError("line 1: invalid center frequency");
    if (!parse_double(parts[5], h.bandwidth) || !(h.bandwidth > 0.0))
        throw DataError("line 1: invalid bandwidth");
    return h;
}

CaptureReader::CaptureReader(std::istream &in) : in_(in)
{
    if (!std::getline(in_, line_))
        throw DataError("line 1: missing header");
    line_no_ = 1;
    header_ = CaptureHeader::parse(line_);
    freqs_ = subcarrier_frequencies(header_.num_subcarriers, header_.center_freq, header_.bandwidth);
}

bool CaptureReader::read_fields()
{
    while (std::getline(in_, line_)) {
        ++line_no_;
        std::string_view view = line_;
        if (!view.empty() && view.back() == '\r')
            view.remove_suffix(1);
        if (view.empty())
            continue;
        const std::size_t expected =
            1 + (header_.kind == CaptureKind::Csi ? 2 : 1) * header_.num_subcarriers;
        fields_.clear();
        std::size_t start = 0;
        while (true) {
            auto pos = view.find(',', start);
            auto token = view.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
            double v = 0.0;
            if (!parse_double(token, v))
                throw DataError("line " + std::to_string(line_no_) + ": field " + std::to_string(fields_.size() + 1) +
                                " is not a number");
            if (!std::isfinite(v))
                throw DataError("line " + std::to_string(line_no_) + ": non-finite value in field " +
                                std::to_string(fields_.size() + 1));
            fields_.push_back(v);
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
        if (fields_.size() != expected)
            throw DataError("line " + std::to_string(line_no_) + ": expected " + std::to_string(expected) +
                            " fields, got " + std::to_string(fields_.size()));
        return true;
    }
    return false;
}

bool CaptureReader::next(CsiFrame &frame)
{
    if (header_.kind != CaptureKind::Csi)
        throw DataError("power capture cannot be read as CSI frames");
    if (!read_fields())
        return false;
    frame.timestamp = fields_[0];
    frame.csi.resize(header_.num_subcarriers);
    for (std::size_t i = 0; i < header_.num_subcarriers; ++i)
        frame.csi[i] = Complex(fields_[1 + 2 * i], fields_[2 + 2 * i]);
    frame.subcarrier_freqs = freqs_;
    return true;
}

bool CaptureReader::next(PowerFrame &frame)
{
    if (!read_fields())
        return false;
    frame.timestamp = fields_[0];
    frame.g.resize(header_.num_subcarriers);
    if (header_.kind == CaptureKind::Csi) {
        for (std::size_t i = 0; i < header_.num_subcarriers; ++i) {
            const double re = fields_[1 + 2 * i];
            const double im = fields_[2 + 2 * i];
            frame.g[i] = re * re + im * im;
        }
    } else {
        for (std::size_t i = 0; i < header_.num_subcarriers; ++i) {
            if (fields_[1 + i] < 0.0)
                throw DataError("line " + std::to_string(line_no_) + ": negative power value");
            frame.g[i] = fields_[1 + i];
        }
    }
    return true;
}

CaptureWriter::CaptureWriter(std::ostream &out, const CaptureHeader &header) : out_(out), header_(header)
{
    out_ << header_.to_line() << '\n';
}

void CaptureWriter::write(const CsiFrame &frame)
{
    if (header_.kind != CaptureKind::Csi || frame.csi.size() != header_.num_subcarriers)
        throw DataError("CSI frame does not match the capture header");
    buf_.clear();
    append_double(buf_, frame.timestamp);
    for (const auto &h : frame.csi) {
        buf_ += ',';
        append_double(buf_, h.real());
        buf_ += ',';
        append_double(buf_, h.imag());
    }
    buf_ += '\n';
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
}

void CaptureWriter::write(const PowerFrame &frame)
{
    if (header_.kind != CaptureKind::Power || frame.g.size() != header_.num_subcarriers)
        throw DataError("power frame does not match the capture header");
    buf_.clear();
    append_double(buf_, frame.timestamp);
    for (double g : frame.g) {
        buf_ += ',';
        append_double(buf_, g);
    }
    buf_ += '\n';
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
}

} // namespace proxdet
