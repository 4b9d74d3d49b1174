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
#ifndef PROXDET_CSI_IO_HPP
#define PROXDET_CSI_IO_HPP

#include "proxdet/csi.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>

namespace proxdet {

// Text capture format.
//
//   csi,v1,<num_subcarriers>,<sample_rate_hz>,<center_freq_hz>,<bandwidth_hz>
//   timestamp,re_0,im_0,...,re_{N-1},im_{N-1}
//
// or, for pre-computed power responses,
//
//   power,v1,<num_subcarriers>,<sample_rate_hz>,<center_freq_hz>,<bandwidth_hz>
//   timestamp,g_0,...,g_{N-1}
//
// Numbers are written in shortest round-trip form, so a write/read cycle is exact.
// Subcarrier frequencies are implied by the header (see subcarrier_frequencies()).
enum class CaptureKind { Csi, Power };

struct CaptureHeader {
    CaptureKind kind = CaptureKind::Csi;
    std::size_t num_subcarriers = 0;
    double sample_rate = 0.0;
    double center_freq = 0.0;
    double bandwidth = 0.0;

    std::string to_line() const;
    static CaptureHeader parse(const std::string &line);  // throws DataError
};

class CaptureReader {
public:
    // Reads and validates the header line. Errors carry the 1-based line number.
    explicit CaptureReader(std::istream &in);

    const CaptureHeader &header() const { return header_; }
    const std::vector<double> &subcarrier_freqs() const { return freqs_; }

    // Next CSI row; only valid for Csi captures. Returns false at end of input.
    bool next(CsiFrame &frame);
    // Next row as a power frame; Csi rows are converted with power_response().
    bool next(PowerFrame &frame);

    std::size_t line_number() const { return line_no_; }

private:
    bool read_fields();

    std::istream &in_;
    CaptureHeader header_;
    std::vector<double> freqs_;
    std::vector<double> fields_;
    std::string line_;
    std::size_t line_no_ = 0;
};

class CaptureWriter {
public:
    CaptureWriter(std::ostream &out, const CaptureHeader &header);

    void write(const CsiFrame &frame);
    void write(const PowerFrame &frame);

private:
    std::ostream &out_;
    CaptureHeader header_;
    std::string buf_;
};

// Shortest round-trip decimal text for a double.
std::string format_double(double value);

} // namespace proxdet

#endif
