// Copyright 2026 The tcmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tcm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tcm/error.hpp"

namespace tcm {

std::vector<Peak> find_peaks(std::span<const double> times, std::span<const double> values, double min_height) {
    if (times.size() != values.size()) {
        throw DimensionError("find_peaks: times and values differ in length");
    }
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] >= min_height) {
            peaks.push_back({i, times[i], values[i]});
        }
    }
    return peaks;
}

std::vector<double> sector_series(const TrajectoryRecord &record, int sector) {
    std::vector<double> out;
    out.reserve(record.photon_probs.size());
    for (const auto &probs : record.photon_probs) {
        if (sector < 0 || static_cast<std::size_t>(sector) >= probs.size()) {
            throw DimensionError("sector_series: sector out of range");
        }
        out.push_back(probs[static_cast<std::size_t>(sector)]);
    }
    return out;
}

SectorReport analyze_sectors(const TrajectoryRecord &record) {
    if (record.photon_probs.empty()) {
        throw InvalidArgument("analyze_sectors: empty trajectory");
    }
    const int n = static_cast<int>(record.photon_probs.front().size()) - 1;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    SectorReport report;
    for (int m = 0; m <= n; ++m) {
        const auto series = sector_series(record, m);
        const auto peaks = find_peaks(record.times, series);
        report.first_peak_time.push_back(peaks.empty() ? nan : peaks.front().time);
        report.first_peak_height.push_back(peaks.empty() ? nan : peaks.front().height);
        const auto top = std::max_element(series.begin(), series.end());
        report.max_height.push_back(*top);
        report.max_time.push_back(record.times[static_cast<std::size_t>(top - series.begin())]);
    }

    report.peaks_ordered = n >= 1;
    for (int m = 1; m <= n; ++m) {
        const double t = report.first_peak_time[static_cast<std::size_t>(m)];
        if (std::isnan(t)) {
            report.peaks_ordered = false;
            break;
        }
        if (m > 1 && !(report.first_peak_time[static_cast<std::size_t>(m - 1)] < t)) {
            report.peaks_ordered = false;
            break;
        }
    }
    for (int m = 0; 2 * m < n; ++m) {
        const double gap = std::abs(report.max_height[static_cast<std::size_t>(m)] -
                                    report.max_height[static_cast<std::size_t>(n - m)]);
        report.max_symmetry_gap = std::max(report.max_symmetry_gap, gap);
    }
    return report;
}

}  // namespace tcm
