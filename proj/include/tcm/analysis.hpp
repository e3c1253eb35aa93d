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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tcm/evolution.hpp"

namespace tcm {

/// Local maxima below this height are treated as round-off, not peaks.
inline constexpr double kPeakMinHeight = 1e-6;

struct Peak {
    std::size_t index = 0;
    double time = 0.0;
    double height = 0.0;
};

/// Interior local maxima: v[i] > v[i-1], v[i] >= v[i+1] and v[i] >= min_height.
std::vector<Peak> find_peaks(std::span<const double> times, std::span<const double> values,
                             double min_height = kPeakMinHeight);

/// Column m of the photon distribution over time.
std::vector<double> sector_series(const TrajectoryRecord &record, int sector);

/// Peak structure of the photon-sector curves.
struct SectorReport {
    /// Time of the first interior peak of P_m; NaN when P_m has none.
    std::vector<double> first_peak_time;
    std::vector<double> first_peak_height;
    /// max_t P_m and where it happens.
    std::vector<double> max_height;
    std::vector<double> max_time;
    /// First peaks of P_1 .. P_n occur in strictly increasing order.
    bool peaks_ordered = false;
    /// max over m < n/2 of |max_t P_m - max_t P_{n-m}|.
    double max_symmetry_gap = 0.0;
};

SectorReport analyze_sectors(const TrajectoryRecord &record);

}  // namespace tcm
