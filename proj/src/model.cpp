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

#include "tcm/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "tcm/error.hpp"

namespace tcm {

std::string_view to_string(PhotonFactors f) {
    switch (f) {
    case PhotonFactors::bosonic:
        return "bosonic";
    case PhotonFactors::flat:
        return "flat";
    }
    return "bosonic";
}

PhotonFactors photon_factors_from_string(std::string_view s) {
    if (s == "bosonic") {
        return PhotonFactors::bosonic;
    }
    if (s == "flat") {
        return PhotonFactors::flat;
    }
    throw InvalidArgument("unknown photon factor mode '" + std::string(s) + "' (expected bosonic or flat)");
}

ModelParams ModelParams::uniform(int n, double g, double omega, double hbar) {
    ModelParams p;
    p.n = n;
    p.hbar = hbar;
    p.omega = omega;
    p.couplings.assign(static_cast<std::size_t>(std::max(n, 0)), g);
    return p;
}

void ModelParams::validate() const {
    if (n < 1) {
        throw InvalidArgument("model: atom count must be >= 1");
    }
    if (couplings.size() != static_cast<std::size_t>(n)) {
        throw InvalidArgument("model: expected " + std::to_string(n) + " couplings, got " +
                              std::to_string(couplings.size()));
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("model: omega must be positive");
    }
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw InvalidArgument("model: hbar must be positive");
    }
    for (double g : couplings) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw InvalidArgument("model: couplings must be finite and non-negative");
        }
    }
}

BasisState::BasisState(int n, std::uint32_t index) : n_(n), index_(index) {
    if (n < 1 || n > 31) {
        throw DimensionError("BasisState: atom count out of range");
    }
    if (index >= (std::uint32_t{1} << n)) {
        throw DimensionError("BasisState: index " + std::to_string(index) + " out of range for n=" +
                             std::to_string(n));
    }
}

BasisState BasisState::from_occupations(const std::vector<int> &occupations) {
    std::uint32_t index = 0;
    for (std::size_t i = 0; i < occupations.size(); ++i) {
        if (occupations[i] != 0 && occupations[i] != 1) {
            throw InvalidArgument("BasisState: occupations must be 0 or 1");
        }
        index |= static_cast<std::uint32_t>(occupations[i]) << i;
    }
    return BasisState(static_cast<int>(occupations.size()), index);
}

std::vector<int> BasisState::occupations() const {
    std::vector<int> out(static_cast<std::size_t>(n_));
    for (int i = 1; i <= n_; ++i) {
        out[static_cast<std::size_t>(i - 1)] = occupation(i);
    }
    return out;
}

int BasisState::excited() const { return std::popcount(index_); }

std::vector<BasisState> enumerate_basis(int n, int max_atoms) {
    if (n < 1) {
        throw DimensionError("enumerate_basis: atom count must be >= 1");
    }
    if (n > max_atoms || n > 31) {
        throw DimensionError("enumerate_basis: n=" + std::to_string(n) + " exceeds the dimension cap (max " +
                             std::to_string(max_atoms) + " atoms)");
    }
    std::vector<BasisState> states;
    states.reserve(std::size_t{1} << n);
    for (std::uint32_t j = 0; j < (std::uint32_t{1} << n); ++j) {
        states.emplace_back(n, j);
    }
    return states;
}

ComplexMatrix build_hamiltonian(const ModelParams &params, int max_atoms) {
    params.validate();
    const auto basis = enumerate_basis(params.n, max_atoms);
    ComplexMatrix h(basis.size());
    const double diagonal = params.hbar * params.omega * params.n;
    for (const auto &s : basis) {
        const std::size_t row = s.index();
        h(row, row) = diagonal;
        const int p = s.photons();
        // De-excitation a^dagger sigma_i: l_i 1 -> 0, one more photon.
        for (int i = 1; i <= params.n; ++i) {
            if (s.occupation(i) == 0) {
                continue;
            }
            const std::size_t target = row & ~(std::size_t{1} << (i - 1));
            double element = params.couplings[static_cast<std::size_t>(i - 1)];
            if (params.photon_factors == PhotonFactors::bosonic) {
                element *= std::sqrt(static_cast<double>(p + 1));
            }
            h(target, row) = element;
            h(row, target) = element;
        }
    }
    return h;
}

RwaReport check_rwa(const ModelParams &params) {
    params.validate();
    const double g_max = *std::max_element(params.couplings.begin(), params.couplings.end());
    RwaReport report;
    report.ratio = g_max / (params.hbar * params.omega);
    report.valid = report.ratio < kRwaThreshold;
    return report;
}

}  // namespace tcm
