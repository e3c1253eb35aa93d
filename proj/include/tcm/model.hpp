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
#include <cstdint>
#include <string_view>
#include <vector>

#include "tcm/densela.hpp"

namespace tcm {

/// Default refusal threshold for the atom count (N = 2^15 = 32768).
inline constexpr int kDefaultMaxAtoms = 15;

/// Ratio g/(hbar omega) above which the rotating-wave approximation is flagged.
inline constexpr double kRwaThreshold = 0.1;

/// How the photon ladder operators enter the exchange matrix elements.
enum class PhotonFactors {
    bosonic,  ///< a|p> = sqrt(p)|p-1>, a^dagger|p> = sqrt(p+1)|p+1>
    flat,     ///< unit ladder amplitudes; exchange element is g_i alone
};

std::string_view to_string(PhotonFactors f);
PhotonFactors photon_factors_from_string(std::string_view s);

/// Tavis-Cummings parameters with the atomic and cavity frequencies equal.
/// Units: hbar = 1 by default, omega and couplings in angular-frequency units.
struct ModelParams {
    int n = 1;
    double hbar = 1.0;
    double omega = 1.0;
    std::vector<double> couplings{1.0};
    PhotonFactors photon_factors = PhotonFactors::bosonic;

    /// n atoms all coupled with strength g.
    static ModelParams uniform(int n, double g, double omega = 1.0, double hbar = 1.0);

    /// Throws InvalidArgument when an invariant is violated.
    void validate() const;

    std::size_t dimension() const { return std::size_t{1} << n; }

    friend bool operator==(const ModelParams &, const ModelParams &) = default;
};

/// One atomic occupation word of the excitation-n subspace. Atom i (1-based)
/// is bit i-1 of the index; the photon count is implied.
class BasisState {
  public:
    BasisState(int n, std::uint32_t index);

    static BasisState from_occupations(const std::vector<int> &occupations);

    int atoms() const { return n_; }
    std::uint32_t index() const { return index_; }
    /// l_i for 1 <= i <= n.
    int occupation(int i) const { return static_cast<int>((index_ >> (i - 1)) & 1u); }
    std::vector<int> occupations() const;
    int excited() const;
    int photons() const { return n_ - excited(); }

  private:
    int n_;
    std::uint32_t index_;
};

/// All 2^n basis states in index order. Throws DimensionError when n < 1 or
/// n > max_atoms.
std::vector<BasisState> enumerate_basis(int n, int max_atoms = kDefaultMaxAtoms);

/// Hamiltonian of the excitation-n subspace in the basis of enumerate_basis.
ComplexMatrix build_hamiltonian(const ModelParams &params, int max_atoms = kDefaultMaxAtoms);

struct RwaReport {
    double ratio = 0.0;  ///< max_i g_i / (hbar omega)
    bool valid = false;  ///< ratio < kRwaThreshold
};

RwaReport check_rwa(const ModelParams &params);

}  // namespace tcm
