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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tcm {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    /// Zero matrix of the given dimension (dim >= 1).
    explicit ComplexMatrix(std::size_t dim);

    /// Takes ownership of row-major entries; entries.size() must be dim * dim.
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    bool empty() const { return dim_ == 0; }

    Complex &operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex &operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    std::span<Complex> data() { return data_; }
    std::span<const Complex> data() const { return data_; }

    /// Bitwise entry equality (-0.0 == +0.0).
    friend bool operator==(const ComplexMatrix &a, const ComplexMatrix &b) = default;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex s);
    ComplexMatrix &operator*=(double s);

    /// True when every entry is finite.
    bool all_finite() const;

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(double s, ComplexMatrix a);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix &a);

Complex trace(const ComplexMatrix &a);

double frobenius_norm(const ComplexMatrix &a);

/// sqrt(sum |a_ij - b_ij|^2). Throws DimensionError on mismatch.
double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b);

/// ||A - A^dagger||_F.
double hermiticity_defect(const ComplexMatrix &a);

/// Largest |eigenvalue| of a Hermitian matrix.
double spectral_norm_hermitian(const ComplexMatrix &h);

/// Accumulates C += A * B for row-major n x n blocks, inner index ascending.
///
/// This is the only multiply kernel in the library: the serial product and
/// every Cannon worker run it, so both routes share one rounding behaviour
/// per partial product.
void multiply_accumulate(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> c,
                         std::size_t n);

/// C = A * B with a fixed summation order (ascending inner index).
ComplexMatrix matmul_serial(const ComplexMatrix &a, const ComplexMatrix &b);

/// exp(A) for anti-Hermitian A, via the eigen-decomposition of the Hermitian
/// matrix iA: exp(A) = V diag(exp(-i lambda)) V^dagger.
///
/// Throws InvalidArgument if A is not anti-Hermitian to 1e-12 relative, and
/// EigenError if the decomposition fails.
ComplexMatrix matexp_exact(const ComplexMatrix &a);

}  // namespace tcm
