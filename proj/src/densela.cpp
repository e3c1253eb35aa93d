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

#include "tcm/densela.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "tcm/error.hpp"

namespace tcm {

namespace {

void require_same_dim(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()) + ")");
    }
}

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigenMatrix to_eigen(const ComplexMatrix &m) {
    const auto n = static_cast<Eigen::Index>(m.dim());
    EigenMatrix out(n, n);
    std::copy(m.data().begin(), m.data().end(), out.data());
    return out;
}

ComplexMatrix from_eigen(const EigenMatrix &m) {
    std::vector<Complex> entries(m.data(), m.data() + m.size());
    return ComplexMatrix(static_cast<std::size_t>(m.rows()), std::move(entries));
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) {
        throw DimensionError("ComplexMatrix: dimension must be at least 1");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) {
        throw DimensionError("ComplexMatrix: dimension must be at least 1");
    }
    if (data_.size() != dim * dim) {
        throw DimensionError("ComplexMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                             std::to_string(data_.size()));
    }
    if (!all_finite()) {
        throw InvalidArgument("ComplexMatrix: non-finite entry");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_dim(*this, other, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_dim(*this, other, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex s) {
    // Written out so that scaling commutes exactly with conjugation.
    const double sr = s.real();
    const double si = s.imag();
    for (auto &z : data_) {
        const double zr = z.real();
        const double zi = z.imag();
        z = Complex(sr * zr - si * zi, sr * zi + si * zr);
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(double s) {
    for (auto &z : data_) {
        z = Complex(s * z.real(), s * z.imag());
    }
    return *this;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }

ComplexMatrix adjoint(const ComplexMatrix &a) {
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(j, i) = std::conj(a(i, j));
        }
    }
    return out;
}

Complex trace(const ComplexMatrix &a) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        t += a(i, i);
    }
    return t;
}

double frobenius_norm(const ComplexMatrix &a) {
    double s = 0.0;
    for (const auto &z : a.data()) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a, b, "frobenius_distance");
    double s = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) {
        s += std::norm(da[k] - db[k]);
    }
    return std::sqrt(s);
}

double hermiticity_defect(const ComplexMatrix &a) {
    double s = 0.0;
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s += std::norm(a(i, j) - std::conj(a(j, i)));
        }
    }
    return std::sqrt(s);
}

double spectral_norm_hermitian(const ComplexMatrix &h) {
    Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(to_eigen(h), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigenError("spectral_norm_hermitian: eigen-decomposition did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void multiply_accumulate(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> c,
                         std::size_t n) {
    // One complex number per 16-byte vector. The per-entry arithmetic is
    // re += ar*br + ai*(-bi), im += ar*bi + ai*br, which rounds exactly like
    // the textbook scalar formula.
    using v2d = double __attribute__((vector_size(16)));
    // Rows of B are consumed in panels small enough to stay in cache; each
    // panel is finished for every row of C before the next starts, so the
    // inner index still reaches every entry in ascending order.
    constexpr std::size_t kPanel = 32;
    const Complex *__restrict pa = a.data();
    const Complex *__restrict pb = b.data();
    auto *__restrict pc = reinterpret_cast<v2d *>(c.data());
    for (std::size_t l0 = 0; l0 < n; l0 += kPanel) {
        const std::size_t l1 = std::min(n, l0 + kPanel);
        for (std::size_t i = 0; i < n; ++i) {
            v2d *__restrict crow = pc + i * n;
            std::size_t l = l0;
            // Four rows of B per pass: one load/store of C per four updates,
            // the updates themselves still applied in order.
            for (; l + 4 <= l1; l += 4) {
                const Complex *arow = pa + i * n + l;
                const v2d ar0 = {arow[0].real(), arow[0].real()}, ai0 = {arow[0].imag(), arow[0].imag()};
                const v2d ar1 = {arow[1].real(), arow[1].real()}, ai1 = {arow[1].imag(), arow[1].imag()};
                const v2d ar2 = {arow[2].real(), arow[2].real()}, ai2 = {arow[2].imag(), arow[2].imag()};
                const v2d ar3 = {arow[3].real(), arow[3].real()}, ai3 = {arow[3].imag(), arow[3].imag()};
                const auto *__restrict b0 = reinterpret_cast<const v2d *>(pb + l * n);
                const auto *__restrict b1 = b0 + n;
                const auto *__restrict b2 = b1 + n;
                const auto *__restrict b3 = b2 + n;
                for (std::size_t j = 0; j < n; ++j) {
                    v2d cv = crow[j];
                    cv += ar0 * b0[j] + ai0 * v2d{-b0[j][1], b0[j][0]};
                    cv += ar1 * b1[j] + ai1 * v2d{-b1[j][1], b1[j][0]};
                    cv += ar2 * b2[j] + ai2 * v2d{-b2[j][1], b2[j][0]};
                    cv += ar3 * b3[j] + ai3 * v2d{-b3[j][1], b3[j][0]};
                    crow[j] = cv;
                }
            }
            for (; l < l1; ++l) {
                const v2d ar = {pa[i * n + l].real(), pa[i * n + l].real()};
                const v2d ai = {pa[i * n + l].imag(), pa[i * n + l].imag()};
                const auto *__restrict brow = reinterpret_cast<const v2d *>(pb + l * n);
                for (std::size_t j = 0; j < n; ++j) {
                    crow[j] += ar * brow[j] + ai * v2d{-brow[j][1], brow[j][0]};
                }
            }
        }
    }
}

ComplexMatrix matmul_serial(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a, b, "matmul_serial");
    ComplexMatrix c(a.dim());
    multiply_accumulate(a.data(), b.data(), c.data(), a.dim());
    return c;
}

ComplexMatrix matexp_exact(const ComplexMatrix &a) {
    const double scale = std::max(1.0, frobenius_norm(a));
    if (frobenius_distance(a, -1.0 * adjoint(a)) > 1e-12 * scale) {
        throw InvalidArgument("matexp_exact: argument is not anti-Hermitian");
    }
    // G = iA is Hermitian and exp(A) = exp(-iG).
    EigenMatrix g = to_eigen(a) * Complex(0.0, 1.0);
    g = (0.5 * (g + g.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(g);
    if (solver.info() != Eigen::Success) {
        throw EigenError("matexp_exact: eigen-decomposition did not converge");
    }
    const auto &v = solver.eigenvectors();
    const auto &lambda = solver.eigenvalues();
    EigenMatrix phased = v;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        phased.col(k) *= std::exp(Complex(0.0, -lambda(k)));
    }
    EigenMatrix result = phased * v.adjoint();
    return from_eigen(result);
}

}  // namespace tcm
