/* Copyright 2026 The Qclprobe Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace qcl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Supported Hilbert space dimensions.
inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 64;

// Eigendecomposition of a Hermitian matrix: A = Q diag(values) Q^dagger.
// Eigenvalues ascending, eigenvector columns orthonormal.  Within a
// degenerate eigenspace the basis choice is arbitrary; callers must not
// depend on it.
struct SpectralPair {
  RealVector values;
  ComplexMatrix vectors;
};

// Frobenius norm of A - A^dagger, relative to max(1, ||A||_F).
double hermiticity_residual(const ComplexMatrix& a);

// Frobenius norm of U^dagger U - I.
double unitarity_residual(const ComplexMatrix& u);

// Tr[A B] without forming the product; O(n^2).
inline Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array() * b.transpose().array()).sum();
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

// Throws ValidationError unless A is square with dimension in
// [kMinDimension, kMaxDimension].
void require_dimension(const ComplexMatrix& a, const char* what);

// Throws ValidationError naming the worst offending entry pair unless
// ||A - A^dagger||_F <= tol * max(1, ||A||_F).
void require_hermitian(const ComplexMatrix& a, const char* what, double tol = 1e-12);

SpectralPair spectral_decompose(const ComplexMatrix& a);

// exp(-i H t) for Hermitian H, via the spectral decomposition.  Exact for
// the spectral data, so unitarity holds to round-off at any t.
ComplexMatrix expm_generator(const ComplexMatrix& h, double t);
ComplexMatrix expm_from_spectrum(const SpectralPair& s, double t);

// Draw G with independent standard-normal real and imaginary parts per
// entry and return (G + G^dagger) / 2.  Deterministic for a fixed seed.
ComplexMatrix random_hermitian(int n, std::uint64_t seed);

}  // namespace qcl
