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
#include "qcl/matrix.hpp"

#include <Eigen/Eigenvalues>

#include "qcl/errors.hpp"
#include "qcl/rng.hpp"

namespace qcl {

double hermiticity_residual(const ComplexMatrix& a) {
  return (a - a.adjoint()).norm() / std::max(1.0, a.norm());
}

double unitarity_residual(const ComplexMatrix& a) {
  return (a.adjoint() * a - ComplexMatrix::Identity(a.rows(), a.cols())).norm();
}

void require_dimension(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + ": matrix must be square, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (a.rows() < kMinDimension || a.rows() > kMaxDimension) {
    throw ValidationError(std::string(what) + ": dimension " + std::to_string(a.rows()) +
                          " outside supported range [" + std::to_string(kMinDimension) +
                          ", " + std::to_string(kMaxDimension) + "]");
  }
}

void require_hermitian(const ComplexMatrix& a, const char* what, double tol) {
  require_dimension(a, what);
  if (hermiticity_residual(a) <= tol) return;
  Eigen::Index wr = 0, wc = 0;
  double worst = -1.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const double d = std::abs(a(r, c) - std::conj(a(c, r)));
      if (d > worst) { worst = d; wr = r; wc = c; }
    }
  }
  throw ValidationError(std::string(what) + ": matrix is not Hermitian, entry (" +
                        std::to_string(wr) + ", " + std::to_string(wc) +
                        ") differs from its mirror by " + std::to_string(worst));
}

SpectralPair spectral_decompose(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed to converge");
  }
  return SpectralPair{solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm_from_spectrum(const SpectralPair& spec, double t) {
  const Eigen::Index n = spec.values.size();
  ComplexVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phases(i) = std::exp(Complex(0.0, -spec.values(i) * t));
  }
  return spec.vectors * phases.asDiagonal() * spec.vectors.adjoint();
}

ComplexMatrix expm_generator(const ComplexMatrix& h, double t) {
  return expm_from_spectrum(spectral_decompose(h), t);
}

ComplexMatrix random_hermitian(int n, uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix a(n, n);
  for (int r = 0; r < n; ++r) {
    a(r, r) = Complex(rng.normal(), 0.0);
    for (int c = r + 1; c < n; ++c) {
      // Off-diagonals scaled so the ensemble matches GUE conventions.
      const double re = rng.normal() / std::sqrt(2.0);
      const double im = rng.normal() / std::sqrt(2.0);
      a(r, c) = Complex(re, im);
      a(c, r) = Complex(re, -im);
    }
  }
  return a;
}

}  // namespace qcl
