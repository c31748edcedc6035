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
#include "qcl/constructions.hpp"

#include <cmath>
#include <deque>
#include <utility>

#include "qcl/errors.hpp"

namespace qcl {

ControlTask build_lambda(double horizon) {
  ComplexMatrix h0 = ComplexMatrix::Zero(3, 3);
  h0(0, 0) = 0.0;
  h0(1, 1) = 1.0;
  h0(2, 2) = 2.5;
  ComplexMatrix mu = ComplexMatrix::Zero(3, 3);
  mu(0, 2) = mu(2, 0) = 1.0;
  mu(1, 2) = mu(2, 1) = 1.0;
  ComplexMatrix rho0 = ComplexMatrix::Zero(3, 3);
  rho0(0, 0) = 1.0;
  ComplexMatrix obs = ComplexMatrix::Zero(3, 3);
  obs(0, 0) = 1.0;
  obs(1, 1) = 2.0;
  obs(2, 2) = 0.0;
  return ControlTask(QuantumSystem(std::move(h0), std::move(mu)), std::move(rho0),
                     std::move(obs), horizon, "lambda");
}

ControlTask build_trap_instance(const QuantumSystem& system, double eps0, int k,
                                const RealVector& lambdas_descending,
                                double horizon) {
  const int n = system.n;
  if (static_cast<int>(lambdas_descending.size()) != n) {
    throw ValidationError("trap instance: need one observable weight per level, got " +
                          std::to_string(lambdas_descending.size()) + " for dimension " +
                          std::to_string(n));
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (lambdas_descending(i) - lambdas_descending(i + 1) <= 1e-10) {
      throw ValidationError(
          "trap instance: observable weights must be strictly decreasing "
          "(violated between positions " +
          std::to_string(i + 1) + " and " + std::to_string(i + 2) + ")");
    }
  }
  if (k <= 1 || k >= n) {
    throw ValidationError("trap instance: k = " + std::to_string(k) +
                          " must be interior, 1 < k < " + std::to_string(n));
  }

  const SpectralPair dressed = spectral_decompose(system.H0 - system.mu * eps0);
  for (int i = 0; i + 1 < n; ++i) {
    if (dressed.values(i + 1) - dressed.values(i) <= 1e-10) {
      throw ValidationError(
          "DEGENERATE_DRESSED_SPECTRUM: dressed levels " + std::to_string(i) +
          " and " + std::to_string(i + 1) +
          " coincide; the trap construction needs distinct static levels");
    }
  }

  // Dressed states indexed by ascending energy; the largest observable weight
  // goes to the lowest dressed state, so the weight order and the energy
  // order agree and k means the same position in both.
  const ComplexMatrix mu_dressed =
      dressed.vectors.adjoint() * system.mu * dressed.vectors;
  std::string offenders;
  for (int i = 0; i + 1 < k; ++i) {
    if (std::abs(mu_dressed(i, k - 1)) > 1e-12) {
      if (!offenders.empty()) offenders += ", ";
      offenders += "(" + std::to_string(i + 1) + ", " + std::to_string(k) + ")";
    }
  }
  if (!offenders.empty()) {
    throw ValidationError(
        "trap instance: the dipole couples the initial dressed state to states "
        "with larger observable weight at " +
        offenders + "; a first-order escape direction exists");
  }

  const ComplexVector init = dressed.vectors.col(k - 1);
  ComplexMatrix rho0 = init * init.adjoint();
  rho0 = ((rho0 + rho0.adjoint()) / 2.0).eval();
  ComplexMatrix obs = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    obs += lambdas_descending(i) * dressed.vectors.col(i) *
           dressed.vectors.col(i).adjoint();
  }
  obs = ((obs + obs.adjoint()) / 2.0).eval();
  return ControlTask(system, std::move(rho0), std::move(obs), horizon, "trap");
}

DcpInstance build_dcp_not_kcp(const QuantumSystem& system,
                              const DcpInstanceParams& params, int grid) {
  const int n = system.n;
  const int i = params.i;
  const int j = params.j;
  if (i < 1 || i > n || j < 1 || j > n || i == j) {
    throw ValidationError("dcp instance: dressed indices must be distinct and in [1, " +
                          std::to_string(n) + "], got i = " + std::to_string(i) +
                          ", j = " + std::to_string(j));
  }
  if (params.rank_extra < 0 || params.rank_extra > n - 2) {
    throw ValidationError("dcp instance: rank_extra must be in [0, " +
                          std::to_string(n - 2) + "]");
  }
  const double alpha = params.psi - params.phi;
  if (std::abs(std::remainder(alpha, 3.14159265358979323846)) <= 1e-10) {
    throw ValidationError(
        "dcp instance: psi - phi must not be a multiple of pi, otherwise the "
        "final-time commutator vanishes");
  }

  const SpectralPair dressed = spectral_decompose(system.H0 - system.mu * params.eps0);
  const ComplexMatrix mu_dressed =
      dressed.vectors.adjoint() * system.mu * dressed.vectors;
  const Complex mu_ii = mu_dressed(i - 1, i - 1);
  const Complex mu_jj = mu_dressed(j - 1, j - 1);
  if (std::abs(mu_ii - mu_jj) > 1e-12) {
    throw ValidationError(
        "dcp instance: the two dressed states must have equal diagonal dipole "
        "elements (got " + std::to_string(mu_ii.real()) + " and " +
        std::to_string(mu_jj.real()) + "); the static field is not critical");
  }

  const ComplexVector d_i = dressed.vectors.col(i - 1);
  const ComplexVector d_j = dressed.vectors.col(j - 1);
  const Complex phase_psi = std::exp(Complex(0.0, params.psi));
  const Complex phase_phi = std::exp(Complex(0.0, params.phi));
  const ComplexVector psi_vec = (d_i + phase_psi * d_j) / std::sqrt(2.0);
  const ComplexVector phi_vec = (d_i + phase_phi * d_j) / std::sqrt(2.0);

  // Extra observable weight on dressed states outside {i, j}: distinct
  // positive weights below 1 so the predictions on the pair are untouched.
  ComplexMatrix q = ComplexMatrix::Zero(n, n);
  int placed = 0;
  for (int l = 0; l < n && placed < params.rank_extra; ++l) {
    if (l == i - 1 || l == j - 1) continue;
    q += (1.0 / (2.0 + placed)) * dressed.vectors.col(l) *
         dressed.vectors.col(l).adjoint();
    ++placed;
  }
  const double leak = (q * psi_vec).norm();
  if (leak > 1e-12) {
    throw NumericalError("dcp instance: complement block leaks onto the initial "
                         "state (norm " + std::to_string(leak) + ")");
  }

  // Conjugate the observable back to t = 0 through the free dressed evolution
  // so the constant field is exactly critical at the horizon.
  const ComplexMatrix evolve = expm_from_spectrum(dressed, params.horizon);
  ComplexMatrix obs_final = phi_vec * phi_vec.adjoint() + q;
  ComplexMatrix obs = evolve * obs_final * evolve.adjoint();
  obs = ((obs + obs.adjoint()) / 2.0).eval();
  ComplexMatrix rho0 = psi_vec * psi_vec.adjoint();
  rho0 = ((rho0 + rho0.adjoint()) / 2.0).eval();

  DcpInstance out{
      ControlTask(system, std::move(rho0), std::move(obs), params.horizon,
                  "dcp_not_kcp"),
      ControlField::constant(params.horizon, grid, params.eps0),
      alpha,
      (1.0 + std::cos(alpha)) / 2.0,
      // <phi|[rho0, O_T]|psi> up to sign and the eigenvector phase convention;
      // its modulus |s|(1 - |s|^2), s = (1 + e^{i alpha})/2, is invariant.
      (1.0 + std::exp(Complex(0.0, alpha))) / 2.0 * (1.0 - std::cos(alpha)) / 2.0,
  };
  return out;
}

QuantumSystem standard_chain_system(int n, double eps0) {
  if (n < kMinDimension || n > kMaxDimension) {
    throw ValidationError("chain system: dimension " + std::to_string(n) +
                          " outside supported range");
  }
  ComplexMatrix mu = ComplexMatrix::Zero(n, n);
  for (int a = 0; a + 1 < n; ++a) {
    mu(a, a + 1) = 1.0;
    mu(a + 1, a) = 1.0;
  }
  ComplexMatrix h0 = ComplexMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) h0(a, a) = static_cast<double>(a);
  // Adding eps0 * mu here makes H0 - mu * eps0 cancel exactly in floating
  // point, so the dressed frame of this system is the computational basis.
  h0 += eps0 * mu;
  return QuantumSystem(std::move(h0), std::move(mu));
}

namespace {

// Frobenius real inner product on anti-Hermitian matrices.
double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

// Orthonormalizes `candidate` against `basis` (two passes); appends and
// returns true when the remainder is numerically independent.
bool try_extend(std::vector<ComplexMatrix>& basis, ComplexMatrix candidate) {
  const double original = candidate.norm();
  if (original <= 1e-14) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (const ComplexMatrix& e : basis) {
      candidate -= inner(e, candidate) * e;
    }
  }
  if (candidate.norm() <= 1e-10 * original) return false;
  basis.push_back(candidate / candidate.norm());
  return true;
}

}  // namespace

LieRankReport lie_algebra_rank(const QuantumSystem& system) {
  const int n = system.n;
  const int ambient = n * n;
  const int bracket_cap = ambient * ambient;
  const Complex im(0.0, 1.0);

  std::vector<ComplexMatrix> basis;
  std::deque<std::pair<int, int>> pending;
  auto push_pairs_for = [&](int t) {
    for (int s = 0; s < t; ++s) pending.emplace_back(s, t);
  };
  if (try_extend(basis, im * system.H0)) push_pairs_for(0);
  if (try_extend(basis, im * system.mu)) {
    push_pairs_for(static_cast<int>(basis.size()) - 1);
  }

  int evaluated = 0;
  while (!pending.empty() && static_cast<int>(basis.size()) < ambient &&
         evaluated < bracket_cap) {
    const auto [a, b] = pending.front();
    pending.pop_front();
    ++evaluated;
    if (try_extend(basis, commutator(basis[a], basis[b]))) {
      push_pairs_for(static_cast<int>(basis.size()) - 1);
    }
  }

  LieRankReport report;
  report.dimension = static_cast<int>(basis.size());
  report.ambient_dim = ambient;
  report.controllable =
      report.dimension == ambient || report.dimension == ambient - 1;
  report.brackets_evaluated = evaluated;
  return report;
}

}  // namespace qcl
