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
#include "qcl/landscape.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "qcl/errors.hpp"
#include "qcl/parallel.hpp"

namespace qcl {
namespace {

// sin(x)/x, series near zero to avoid cancellation.
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace

GradientVector gradient_kernel(const ControlTask& task, const PropagationResult& prop) {
  // Gradient kernel g(t) = i Tr{[rho0, O_T] V(t)}.  The commutator is
  // anti-Hermitian and V Hermitian, so each trace is purely imaginary and
  // i * trace is real; any real part of the trace is round-off and is gated.
  const ComplexMatrix z = commutator(task.rho0, prop.observable_final);
  const double z_norm = z.norm();
  GradientVector g;
  g.dt = prop.dt;
  g.samples.resize(prop.M);
  for (int m = 0; m < prop.M; ++m) {
    const Complex tr = trace_product(z, prop.dipoles[m]);
    const double gate = 1e-11 * std::max(1.0, z_norm * prop.dipoles[m].norm());
    if (std::abs(tr.real()) > gate) {
      throw NumericalError("gradient kernel: sample " + std::to_string(m) +
                           " has spurious real trace component " +
                           std::to_string(tr.real()));
    }
    g.samples(m) = -tr.imag();  // Re(i * tr) = -Im(tr)
  }
  return g;
}

GradientVector gradient_kernel(const ControlTask& task, const ControlField& field) {
  return gradient_kernel(task, propagate(task, field));
}

RealVector gradient_discrete(const ControlTask& task, const ControlField& field) {
  const QuantumSystem& sys = task.system;
  const int n = sys.n;
  const int m_count = field.M;
  const double dt = field.dt();

  std::vector<SpectralPair> spectra(m_count);
  std::vector<ComplexMatrix> steps(m_count);
  std::vector<ComplexMatrix> boundary(m_count + 1);
  boundary[0] = ComplexMatrix::Identity(n, n);
  for (int m = 0; m < m_count; ++m) {
    spectra[m] = spectral_decompose(sys.H0 - sys.mu * field.values(m));
    steps[m] = expm_from_spectrum(spectra[m], dt);
    boundary[m + 1] = steps[m] * boundary[m];
  }
  const ComplexMatrix& u_final = boundary[m_count];
  const ComplexMatrix obs_final =
      ((u_final.adjoint() * task.O * u_final +
        (u_final.adjoint() * task.O * u_final).adjoint()) / 2.0).eval();

  RealVector grad(m_count);
  parallel_for(0, m_count, [&](int m) {
    const SpectralPair& spec = spectra[m];
    const ComplexMatrix mu_eig = spec.vectors.adjoint() * sys.mu * spec.vectors;
    // Directional derivative of the interval exponential
    // exp(-i dt (H0 - mu e)) in e: in the eigenbasis of the generator, entry
    // (a, b) of the integrand integrates to exp(-i (g_a + g_b)/2) sinc((g_a -
    // g_b)/2) with g = eigenvalue * dt.
    ComplexMatrix kernel(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double ga = spec.values(a) * dt;
        const double gb = spec.values(b) * dt;
        const double mean = (ga + gb) / 2.0;
        kernel(a, b) = std::exp(Complex(0.0, -mean)) * sinc((ga - gb) / 2.0) *
                       mu_eig(a, b);
      }
    }
    const ComplexMatrix d_step =
        Complex(0.0, dt) * (spec.vectors * kernel * spec.vectors.adjoint());
    const ComplexMatrix rho_left = boundary[m] * task.rho0 * boundary[m].adjoint();
    const ComplexMatrix obs_right =
        boundary[m + 1] * obs_final * boundary[m + 1].adjoint();
    const Complex tr =
        trace_product(d_step * rho_left, steps[m].adjoint() * obs_right);
    grad(m) = 2.0 * tr.real();
  });
  return grad;
}

HessianMatrix hessian_kernel(const ControlTask& task, const PropagationResult& prop) {
  const ComplexMatrix& obs = prop.observable_final;
  const ComplexMatrix rho_obs = task.rho0 * obs;
  const int m_count = prop.M;

  // H(t1, t2) for t1 >= t2 reduces to
  //   2 Re Tr[(O_T V_1)(rho0 V_2)] - 2 Re Tr[(rho0 O_T V_1) V_2];
  // the two index orders are complex conjugates, so the real part is already
  // the symmetric quadratic-form kernel.
  std::vector<ComplexMatrix> obs_v(m_count), rho_v(m_count), rho_obs_v(m_count);
  parallel_for(0, m_count, [&](int m) {
    obs_v[m] = obs * prop.dipoles[m];
    rho_v[m] = task.rho0 * prop.dipoles[m];
    rho_obs_v[m] = rho_obs * prop.dipoles[m];
  });

  HessianMatrix h;
  h.dt = prop.dt;
  h.entries.resize(m_count, m_count);
  parallel_for(0, m_count, [&](int m) {
    for (int k = 0; k <= m; ++k) {
      const double val = 2.0 * trace_product(obs_v[m], rho_v[k]).real() -
                         2.0 * trace_product(rho_obs_v[m], prop.dipoles[k]).real();
      h.entries(m, k) = val;
      h.entries(k, m) = val;
    }
  });
  return h;
}

HessianMatrix hessian_kernel(const ControlTask& task, const ControlField& field) {
  return hessian_kernel(task, propagate(task, field));
}

double quadratic_form(const HessianMatrix& hess, const RealVector& f) {
  if (f.size() != hess.entries.rows()) {
    throw ValidationError("quadratic form: direction length " +
                          std::to_string(f.size()) + " does not match grid " +
                          std::to_string(hess.entries.rows()));
  }
  return hess.dt * hess.dt * f.dot(hess.entries * f);
}

CommonEigenbasis common_eigenbasis(const ComplexMatrix& rho0, const ComplexMatrix& obs,
                                   double cluster_tol) {
  const SpectralPair rho_spec = spectral_decompose(rho0);
  const int n = static_cast<int>(rho_spec.values.size());
  ComplexMatrix q = rho_spec.vectors;

  // Rotate inside each (near-)degenerate eigenspace of rho0 so the observable
  // becomes diagonal there too; across blocks the observable is already
  // block-diagonal up to the commutator residual.
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n &&
           rho_spec.values(stop) - rho_spec.values(stop - 1) <= cluster_tol) {
      ++stop;
    }
    const int width = stop - start;
    if (width > 1) {
      const ComplexMatrix block = q.middleCols(start, width);
      const ComplexMatrix obs_block = block.adjoint() * obs * block;
      const SpectralPair obs_spec =
          spectral_decompose((obs_block + obs_block.adjoint()) / 2.0);
      q.middleCols(start, width) = block * obs_spec.vectors;
    }
    start = stop;
  }

  CommonEigenbasis basis;
  basis.vectors = q;
  basis.rho_weights.resize(n);
  basis.obs_values.resize(n);
  for (int k = 0; k < n; ++k) {
    basis.rho_weights(k) = (q.col(k).adjoint() * rho0 * q.col(k))(0).real();
    basis.obs_values(k) = (q.col(k).adjoint() * obs * q.col(k))(0).real();
  }
  return basis;
}

SpectralFormEvaluator::SpectralFormEvaluator(const ControlTask& task,
                                             const PropagationResult& prop,
                                             double kcp_tol) {
  kcp_residual_ = commutator(task.rho0, prop.observable_final).norm();
  if (kcp_residual_ > kcp_tol) {
    throw ValidationError(
        "spectral form: not a kinematic critical point (commutator residual " +
        std::to_string(kcp_residual_) + " exceeds " + std::to_string(kcp_tol) + ")");
  }
  basis_ = common_eigenbasis(task.rho0, prop.observable_final);
  dt_ = prop.dt;
  dipoles_in_basis_.resize(prop.M);
  parallel_for(0, prop.M, [&](int m) {
    dipoles_in_basis_[m] = basis_.vectors.adjoint() * prop.dipoles[m] * basis_.vectors;
  });
}

SpectralForm SpectralFormEvaluator::evaluate(const RealVector& f) const {
  const int m_count = static_cast<int>(dipoles_in_basis_.size());
  if (f.size() != m_count) {
    throw ValidationError("spectral form: direction length " +
                          std::to_string(f.size()) + " does not match grid " +
                          std::to_string(m_count));
  }
  const int n = static_cast<int>(basis_.rho_weights.size());
  ComplexMatrix v_f = ComplexMatrix::Zero(n, n);
  for (int m = 0; m < m_count; ++m) v_f += f(m) * dt_ * dipoles_in_basis_[m];

  // h(f) = 2 sum_{k,i} omega_k (lambda_i - lambda_k) |<k|V_f|i>|^2, split by
  // the sign of the level difference; pairs with equal lambda contribute
  // nothing either way.
  SpectralForm out{0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const double omega = basis_.rho_weights(k);
    for (int i = 0; i < n; ++i) {
      const double gap = basis_.obs_values(i) - basis_.obs_values(k);
      if (gap == 0.0) continue;
      const double weight = 2.0 * omega * std::norm(v_f(k, i));
      if (gap > 0.0) {
        out.h_plus += weight * gap;
      } else {
        out.h_minus += weight * (-gap);
      }
    }
  }
  out.h = out.h_plus - out.h_minus;
  return out;
}

SpectralForm spectral_form(const ControlTask& task, const ControlField& field,
                           const RealVector& f, double kcp_tol) {
  SpectralFormEvaluator eval(task, propagate(task, field), kcp_tol);
  return eval.evaluate(f);
}

RealVector fd_gradient(const ControlTask& task, const ControlField& field,
                       double step) {
  RealVector grad(field.M);
  parallel_for(0, field.M, [&](int m) {
    ControlField plus = field;
    ControlField minus = field;
    plus.values(m) += step;
    minus.values(m) -= step;
    grad(m) = (objective(task, plus) - objective(task, minus)) / (2.0 * step);
  });
  return grad;
}

RealMatrix fd_hessian(const ControlTask& task, const ControlField& field,
                      double step) {
  const int m_count = field.M;
  const double j0 = objective(task, field);
  RealMatrix hess(m_count, m_count);
  parallel_for(0, m_count, [&](int m) {
    for (int k = 0; k <= m; ++k) {
      double val;
      if (k == m) {
        ControlField plus = field, minus = field;
        plus.values(m) += step;
        minus.values(m) -= step;
        val = (objective(task, plus) - 2.0 * j0 + objective(task, minus)) /
              (step * step);
      } else {
        ControlField pp = field, pm = field, mp = field, mm = field;
        pp.values(m) += step; pp.values(k) += step;
        pm.values(m) += step; pm.values(k) -= step;
        mp.values(m) -= step; mp.values(k) += step;
        mm.values(m) -= step; mm.values(k) -= step;
        val = (objective(task, pp) - objective(task, pm) - objective(task, mp) +
               objective(task, mm)) /
              (4.0 * step * step);
      }
      hess(m, k) = val;
      hess(k, m) = val;
    }
  });
  return hess;
}

double fd_directional_second(const ControlTask& task, const ControlField& field,
                             const RealVector& f, double step) {
  if (f.size() != field.M) {
    throw ValidationError("directional second difference: direction length " +
                          std::to_string(f.size()) + " does not match grid " +
                          std::to_string(field.M));
  }
  ControlField plus = field, minus = field;
  plus.values += step * f;
  minus.values -= step * f;
  const double j0 = objective(task, field);
  return (objective(task, plus) - 2.0 * j0 + objective(task, minus)) / (step * step);
}

JacobianReport jacobian_span(const ControlTask& task, const ControlField& field) {
  const PropagationResult prop = propagate(task, field);
  const int n = task.n();
  const int dim = n * n;

  // Real coordinates on Hermitian matrices: diagonal entries, then
  // sqrt(2) Re / sqrt(2) Im of each strict upper entry (an isometry for the
  // Frobenius inner product).
  RealMatrix rows(prop.M, dim);
  RealMatrix sup = RealMatrix::Zero(n, n);
  for (int m = 0; m < prop.M; ++m) {
    const ComplexMatrix& v = prop.dipoles[m];
    int col = 0;
    for (int a = 0; a < n; ++a) rows(m, col++) = v(a, a).real();
    const double root2 = std::sqrt(2.0);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        rows(m, col++) = root2 * v(a, b).real();
        rows(m, col++) = root2 * v(a, b).imag();
      }
    }
    sup = sup.cwiseMax(v.cwiseAbs());
  }

  Eigen::JacobiSVD<RealMatrix> svd(rows);
  const RealVector& sigma = svd.singularValues();
  const double cutoff = sigma.size() ? 1e-10 * sigma(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  if (sigma.size() && sigma(0) == 0.0) rank = 0;

  JacobianReport report;
  report.rank = rank;
  report.full_dim = dim;
  report.singular_values = sigma;
  report.entry_sup = sup;
  return report;
}

int jacobian_rank(const ControlTask& task, const ControlField& field) {
  return jacobian_span(task, field).rank;
}

}  // namespace qcl
