#include "vsl/lti_oracle.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace vsl {
namespace {

constexpr double kConditionLimit = 1e8;

}  // namespace

AxisVector static_equilibrium(double sigma, double tau_d, double tau_w, const ModelParams& p) {
  const LinkStiffness link = blend_stiffness(sigma, p);
  Eigen::Matrix2d K;
  K << p.K_c + link.k_s, -link.k_s, -link.k_s, p.m_p * p.g * p.l + link.k_s;
  const Eigen::Vector2d q = K.partialPivLu().solve(Eigen::Vector2d(tau_w, tau_d));
  return {q[0], 0.0, q[1], 0.0};
}

LtiSolution closed_form_solution(const AxisVector& x0, double sigma, double tau_d, double tau_w,
                                 double t, const ModelParams& params) {
  const AxisMatrix A = assemble_state_matrix(sigma, params);
  const AxisVector x_ss = static_equilibrium(sigma, tau_d, tau_w, params);
  const AxisVector dx0 = x0 - x_ss;

  LtiSolution out;
  Eigen::EigenSolver<AxisMatrix> eig(A);
  if (eig.info() == Eigen::Success) {
    const Eigen::Matrix4cd V = eig.eigenvectors();
    const Eigen::JacobiSVD<Eigen::Matrix4cd> svd(V);
    const auto& sv = svd.singularValues();
    out.eigvec_condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                   : std::numeric_limits<double>::infinity();
    if (out.eigvec_condition < kConditionLimit) {
      const Eigen::Vector4cd c = V.partialPivLu().solve(dx0.cast<std::complex<double>>());
      Eigen::Vector4cd modal;
      for (int i = 0; i < 4; ++i) modal[i] = std::exp(eig.eigenvalues()[i] * t) * c[i];
      out.x = x_ss + (V * modal).real();
      return out;
    }
  } else {
    out.eigvec_condition = std::numeric_limits<double>::infinity();
  }

  // Defective or nearly defective basis.
  const AxisMatrix At = A * t;
  const AxisMatrix E = At.exp();
  out.x = x_ss + E * dx0;
  out.used_fallback = true;
  return out;
}

}  // namespace vsl
