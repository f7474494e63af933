// Exact solution of one axis for constant sigma and constant forcing. Test
// oracle for the RK4 path; shares only assemble_state_matrix with it.
#pragma once

#include "vsl/model.hpp"

namespace vsl {

struct LtiSolution {
  AxisVector x;
  /// 2-norm condition number of the eigenvector matrix (inf when the fallback ran).
  double eigvec_condition = 0.0;
  bool used_fallback = false;
};

/// x(t) = x_ss + exp(A t) (x0 - x_ss), x_ss = -A^{-1} b. Uses the eigendecomposition
/// when the eigenvector basis is well conditioned, scaling-and-squaring otherwise.
LtiSolution closed_form_solution(const AxisVector& x0, double sigma, double tau_d, double tau_w,
                                 double t, const ModelParams& params);

/// Steady state of one axis under constant torques: solves the 2x2 static balance.
AxisVector static_equilibrium(double sigma, double tau_d, double tau_w, const ModelParams& params);

}  // namespace vsl
