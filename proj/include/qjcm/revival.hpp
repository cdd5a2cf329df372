#pragma once

#include "qjcm/field_states.hpp"
#include "qjcm/spectrum.hpp"

namespace qjcm {

/// Collapse/revival estimates and dispersion diagnostics for one scenario.
///
/// All frequencies use the continuous-n Rabi frequency
///   Omega(x) = sqrt(Delta_x^2 + 4 g^2 {x+1}...{x+m}),
///   Delta_x  = Delta - omega({x+m} - {x} - m),
/// evaluated around the mean photon number of the initial field.
struct AnalysisReport {
  double n_bar;
  double delta_n;
  double t_r_diff;
  double t_r_deriv;
  double t_c;  // from t_r_deriv
  double delta_c_over_omega;  // NaN when no critical detuning exists
  double omega2;
  double regularity_residual;
};

struct RevivalTimes {
  double t_r_diff;   // 2 pi / (Omega(nbar+1) - Omega(nbar))
  double t_r_deriv;  // 2 pi / Omega'(nbar)
};

inline constexpr double kRevivalDerivativeStep = 1e-5;

RevivalTimes revival_time(const ModelParams& params, double n_bar);
RevivalTimes revival_time(const ModelParams& params, const PhotonDistribution& dist);

/// t_c = t_r / (4 pi delta_n)
double collapse_time(double t_r, double delta_n);

/// Detuning at which dOmega/dx vanishes at x = n_bar. Omega^2 is quadratic in
/// Delta, so the stationarity condition is linear in Delta at fixed x. The
/// result is certified with a finite-difference derivative of Omega(x).
/// Throws PreconditionError when {x+m} - {x} has zero slope (f == 1) and
/// NoStationaryPoint when the solution leaves [-50 omega, 50 omega] or fails
/// the certificate.
double critical_detuning(const ModelParams& params, double n_bar);

/// |dOmega/dx| / Omega at n_bar under the given parameters (central difference).
double stationarity_residual(const ModelParams& params, double n_bar);

struct ExpansionDiagnostics {
  double omega2;               // Omega''(n_bar) / 2
  double regularity_residual;  // max |Omega(x) - Omega(nbar) - (x-nbar)^2 omega2| / Omega(nbar)
};

ExpansionDiagnostics expansion_diagnostics(const ModelParams& params, double n_bar, double delta_n);

/// Full report for a scenario; the diagnostics use the detuning in `params`.
AnalysisReport analyze(const ModelParams& params, FieldAmplitude amplitude,
                       double tail_tol = kDefaultTailTol);

}  // namespace qjcm
