#include "qjcm/revival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qjcm/errors.hpp"

namespace qjcm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rabi_slope(const ModelParams& params, double x) {
  const double h = kRevivalDerivativeStep;
  return (rabi_frequency_real(params, x + h) - rabi_frequency_real(params, x - h)) / (2.0 * h);
}

}  // namespace

RevivalTimes revival_time(const ModelParams& params, double n_bar) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) throw DomainError("mean photon number must be finite and >= 0");
  const double step = rabi_frequency_real(params, n_bar + 1.0) - rabi_frequency_real(params, n_bar);
  if (std::abs(step) < 1e-12) {
    std::ostringstream msg;
    msg << "Rabi frequency is flat at nbar = " << n_bar << " (difference " << step << ")";
    throw DegenerateFrequency(msg.str());
  }
  return {kTwoPi / step, kTwoPi / rabi_slope(params, n_bar)};
}

RevivalTimes revival_time(const ModelParams& params, const PhotonDistribution& dist) {
  if (!(params.spec() == dist.spec())) throw SpecMismatch("distribution and model use different deformations");
  return revival_time(params, mean_photon_number(dist));
}

double collapse_time(double t_r, double delta_n) {
  if (!(t_r > 0.0)) throw DomainError("revival time must be > 0");
  if (!(delta_n > 0.0)) throw DomainError("distribution width must be > 0");
  return t_r / (4.0 * std::numbers::pi * delta_n);
}

double stationarity_residual(const ModelParams& params, double n_bar) {
  return std::abs(rabi_slope(params, n_bar)) / rabi_frequency_real(params, n_bar);
}

double critical_detuning(const ModelParams& params, double n_bar) {
  const auto& spec = params.spec();
  const int m = params.m();
  const double omega = params.omega();
  const double g = params.g();

  // Omega^2 = D^2 + 4 g^2 C with D = Delta - omega (A - m), A = {x+m} - {x},
  // C = {x+1}...{x+m}. d(Omega^2)/dx = 0  <=>  D = 2 g^2 C' / (omega A').
  const double a = deformed_number_real(spec, n_bar + m) - deformed_number_real(spec, n_bar);
  const double a_slope =
      deformed_number_derivative(spec, n_bar + m) - deformed_number_derivative(spec, n_bar);
  if (spec.is_standard() || std::abs(a_slope) <= 1e-14 * std::max(1.0, std::abs(a))) {
    throw PreconditionError("critical detuning needs a deformation with f != 1 ({x+m} - {x} is flat)");
  }
  const double c_slope = coupled_product_derivative(spec, n_bar, m);
  const double delta_c = omega * (a - m) + 2.0 * g * g * c_slope / (omega * a_slope);

  if (!std::isfinite(delta_c) || std::abs(delta_c) > 50.0 * omega) {
    std::ostringstream msg;
    msg << "stationary detuning " << delta_c << " lies outside [-50 omega, 50 omega]";
    throw NoStationaryPoint(msg.str());
  }
  const double residual = stationarity_residual(params.with_detuning(delta_c), n_bar);
  if (!(residual < 1e-8)) {
    std::ostringstream msg;
    msg << "stationarity certificate failed at Delta = " << delta_c << ": |Omega'|/Omega = " << residual;
    throw NoStationaryPoint(msg.str());
  }
  return delta_c;
}

ExpansionDiagnostics expansion_diagnostics(const ModelParams& params, double n_bar, double delta_n) {
  const double h = 1e-3 * std::max(1.0, n_bar);
  const double centre = rabi_frequency_real(params, n_bar);
  const double omega2 =
      0.5 * (rabi_frequency_real(params, n_bar + h) - 2.0 * centre + rabi_frequency_real(params, n_bar - h)) /
      (h * h);

  const double lo = std::max(0.0, n_bar - 2.0 * delta_n);
  const double hi = n_bar + 2.0 * delta_n;
  constexpr int kPoints = 401;
  double worst = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double x = lo + (hi - lo) * i / (kPoints - 1);
    const double dx = x - n_bar;
    worst = std::max(worst, std::abs(rabi_frequency_real(params, x) - centre - dx * dx * omega2));
  }
  return {omega2, worst / centre};
}

AnalysisReport analyze(const ModelParams& params, FieldAmplitude amplitude, double tail_tol) {
  const auto dist = build_coherent_state(params.spec(), amplitude, tail_tol);
  AnalysisReport r{};
  r.n_bar = mean_photon_number(dist);
  r.delta_n = distribution_width(params.spec(), amplitude, tail_tol);
  const auto times = revival_time(params, r.n_bar);
  r.t_r_diff = times.t_r_diff;
  r.t_r_deriv = times.t_r_deriv;
  r.t_c = collapse_time(r.t_r_deriv, r.delta_n);
  try {
    r.delta_c_over_omega = critical_detuning(params, r.n_bar) / params.omega();
  } catch (const PreconditionError&) {
    r.delta_c_over_omega = std::numeric_limits<double>::quiet_NaN();
  } catch (const NoStationaryPoint&) {
    r.delta_c_over_omega = std::numeric_limits<double>::quiet_NaN();
  }
  const auto diag = expansion_diagnostics(params, r.n_bar, r.delta_n);
  r.omega2 = diag.omega2;
  r.regularity_residual = diag.regularity_residual;
  return r;
}

}  // namespace qjcm
