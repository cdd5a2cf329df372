#include "qjcm/spectrum.hpp"

#include <cmath>
#include <sstream>

#include "qjcm/errors.hpp"

namespace qjcm {

ModelParams::ModelParams(double omega, double omega0, double g, int m, DeformationSpec spec)
    : omega_(omega), omega0_(omega0), g_(g), m_(m), spec_(spec) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("omega must be finite and > 0");
  if (!std::isfinite(omega0)) throw DomainError("omega0 must be finite");
  if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("g must be finite and >= 0");
  if (m < 1) {
    std::ostringstream msg;
    msg << "photon number per transition m must be >= 1 (got " << m << ")";
    throw DomainError(msg.str());
  }
}

ModelParams ModelParams::from_detuning(double omega, double delta, double g, int m,
                                       DeformationSpec spec) {
  return ModelParams(omega, delta + m * omega, g, m, spec);
}

ModelParams ModelParams::with_detuning(double delta) const {
  return from_detuning(omega_, delta, g_, m_, spec_);
}

ModelParams ModelParams::scaled(double factor) const {
  return ModelParams(omega_ * factor, omega0_ * factor, g_ * factor, m_, spec_);
}

double detuning_shift(const ModelParams& params, std::size_t n) {
  const auto& spec = params.spec();
  const double spread = deformed_number(spec, n + static_cast<std::size_t>(params.m())) -
                        deformed_number(spec, n) - params.m();
  return params.delta() - params.omega() * spread;
}

double rabi_frequency(const ModelParams& params, std::size_t n) {
  const double d = detuning_shift(params, n);
  const double g = params.g();
  return std::sqrt(d * d + 4.0 * g * g * coupled_product(params.spec(), n, params.m()));
}

DressedPair dressed_pair(const ModelParams& params, std::size_t n) {
  const auto& spec = params.spec();
  const double centre =
      0.5 * params.omega() *
      (deformed_number(spec, n + static_cast<std::size_t>(params.m())) + deformed_number(spec, n));
  const double d = detuning_shift(params, n);
  const double coupling = 2.0 * params.g() * std::sqrt(coupled_product(spec, n, params.m()));
  const double rabi = std::sqrt(d * d + coupling * coupling);

  DressedPair pair{centre + 0.5 * rabi, centre - 0.5 * rabi, 1.0, 0.0, rabi, d};
  const double lift = rabi - d;
  const double norm = std::hypot(lift, coupling);
  // Uncoupled doublet with Delta_{n,m} >= 0: |e,n> is already the upper level.
  if (norm > 0.0) {
    pair.cos_theta = coupling / norm;
    pair.sin_theta = lift / norm;
  }
  return pair;
}

MinGap min_gap(const ModelParams& params, std::size_t n) {
  const auto& spec = params.spec();
  const double spread = deformed_number(spec, n + static_cast<std::size_t>(params.m())) -
                        deformed_number(spec, n) - params.m();
  return {params.omega() * spread,
          2.0 * params.g() * std::sqrt(coupled_product(spec, n, params.m()))};
}

double detuning_shift_real(const ModelParams& params, double x) {
  const auto& spec = params.spec();
  const double spread =
      deformed_number_real(spec, x + params.m()) - deformed_number_real(spec, x) - params.m();
  return params.delta() - params.omega() * spread;
}

double rabi_frequency_real(const ModelParams& params, double x) {
  const double d = detuning_shift_real(params, x);
  const double g = params.g();
  return std::sqrt(d * d + 4.0 * g * g * coupled_product_real(params.spec(), x, params.m()));
}

}  // namespace qjcm
