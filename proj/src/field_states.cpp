#include "qjcm/field_states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qjcm/errors.hpp"

namespace qjcm {

namespace {

// Normalized weights |Q_n|^2 for n = 0..log_terms.size()-1.
std::vector<double> normalized_weights(const std::vector<double>& log_terms) {
  const double log_max = *std::max_element(log_terms.begin(), log_terms.end());
  std::vector<double> w(log_terms.size());
  double total = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    w[n] = std::exp(log_terms[n] - log_max);
    total += w[n];
  }
  for (double& v : w) v /= total;
  return w;
}

// Mean photon number at x = |z|^2 over the fixed index range 0..n_max. Fixing
// the range keeps nbar(x) smooth for finite differencing.
double mean_on_fixed_range(const DeformationSpec& spec, double x, std::size_t n_max) {
  if (x == 0.0) return 0.0;
  std::vector<double> log_terms(n_max + 1, 0.0);
  const double log_x = std::log(x);
  for (std::size_t n = 1; n <= n_max; ++n) {
    log_terms[n] = log_terms[n - 1] + log_x - std::log(deformed_number(spec, n));
  }
  const auto w = normalized_weights(log_terms);
  double mean = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) mean += static_cast<double>(n) * w[n];
  return mean;
}

}  // namespace

FieldAmplitude::FieldAmplitude(double magnitude, double phase) : magnitude_(magnitude) {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    std::ostringstream msg;
    msg << "field amplitude |z| must be finite and >= 0 (got " << magnitude << ")";
    throw DomainError(msg.str());
  }
  if (!std::isfinite(phase)) throw DomainError("field phase theta must be finite");
  double reduced = std::remainder(phase, 2.0 * std::numbers::pi);
  if (reduced <= -std::numbers::pi) reduced = std::numbers::pi;
  phase_ = reduced;
}

FieldAmplitude FieldAmplitude::from_z_sq(double z_sq, double phase) {
  if (!(z_sq >= 0.0)) {
    std::ostringstream msg;
    msg << "|z|^2 must be >= 0 (got " << z_sq << ")";
    throw DomainError(msg.str());
  }
  return FieldAmplitude(std::sqrt(z_sq), phase);
}

AtomInit::AtomInit(double alpha, double beta, double phi) : alpha_(alpha), beta_(beta), phi_(phi) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("atomic amplitudes alpha, beta must lie in [0, 1]");
  }
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "atomic amplitudes must satisfy alpha^2 + beta^2 = 1 (got " << alpha * alpha + beta * beta
        << ")";
    throw DomainError(msg.str());
  }
  if (!std::isfinite(phi)) throw DomainError("atomic phase phi must be finite");
}

AtomInit AtomInit::from_alpha_sq(double alpha_sq, double phi) {
  if (!(alpha_sq >= 0.0 && alpha_sq <= 1.0)) {
    std::ostringstream msg;
    msg << "alpha^2 must lie in [0, 1] (got " << alpha_sq << ")";
    throw DomainError(msg.str());
  }
  return AtomInit(std::sqrt(alpha_sq), std::sqrt(1.0 - alpha_sq), phi);
}

PhotonDistribution::PhotonDistribution(std::vector<double> magnitudes, DeformationSpec spec,
                                       FieldAmplitude amplitude, double tail_mass)
    : magnitudes_(std::move(magnitudes)), spec_(spec), amplitude_(amplitude), tail_mass_(tail_mass) {
  if (magnitudes_.empty()) throw DomainError("photon distribution needs at least one coefficient");
  coefficients_.resize(magnitudes_.size());
  const double theta = amplitude_.phase();
  for (std::size_t n = 0; n < magnitudes_.size(); ++n) {
    coefficients_[n] = std::polar(magnitudes_[n], static_cast<double>(n) * theta);
  }
}

PhotonDistribution build_coherent_state(const DeformationSpec& spec, FieldAmplitude amplitude,
                                        double tail_tol, std::optional<std::size_t> max_index) {
  auto series = deformed_exp_series(spec, amplitude.z_sq(), tail_tol);
  double tail_mass = series.tail_bound / (1.0 + series.tail_bound);

  if (max_index && *max_index < series.n_max()) {
    const auto full = normalized_weights(series.log_terms);
    double dropped = 0.0;
    for (std::size_t n = *max_index + 1; n < full.size(); ++n) dropped += full[n];
    series.log_terms.resize(*max_index + 1);
    tail_mass = std::max(tail_mass, dropped);
  }

  auto weights = normalized_weights(series.log_terms);
  for (double& w : weights) w = std::sqrt(w);
  return PhotonDistribution(std::move(weights), spec, amplitude, tail_mass);
}

double mean_photon_number(const PhotonDistribution& dist) {
  double mean = 0.0;
  for (std::size_t n = 1; n <= dist.n_max(); ++n) mean += static_cast<double>(n) * dist.probability(n);
  return mean;
}

double photon_number_variance(const PhotonDistribution& dist) {
  const double mean = mean_photon_number(dist);
  double var = 0.0;
  for (std::size_t n = 0; n <= dist.n_max(); ++n) {
    const double d = static_cast<double>(n) - mean;
    var += d * d * dist.probability(n);
  }
  return var;
}

double distribution_width(const DeformationSpec& spec, FieldAmplitude amplitude, double tail_tol) {
  const double x = amplitude.z_sq();
  const double radius = convergence_radius(spec);
  if (!(x < radius)) {
    std::ostringstream msg;
    msg << spec.describe() << " requires |z|^2 < " << radius << " (got " << x << ")";
    throw DomainError(msg.str());
  }

  double h = std::max(1e-6, 1e-6 * x);
  int halvings = 0;
  while (x + h >= radius && halvings < 60) {
    h *= 0.5;
    ++halvings;
  }
  const bool forward_ok = x + h < radius;
  const bool backward_ok = x - h >= 0.0;

  double lo = x;
  double hi = x;
  if (forward_ok && backward_ok) {
    lo = x - h;
    hi = x + h;
  } else if (forward_ok) {
    hi = x + h;
  } else if (backward_ok) {
    lo = x - h;
  } else {
    throw DomainError("no admissible differencing step for distribution width");
  }

  // The truncation at the larger argument covers both evaluations.
  const std::size_t n_max = deformed_exp_series(spec, hi, std::min(tail_tol, 1e-15)).n_max();
  const double slope =
      (mean_on_fixed_range(spec, hi, n_max) - mean_on_fixed_range(spec, lo, n_max)) / (hi - lo);
  return amplitude.magnitude() * std::sqrt(std::max(slope, 0.0));
}

}  // namespace qjcm
