#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "qjcm/deformation.hpp"

namespace qjcm {

inline constexpr double kDefaultTailTol = 1e-12;

/// Complex coherent-state label z = |z| e^{i theta}; theta is kept in (-pi, pi].
class FieldAmplitude {
 public:
  FieldAmplitude(double magnitude, double phase);
  static FieldAmplitude from_z_sq(double z_sq, double phase = 0.0);

  double magnitude() const noexcept { return magnitude_; }
  double phase() const noexcept { return phase_; }
  double z_sq() const noexcept { return magnitude_ * magnitude_; }

  bool operator==(const FieldAmplitude&) const = default;

 private:
  double magnitude_;
  double phase_;
};

/// Atomic preparation alpha e^{i phi}|e> + beta|g> with alpha, beta >= 0.
class AtomInit {
 public:
  AtomInit(double alpha, double beta, double phi = 0.0);
  static AtomInit from_alpha_sq(double alpha_sq, double phi = 0.0);
  static AtomInit excited() { return AtomInit(1.0, 0.0); }
  static AtomInit ground() { return AtomInit(0.0, 1.0); }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double phi() const noexcept { return phi_; }

 private:
  double alpha_;
  double beta_;
  double phi_;
};

/// Truncated, renormalized Fock-basis coefficients Q_0..Q_{n_max} of a
/// deformed coherent state. The moduli are stored separately from the phases
/// e^{i n theta}, so |Q_n|^2 does not depend on theta even in the last bit.
class PhotonDistribution {
 public:
  PhotonDistribution(std::vector<double> magnitudes, DeformationSpec spec, FieldAmplitude amplitude,
                     double tail_mass);

  const std::vector<std::complex<double>>& coefficients() const noexcept { return coefficients_; }
  std::complex<double> operator[](std::size_t n) const {
    return n < coefficients_.size() ? coefficients_[n] : std::complex<double>{};
  }
  double magnitude(std::size_t n) const { return n < magnitudes_.size() ? magnitudes_[n] : 0.0; }
  double probability(std::size_t n) const { return magnitude(n) * magnitude(n); }
  std::size_t n_max() const noexcept { return coefficients_.size() - 1; }
  const DeformationSpec& spec() const noexcept { return spec_; }
  const FieldAmplitude& amplitude() const noexcept { return amplitude_; }
  double tail_mass() const noexcept { return tail_mass_; }

 private:
  std::vector<double> magnitudes_;
  std::vector<std::complex<double>> coefficients_;
  DeformationSpec spec_;
  FieldAmplitude amplitude_;
  double tail_mass_;
};

/// Deformed coherent state: Q_n proportional to z^n / sqrt({n}!), truncated so
/// that the discarded probability is at most tail_tol, then renormalized.
/// `max_index`, when given, additionally caps the Fock index (a hard cut; the
/// reported tail mass then reflects the larger of the two).
PhotonDistribution build_coherent_state(const DeformationSpec& spec, FieldAmplitude amplitude,
                                        double tail_tol = kDefaultTailTol,
                                        std::optional<std::size_t> max_index = std::nullopt);

double mean_photon_number(const PhotonDistribution& dist);

/// Variance of n under |Q_n|^2.
double photon_number_variance(const PhotonDistribution& dist);

/// delta n = |z| sqrt(d nbar / d|z|^2), differentiated numerically in x = |z|^2.
double distribution_width(const DeformationSpec& spec, FieldAmplitude amplitude,
                          double tail_tol = kDefaultTailTol);

}  // namespace qjcm
