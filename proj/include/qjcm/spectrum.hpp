#pragma once

#include <cstddef>

#include "qjcm/deformation.hpp"

namespace qjcm {

/// Parameters of the m-photon deformed Jaynes-Cummings Hamiltonian
///   H = omega A+A + omega0/2 sigma_z + g (A+^m sigma- + A^m sigma+).
/// The detuning Delta = omega0 - m omega is always derived, never stored.
class ModelParams {
 public:
  ModelParams(double omega, double omega0, double g, int m, DeformationSpec spec);
  static ModelParams from_detuning(double omega, double delta, double g, int m, DeformationSpec spec);

  double omega() const noexcept { return omega_; }
  double omega0() const noexcept { return omega0_; }
  double g() const noexcept { return g_; }
  int m() const noexcept { return m_; }
  const DeformationSpec& spec() const noexcept { return spec_; }
  double delta() const noexcept { return omega0_ - m_ * omega_; }

  ModelParams with_detuning(double delta) const;
  ModelParams scaled(double factor) const;

 private:
  double omega_;
  double omega0_;
  double g_;
  int m_;
  DeformationSpec spec_;
};

struct DressedPair {
  double e_plus;
  double e_minus;
  double cos_theta;
  double sin_theta;
  double rabi;
  double delta_nm;
};

/// Delta_{n,m} = Delta - omega({n+m} - {n} - m).
double detuning_shift(const ModelParams& params, std::size_t n);

/// Omega_{n,m} = sqrt(Delta_{n,m}^2 + 4 g^2 {n+1}...{n+m}), nonnegative.
double rabi_frequency(const ModelParams& params, std::size_t n);

/// Eigenpair of the doublet {|e,n>, |g,n+m>}:
///   |+,n> = cos|e,n> + sin|g,n+m>,  |-,n> = sin|e,n> - cos|g,n+m>.
DressedPair dressed_pair(const ModelParams& params, std::size_t n);

struct MinGap {
  double delta_at_min;
  double gap;
};

/// Detuning that closes Delta_{n,m} and the resulting minimal splitting.
MinGap min_gap(const ModelParams& params, std::size_t n);

/// Continuous-n extensions used by the revival analysis.
double detuning_shift_real(const ModelParams& params, double x);
double rabi_frequency_real(const ModelParams& params, double x);

}  // namespace qjcm
