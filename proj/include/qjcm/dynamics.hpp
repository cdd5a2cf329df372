#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qjcm/field_states.hpp"
#include "qjcm/spectrum.hpp"

namespace qjcm {

/// Interaction-picture amplitudes C_{e,n}(t), C_{g,n}(t), n = 0..n_max+m.
struct JointState {
  double t = 0.0;
  std::vector<std::complex<double>> ce;
  std::vector<std::complex<double>> cg;
  ModelParams params;
  std::size_t n_max = 0;  // truncation index of the initial field

  double norm_squared() const;
};

struct ObservableSample {
  double t;
  double sigma3;
  double sigma1;
  double sigma2;
  double f1;
  double f2;
};

struct DipoleComponents {
  double sigma1;
  double sigma2;
};

struct SqueezingIndicator {
  double f1;
  double f2;
};

/// Closed-form propagator for one (params, atom, field) scenario. The
/// per-doublet frequencies are computed once; every time point is then an
/// independent evaluation, so results do not depend on evaluation order.
class ClosedFormEvolution {
 public:
  ClosedFormEvolution(ModelParams params, AtomInit atom, const PhotonDistribution& dist);

  JointState state_at(double t) const;
  ObservableSample sample_at(double t) const;

  const ModelParams& params() const noexcept { return params_; }

 private:
  struct Doublet {
    double delta;     // Delta_{n,m}
    double rabi;      // Omega_{n,m}
    double coupling;  // 2 g sqrt({n+1}...{n+m})
    std::complex<double> excited0;  // C_{e,n}(0)
    std::complex<double> ground0;   // C_{g,n+m}(0)
  };

  ModelParams params_;
  std::size_t n_max_;
  std::vector<Doublet> doublets_;
  std::vector<std::complex<double>> uncoupled_ground_;  // C_{g,n}, n < m
};

JointState evolve_closed_form(const ModelParams& params, const AtomInit& atom,
                              const PhotonDistribution& dist, double t);

/// <sigma3> = sum |C_e|^2 - |C_g|^2 over the amplitudes.
double inversion(const JointState& state);

/// <sigma3> from the explicit population/coherence series in (alpha, beta,
/// phi, theta, |Q_n|); independent of the amplitude bookkeeping.
double inversion_series(const ModelParams& params, const AtomInit& atom,
                        const PhotonDistribution& dist, double t);

/// Slowly varying dipole quadratures, from the amplitudes with the
/// e^{-i omega0 t} factor applied to sum C*_{e,n} C_{g,n}.
DipoleComponents dipole_components(const JointState& state);

/// Same quadratures for m = 2 written as the trigonometric kernel sums
/// (alpha^2 U_n + beta^2 V_n + alpha beta W_n). Throws PreconditionError for m != 2.
DipoleComponents dipole_kernel_expansion(const ModelParams& params, const AtomInit& atom,
                                         const PhotonDistribution& dist, double t);

/// F_i = 1 - 4<sigma_i>^2 - |<sigma3>|; negative flags dipole squeezing.
SqueezingIndicator squeezing_indicator(const ObservableSample& sample);

ObservableSample make_sample(double t, double sigma3, DipoleComponents dipole);

/// One sample per grid point. `threads` > 1 fans the grid out over worker
/// threads; the output is bitwise identical for any thread count.
std::vector<ObservableSample> time_series(const ModelParams& params, const AtomInit& atom,
                                          const PhotonDistribution& dist,
                                          std::span<const double> t_grid, unsigned threads = 1);

}  // namespace qjcm
