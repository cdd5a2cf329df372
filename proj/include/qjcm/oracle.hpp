#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qjcm/dynamics.hpp"
#include "qjcm/field_states.hpp"
#include "qjcm/spectrum.hpp"

namespace qjcm {

inline constexpr double kDefaultOracleTol = 1e-10;
inline constexpr std::size_t kDefaultStepBudget = 50'000'000;

/// Full Hamiltonian on |e,0>..|e,n_max>, |g,0>..|g,n_max> (Schroedinger picture).
class TruncatedHamiltonian {
 public:
  using Matrix = Eigen::SparseMatrix<std::complex<double>>;

  TruncatedHamiltonian(ModelParams params, std::size_t n_max, Matrix matrix);

  const ModelParams& params() const noexcept { return params_; }
  std::size_t n_max() const noexcept { return n_max_; }
  std::size_t dimension() const noexcept { return 2 * (n_max_ + 1); }
  const Matrix& matrix() const noexcept { return matrix_; }

  std::size_t excited_index(std::size_t n) const noexcept { return n; }
  std::size_t ground_index(std::size_t n) const noexcept { return n_max_ + 1 + n; }

  /// |e,n> whose partner |g,n+m> falls outside the basis.
  bool boundary_truncated(std::size_t n) const noexcept;

  /// Free energy omega{n} +- omega0/2 of a basis state.
  double bare_energy(std::size_t index) const;

  /// max |H_ij - conj(H_ji)|
  double hermiticity_defect() const;

 private:
  ModelParams params_;
  std::size_t n_max_;
  Matrix matrix_;
};

TruncatedHamiltonian build_hamiltonian(const ModelParams& params, std::size_t n_max);

/// Field truncation index + m + 10.
std::size_t default_basis_size(const ModelParams& params, const PhotonDistribution& dist);

/// (alpha e^{i phi}|e> + beta|g>) x sum Q_n |n> on the basis of H, as a
/// Schroedinger-picture JointState at t = 0. Throws BasisTooSmall when more
/// than tail_tol of the probability sits outside the basis or on
/// boundary-truncated excited states.
JointState initial_state(const TruncatedHamiltonian& h, const AtomInit& atom,
                         const PhotonDistribution& dist, double tail_tol = kDefaultTailTol);

enum class IntegrationMethod { ExactBlocks, AdaptiveStepping };

/// Exact propagator from the eigendecomposition of each connected block of H.
/// Found from the sparsity pattern, so it does not assume the doublet layout.
class BlockPropagator {
 public:
  explicit BlockPropagator(const TruncatedHamiltonian& h);

  /// psi(t0 + dt) from psi(t0).
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double dt) const;
  std::size_t block_count() const noexcept { return blocks_.size(); }

 private:
  struct Block {
    std::vector<std::size_t> indices;
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;
  };
  std::size_t dimension_;
  std::vector<Block> blocks_;
};

/// Dormand-Prince 5(4) with step control, knowing nothing about the block
/// structure. Local tolerance is tol * 1e-3 (absolute and relative).
/// Throws ToleranceNotMet when more than max_steps attempts are needed.
Eigen::VectorXcd integrate_stepping(const TruncatedHamiltonian& h, const Eigen::VectorXcd& psi, double dt,
                                    double tol = kDefaultOracleTol,
                                    std::size_t max_steps = kDefaultStepBudget);

/// Schroedinger-picture state at time t, starting from `initial` (at initial.t).
JointState integrate(const TruncatedHamiltonian& h, const JointState& initial, double t,
                     double tol = kDefaultOracleTol,
                     IntegrationMethod method = IntegrationMethod::ExactBlocks);

Eigen::VectorXcd to_vector(const TruncatedHamiltonian& h, const JointState& state);
JointState from_vector(const TruncatedHamiltonian& h, const Eigen::VectorXcd& psi, double t);

/// Removes the free phases: C = e^{+i(omega{n} +- omega0/2) t} psi.
JointState to_interaction_picture(const TruncatedHamiltonian& h, const JointState& schroedinger);

/// Observables of a Schroedinger-picture oracle state, through the same
/// phase conventions as the closed-form route.
ObservableSample oracle_sample(const TruncatedHamiltonian& h, const JointState& schroedinger);

struct OracleDeviation {
  double sigma3 = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;

  double max() const;
};

/// Max-abs differences between closed-form and oracle observables over a
/// time grid; the grid is split over `threads` workers.
OracleDeviation compare_with_oracle(const ModelParams& params, const AtomInit& atom,
                                    const PhotonDistribution& dist, std::span<const double> t_grid,
                                    double tol = kDefaultOracleTol,
                                    IntegrationMethod method = IntegrationMethod::ExactBlocks,
                                    unsigned threads = 1);

}  // namespace qjcm
