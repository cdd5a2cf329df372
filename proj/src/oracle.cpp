#include "qjcm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "qjcm/errors.hpp"

namespace qjcm {

namespace {

using cplx = std::complex<double>;

// Union-find over basis indices, used to discover the blocks of H.
struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw DomainError("time grid must be nonempty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i])) throw DomainError("time grid must be finite and >= 0");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

void accumulate(OracleDeviation& dev, const ObservableSample& a, const ObservableSample& b) {
  dev.sigma3 = std::max(dev.sigma3, std::abs(a.sigma3 - b.sigma3));
  dev.sigma1 = std::max(dev.sigma1, std::abs(a.sigma1 - b.sigma1));
  dev.sigma2 = std::max(dev.sigma2, std::abs(a.sigma2 - b.sigma2));
}

}  // namespace

TruncatedHamiltonian::TruncatedHamiltonian(ModelParams params, std::size_t n_max, Matrix matrix)
    : params_(params), n_max_(n_max), matrix_(std::move(matrix)) {}

bool TruncatedHamiltonian::boundary_truncated(std::size_t n) const noexcept {
  return n + static_cast<std::size_t>(params_.m()) > n_max_;
}

double TruncatedHamiltonian::bare_energy(std::size_t index) const {
  if (index >= dimension()) throw DomainError("basis index out of range");
  const bool excited = index <= n_max_;
  const std::size_t n = excited ? index : index - (n_max_ + 1);
  const double level = params_.omega() * deformed_number(params_.spec(), n);
  return excited ? level + 0.5 * params_.omega0() : level - 0.5 * params_.omega0();
}

double TruncatedHamiltonian::hermiticity_defect() const {
  const Matrix adjoint = matrix_.adjoint();
  const Matrix diff = matrix_ - adjoint;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Matrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

TruncatedHamiltonian build_hamiltonian(const ModelParams& params, std::size_t n_max) {
  const auto m = static_cast<std::size_t>(params.m());
  if (n_max < m) {
    std::ostringstream msg;
    msg << "basis n_max = " << n_max << " is smaller than m = " << m;
    throw BasisTooSmall(msg.str());
  }
  const std::size_t dim = 2 * (n_max + 1);
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(dim + 2 * (n_max + 1));

  TruncatedHamiltonian probe(params, n_max, {});
  for (std::size_t i = 0; i < dim; ++i) entries.emplace_back(i, i, probe.bare_energy(i));
  for (std::size_t n = 0; n + m <= n_max; ++n) {
    const double coupling = params.g() * std::sqrt(coupled_product(params.spec(), n, params.m()));
    if (coupling == 0.0) continue;
    const std::size_t e = probe.excited_index(n);
    const std::size_t gm = probe.ground_index(n + m);
    entries.emplace_back(gm, e, coupling);
    entries.emplace_back(e, gm, coupling);
  }
  TruncatedHamiltonian::Matrix matrix(dim, dim);
  matrix.setFromTriplets(entries.begin(), entries.end());
  matrix.makeCompressed();
  return TruncatedHamiltonian(params, n_max, std::move(matrix));
}

std::size_t default_basis_size(const ModelParams& params, const PhotonDistribution& dist) {
  return dist.n_max() + static_cast<std::size_t>(params.m()) + 10;
}

JointState initial_state(const TruncatedHamiltonian& h, const AtomInit& atom,
                         const PhotonDistribution& dist, double tail_tol) {
  if (!(h.params().spec() == dist.spec())) throw SpecMismatch("distribution and Hamiltonian use different deformations");
  const std::size_t size = h.n_max() + 1;
  JointState state{0.0, std::vector<cplx>(size), std::vector<cplx>(size), h.params(), h.n_max()};
  const cplx excited = std::polar(atom.alpha(), atom.phi());

  double lost = 0.0;
  for (std::size_t n = 0; n <= dist.n_max(); ++n) {
    if (n >= size) {
      lost += dist.probability(n);
      continue;
    }
    state.ce[n] = excited * dist[n];
    state.cg[n] = atom.beta() * dist[n];
    if (h.boundary_truncated(n)) lost += atom.alpha() * atom.alpha() * dist.probability(n);
  }
  if (lost > tail_tol) {
    std::ostringstream msg;
    msg << "basis n_max = " << h.n_max() << " leaves probability " << lost
        << " on truncated states (allowed " << tail_tol << ")";
    throw BasisTooSmall(msg.str());
  }
  return state;
}

BlockPropagator::BlockPropagator(const TruncatedHamiltonian& h) : dimension_(h.dimension()) {
  const auto& mat = h.matrix();
  DisjointSets sets(dimension_);
  for (int k = 0; k < mat.outerSize(); ++k) {
    for (TruncatedHamiltonian::Matrix::InnerIterator it(mat, k); it; ++it) {
      if (it.value() != cplx{}) sets.unite(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()));
    }
  }
  std::vector<std::size_t> block_of(dimension_, dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) {
    const std::size_t root = sets.find(i);
    if (block_of[root] == dimension_) {
      block_of[root] = blocks_.size();
      blocks_.emplace_back();
    }
    blocks_[block_of[root]].indices.push_back(i);
  }

  const Eigen::MatrixXcd dense(mat);
  for (auto& block : blocks_) {
    const auto size = static_cast<Eigen::Index>(block.indices.size());
    Eigen::MatrixXcd sub(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
      for (Eigen::Index c = 0; c < size; ++c) {
        sub(r, c) = dense(static_cast<Eigen::Index>(block.indices[r]), static_cast<Eigen::Index>(block.indices[c]));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
    if (solver.info() != Eigen::Success) throw NonConvergence("block eigendecomposition failed");
    block.vectors = solver.eigenvectors();
    block.values = solver.eigenvalues();
  }
}

Eigen::VectorXcd BlockPropagator::evolve(const Eigen::VectorXcd& psi, double dt) const {
  if (static_cast<std::size_t>(psi.size()) != dimension_) throw DomainError("state dimension does not match the Hamiltonian");
  Eigen::VectorXcd out(psi.size());
  for (const auto& block : blocks_) {
    const auto size = static_cast<Eigen::Index>(block.indices.size());
    Eigen::VectorXcd local(size);
    for (Eigen::Index i = 0; i < size; ++i) local(i) = psi(static_cast<Eigen::Index>(block.indices[i]));
    Eigen::VectorXcd modes = block.vectors.adjoint() * local;
    for (Eigen::Index i = 0; i < size; ++i) modes(i) *= std::polar(1.0, -block.values(i) * dt);
    local = block.vectors * modes;
    for (Eigen::Index i = 0; i < size; ++i) out(static_cast<Eigen::Index>(block.indices[i])) = local(i);
  }
  return out;
}

Eigen::VectorXcd integrate_stepping(const TruncatedHamiltonian& h, const Eigen::VectorXcd& psi, double dt,
                                    double tol, std::size_t max_steps) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<cplx>;
  if (!(tol > 0.0)) throw DomainError("integration tolerance must be positive");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw DomainError("integration time must be finite and >= 0");
  if (static_cast<std::size_t>(psi.size()) != h.dimension()) throw DomainError("state dimension does not match the Hamiltonian");

  State x(psi.data(), psi.data() + psi.size());
  if (dt == 0.0) return psi;

  const auto& mat = h.matrix();
  auto rhs = [&mat](const State& y, State& dydt, double) {
    const auto n = static_cast<Eigen::Index>(y.size());
    Eigen::Map<const Eigen::VectorXcd> in(y.data(), n);
    Eigen::Map<Eigen::VectorXcd> out(dydt.data(), n);
    out.noalias() = mat * in;
    out *= cplx{0.0, -1.0};
  };

  const double local_tol = 1e-3 * tol;
  auto stepper = odeint::make_controlled(local_tol, local_tol, odeint::runge_kutta_dopri5<State>());

  // The largest diagonal entry bounds the fastest phase; start well inside it.
  double scale = 0.0;
  for (std::size_t i = 0; i < h.dimension(); ++i) scale = std::max(scale, std::abs(h.bare_energy(i)));
  scale = std::max(scale + 2.0 * h.params().g() * std::sqrt(coupled_product(h.params().spec(), h.n_max(), 1)), 1.0);
  double step = std::min(dt, 0.01 / scale);

  double t = 0.0;
  std::size_t attempts = 0;
  while (t < dt) {
    if (++attempts > max_steps) {
      std::ostringstream msg;
      msg << "adaptive stepping exceeded " << max_steps << " steps at t = " << t << " of " << dt;
      throw ToleranceNotMet(msg.str());
    }
    const bool last = t + step >= dt;
    if (last) step = dt - t;
    const double before = t;
    if (stepper.try_step(rhs, x, t, step) == odeint::success && last && t != before) t = dt;
  }
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Eigen::VectorXcd to_vector(const TruncatedHamiltonian& h, const JointState& state) {
  const std::size_t size = h.n_max() + 1;
  if (state.ce.size() != size || state.cg.size() != size) throw DomainError("state does not match the oracle basis");
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(h.dimension()));
  for (std::size_t n = 0; n < size; ++n) {
    psi(static_cast<Eigen::Index>(h.excited_index(n))) = state.ce[n];
    psi(static_cast<Eigen::Index>(h.ground_index(n))) = state.cg[n];
  }
  return psi;
}

JointState from_vector(const TruncatedHamiltonian& h, const Eigen::VectorXcd& psi, double t) {
  const std::size_t size = h.n_max() + 1;
  JointState state{t, std::vector<cplx>(size), std::vector<cplx>(size), h.params(), h.n_max()};
  for (std::size_t n = 0; n < size; ++n) {
    state.ce[n] = psi(static_cast<Eigen::Index>(h.excited_index(n)));
    state.cg[n] = psi(static_cast<Eigen::Index>(h.ground_index(n)));
  }
  return state;
}

JointState integrate(const TruncatedHamiltonian& h, const JointState& initial, double t, double tol,
                     IntegrationMethod method) {
  const double dt = t - initial.t;
  if (!(dt >= 0.0)) throw DomainError("cannot integrate backwards in time");
  const Eigen::VectorXcd psi = to_vector(h, initial);
  if (method == IntegrationMethod::ExactBlocks) return from_vector(h, BlockPropagator(h).evolve(psi, dt), t);
  return from_vector(h, integrate_stepping(h, psi, dt, tol), t);
}

JointState to_interaction_picture(const TruncatedHamiltonian& h, const JointState& schroedinger) {
  JointState out = schroedinger;
  for (std::size_t n = 0; n < out.ce.size(); ++n) {
    out.ce[n] *= std::polar(1.0, h.bare_energy(h.excited_index(n)) * out.t);
    out.cg[n] *= std::polar(1.0, h.bare_energy(h.ground_index(n)) * out.t);
  }
  return out;
}

ObservableSample oracle_sample(const TruncatedHamiltonian& h, const JointState& schroedinger) {
  const JointState rotated = to_interaction_picture(h, schroedinger);
  return make_sample(rotated.t, inversion(schroedinger), dipole_components(rotated));
}

double OracleDeviation::max() const { return std::max({sigma3, sigma1, sigma2}); }

OracleDeviation compare_with_oracle(const ModelParams& params, const AtomInit& atom,
                                    const PhotonDistribution& dist, std::span<const double> t_grid,
                                    double tol, IntegrationMethod method, unsigned threads) {
  check_grid(t_grid);
  const auto h = build_hamiltonian(params, default_basis_size(params, dist));
  const JointState start = initial_state(h, atom, dist);
  const ClosedFormEvolution closed(params, atom, dist);

  OracleDeviation total;
  if (method == IntegrationMethod::AdaptiveStepping) {
    // Marches through the grid; each leg restarts the controller.
    Eigen::VectorXcd psi = to_vector(h, start);
    double t = 0.0;
    for (double target : t_grid) {
      psi = integrate_stepping(h, psi, target - t, tol);
      t = target;
      accumulate(total, closed.sample_at(t), oracle_sample(h, from_vector(h, psi, t)));
    }
    return total;
  }

  const BlockPropagator propagator(h);
  const Eigen::VectorXcd psi0 = to_vector(h, start);
  const unsigned workers = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(t_grid.size()));
  std::vector<OracleDeviation> partial(workers);
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < t_grid.size(); i += workers) {
      const double t = t_grid[i];
      accumulate(partial[w], closed.sample_at(t), oracle_sample(h, from_vector(h, propagator.evolve(psi0, t), t)));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    pool.clear();  // joins
  }
  for (const auto& p : partial) {
    total.sigma3 = std::max(total.sigma3, p.sigma3);
    total.sigma1 = std::max(total.sigma1, p.sigma1);
    total.sigma2 = std::max(total.sigma2, p.sigma2);
  }
  return total;
}

}  // namespace qjcm
