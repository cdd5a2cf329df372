#include "qjcm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qjcm/errors.hpp"

namespace qjcm {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

// sin(Omega t / 2) / Omega with its Omega -> 0 limit.
double half_sinc(double rabi, double t) {
  return rabi > 0.0 ? std::sin(0.5 * rabi * t) / rabi : 0.5 * t;
}

void check_same_spec(const ModelParams& params, const PhotonDistribution& dist) {
  if (!(params.spec() == dist.spec())) {
    throw SpecMismatch("field distribution built for " + dist.spec().describe() +
                       " but model uses " + params.spec().describe());
  }
}

// Per-doublet trigonometric factors at time t. Doublets with index < 0 are
// the uncoupled ground states: frozen, no phase.
struct DoubletTrig {
  double cos_half = 1.0;   // cos(Omega t/2)
  double delta_sinc = 0.0; // Delta sin(Omega t/2)/Omega
  double coupling_sinc = 0.0;  // 2g sqrt(P) sin(Omega t/2)/Omega
  double delta = 0.0;
};

DoubletTrig doublet_trig(const ModelParams& params, long n, double t) {
  DoubletTrig d;
  if (n < 0) return d;
  const auto idx = static_cast<std::size_t>(n);
  const double rabi = rabi_frequency(params, idx);
  const double sinc = half_sinc(rabi, t);
  d.delta = detuning_shift(params, idx);
  d.cos_half = std::cos(0.5 * rabi * t);
  d.delta_sinc = d.delta * sinc;
  d.coupling_sinc = 2.0 * params.g() * std::sqrt(coupled_product(params.spec(), idx, params.m())) * sinc;
  return d;
}

}  // namespace

double JointState::norm_squared() const {
  double total = 0.0;
  for (const auto& c : ce) total += std::norm(c);
  for (const auto& c : cg) total += std::norm(c);
  return total;
}

ClosedFormEvolution::ClosedFormEvolution(ModelParams params, AtomInit atom,
                                         const PhotonDistribution& dist)
    : params_(params), n_max_(dist.n_max()) {
  check_same_spec(params_, dist);
  const auto m = static_cast<std::size_t>(params_.m());
  const cplx excited = std::polar(atom.alpha(), atom.phi());
  const double g = params_.g();

  doublets_.reserve(n_max_ + 1);
  for (std::size_t n = 0; n <= n_max_; ++n) {
    Doublet d;
    d.delta = detuning_shift(params_, n);
    d.coupling = 2.0 * g * std::sqrt(coupled_product(params_.spec(), n, params_.m()));
    d.rabi = std::hypot(d.delta, d.coupling);
    d.excited0 = excited * dist[n];
    d.ground0 = atom.beta() * dist[n + m];
    doublets_.push_back(d);
  }
  for (std::size_t n = 0; n < m; ++n) uncoupled_ground_.push_back(atom.beta() * dist[n]);
}

JointState ClosedFormEvolution::state_at(double t) const {
  const auto m = static_cast<std::size_t>(params_.m());
  const std::size_t size = n_max_ + m + 1;
  JointState state{t, std::vector<cplx>(size), std::vector<cplx>(size), params_, n_max_};

  for (std::size_t n = 0; n < m && n < size; ++n) state.cg[n] = uncoupled_ground_[n];

  for (std::size_t n = 0; n < doublets_.size(); ++n) {
    const Doublet& d = doublets_[n];
    const double c = std::cos(0.5 * d.rabi * t);
    const double sinc = half_sinc(d.rabi, t);
    const cplx rotate = std::polar(1.0, 0.5 * d.delta * t);
    const cplx cross = -kI * (d.coupling * sinc);
    state.ce[n] = rotate * ((c - kI * (d.delta * sinc)) * d.excited0 + cross * d.ground0);
    state.cg[n + m] = std::conj(rotate) * ((c + kI * (d.delta * sinc)) * d.ground0 + cross * d.excited0);
  }
  return state;
}

ObservableSample ClosedFormEvolution::sample_at(double t) const {
  const JointState state = state_at(t);
  return make_sample(t, inversion(state), dipole_components(state));
}

JointState evolve_closed_form(const ModelParams& params, const AtomInit& atom,
                              const PhotonDistribution& dist, double t) {
  return ClosedFormEvolution(params, atom, dist).state_at(t);
}

double inversion(const JointState& state) {
  double total = 0.0;
  for (std::size_t n = 0; n < state.ce.size(); ++n) total += std::norm(state.ce[n]) - std::norm(state.cg[n]);
  return total;
}

double inversion_series(const ModelParams& params, const AtomInit& atom,
                        const PhotonDistribution& dist, double t) {
  check_same_spec(params, dist);
  const auto m = static_cast<std::size_t>(params.m());
  const double alpha = atom.alpha();
  const double beta = atom.beta();
  const double psi = atom.phi() - params.m() * dist.amplitude().phase();

  double excited_loss = 0.0;
  double ground_loss = 0.0;
  double coherence = 0.0;
  for (std::size_t n = 0; n <= dist.n_max(); ++n) {
    const auto d = doublet_trig(params, static_cast<long>(n), t);
    // u^2 (cos(Omega t) - 1) = -2 (2g sqrt(P) sin(Omega t/2)/Omega)^2
    const double transfer = -2.0 * d.coupling_sinc * d.coupling_sinc;
    excited_loss += dist.probability(n) * transfer;
    ground_loss += dist.probability(n + m) * transfer;
    coherence += d.coupling_sinc * dist.magnitude(n) * dist.magnitude(n + m) *
                 (d.delta_sinc * std::cos(psi) - d.cos_half * std::sin(psi));
  }
  return alpha * alpha * (1.0 + excited_loss) - beta * beta * (1.0 + ground_loss) +
         4.0 * alpha * beta * coherence;
}

DipoleComponents dipole_components(const JointState& state) {
  cplx sum{};
  for (std::size_t n = 0; n < state.ce.size(); ++n) sum += std::conj(state.ce[n]) * state.cg[n];
  sum *= std::polar(1.0, -state.params.omega0() * state.t);
  return {sum.real(), sum.imag()};
}

DipoleComponents dipole_kernel_expansion(const ModelParams& params, const AtomInit& atom,
                                         const PhotonDistribution& dist, double t) {
  check_same_spec(params, dist);
  if (params.m() != 2) throw PreconditionError("dipole kernel expansion is written for m = 2");
  const double alpha = atom.alpha();
  const double beta = atom.beta();
  const double phi = atom.phi();
  const double theta = dist.amplitude().phase();
  const double w0t = params.omega0() * t;

  double sigma1 = 0.0;
  double sigma2 = 0.0;
  for (std::size_t n = 0; n <= dist.n_max(); ++n) {
    const long k = static_cast<long>(n);
    const auto lower = doublet_trig(params, k - 2, t);
    const auto here = doublet_trig(params, k, t);
    const auto upper = doublet_trig(params, k + 2, t);
    const double q_n = dist.magnitude(n);
    const double q_n2 = dist.magnitude(n + 2);
    const double q_n4 = dist.magnitude(n + 4);

    // U_n: excited-atom contribution, doublets n and n+2.
    {
      const double phase = 0.5 * (upper.delta + here.delta) * t + w0t + 2.0 * theta;
      const double amp = alpha * alpha * q_n * q_n2 * here.coupling_sinc;
      sigma1 += amp * (upper.delta_sinc * std::cos(phase) - std::sin(phase) * upper.cos_half);
      sigma2 += amp * (-upper.delta_sinc * std::sin(phase) - std::cos(phase) * upper.cos_half);
    }
    // V_n: ground-atom contribution, doublets n and n-2.
    {
      const double phase = 0.5 * (here.delta + lower.delta) * t + w0t + 2.0 * theta;
      const double amp = beta * beta * q_n * q_n2 * here.coupling_sinc;
      sigma1 += amp * (lower.cos_half * std::sin(phase) - lower.delta_sinc * std::cos(phase));
      sigma2 += amp * (lower.cos_half * std::cos(phase) + lower.delta_sinc * std::sin(phase));
    }
    // W_n: cross terms between the two atomic components.
    {
      const double phase = 0.5 * (here.delta + lower.delta) * t + w0t + phi;
      const double even = here.cos_half * lower.cos_half - here.delta_sinc * lower.delta_sinc;
      const double odd = lower.delta_sinc * here.cos_half + here.delta_sinc * lower.cos_half;
      const double amp = alpha * beta * q_n * q_n;
      sigma1 += amp * (std::cos(phase) * even + std::sin(phase) * odd);
      sigma2 += amp * (odd * std::cos(phase) - even * std::sin(phase));

      const double far = 0.5 * (here.delta + upper.delta) * t + w0t - phi + 4.0 * theta;
      const double amp4 = alpha * beta * here.coupling_sinc * upper.coupling_sinc * q_n * q_n4;
      sigma1 += amp4 * std::cos(far);
      sigma2 -= amp4 * std::sin(far);
    }
  }
  return {sigma1, sigma2};
}

SqueezingIndicator squeezing_indicator(const ObservableSample& sample) {
  const double inv = std::abs(sample.sigma3);
  return {1.0 - 4.0 * sample.sigma1 * sample.sigma1 - inv,
          1.0 - 4.0 * sample.sigma2 * sample.sigma2 - inv};
}

ObservableSample make_sample(double t, double sigma3, DipoleComponents dipole) {
  ObservableSample s{t, sigma3, dipole.sigma1, dipole.sigma2, 0.0, 0.0};
  const auto f = squeezing_indicator(s);
  s.f1 = f.f1;
  s.f2 = f.f2;
  return s;
}

std::vector<ObservableSample> time_series(const ModelParams& params, const AtomInit& atom,
                                          const PhotonDistribution& dist,
                                          std::span<const double> t_grid, unsigned threads) {
  if (t_grid.empty()) throw DomainError("time grid must be nonempty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i])) throw DomainError("time grid must be finite and >= 0");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("time grid must be strictly increasing");
  }

  const ClosedFormEvolution evolution(params, atom, dist);
  std::vector<ObservableSample> out(t_grid.size());
  const unsigned workers = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(t_grid.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) out[i] = evolution.sample_at(t_grid[i]);
    return out;
  }

  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < t_grid.size(); i += workers) out[i] = evolution.sample_at(t_grid[i]);
    });
  }
  pool.clear();  // joins
  return out;
}

}  // namespace qjcm
