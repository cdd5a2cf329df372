#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "qjcm/dynamics.hpp"
#include "qjcm/errors.hpp"

using namespace qjcm;
using cplx = std::complex<double>;

namespace {

std::vector<DeformationSpec> q_variants() {
  return {DeformationSpec::arik_coon(0.9), DeformationSpec::penson_solomon(0.9), DeformationSpec::quesne(0.9),
          DeformationSpec::arik_coon(1.1), DeformationSpec::quesne(1.05)};
}

struct Case {
  ModelParams params;
  AtomInit atom;
  PhotonDistribution dist;
};

Case random_case(std::mt19937_64& rng, const DeformationSpec& spec, int m = 2) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double alpha_sq = unit(rng);
  const double phi = 6.0 * unit(rng) - 3.0;
  const double theta = 6.0 * unit(rng) - 3.0;
  const double delta = 4.0 * unit(rng) - 2.0;
  const double z_sq = 0.2 + 4.0 * unit(rng);
  return {ModelParams::from_detuning(1.0, delta, 0.1, m, spec), AtomInit::from_alpha_sq(alpha_sq, phi),
          build_coherent_state(spec, FieldAmplitude::from_z_sq(z_sq, theta))};
}

std::vector<double> gt_grid(double gt_max, std::size_t n, double g) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = gt_max * i / (n - 1.0) / g;
  return t;
}

}  // namespace

TEST_CASE("initial amplitudes") {
  const auto spec = DeformationSpec::quesne(0.9);
  const auto dist = build_coherent_state(spec, FieldAmplitude(1.5, 0.4));
  const AtomInit atom = AtomInit::from_alpha_sq(0.3, 0.8);
  const auto params = ModelParams::from_detuning(1.0, 0.5, 0.1, 2, spec);
  const auto s = evolve_closed_form(params, atom, dist, 0.0);
  REQUIRE(s.ce.size() == dist.n_max() + 3);
  for (std::size_t n = 0; n < s.ce.size(); ++n) {
    CHECK(std::abs(s.ce[n] - std::polar(atom.alpha(), atom.phi()) * dist[n]) < 1e-15);
    CHECK(std::abs(s.cg[n] - atom.beta() * dist[n]) < 1e-15);
  }
}

TEST_CASE("vacuum two-photon Rabi oscillation") {
  const double g = 0.1;
  const auto params = ModelParams::from_detuning(1.0, 0.0, g, 2, DeformationSpec::standard());
  const auto vac = build_coherent_state(DeformationSpec::standard(), FieldAmplitude(0.0, 0.0));

  // matrix exponential of the 2x2 interaction block [[0, c], [c, 0]]
  const double c = g * std::sqrt(2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver((Eigen::Matrix2d() << 0, c, c, 0).finished());
  for (double t : {0.0, 1.0, 7.3, 25.0, 111.0}) {
    const Eigen::Vector2cd phases(std::polar(1.0, -solver.eigenvalues()(0) * t),
                                  std::polar(1.0, -solver.eigenvalues()(1) * t));
    const Eigen::Matrix2cd u = solver.eigenvectors().cast<cplx>() * phases.asDiagonal() *
                               solver.eigenvectors().transpose().cast<cplx>();
    const auto s = evolve_closed_form(params, AtomInit::excited(), vac, t);
    CHECK(std::abs(s.ce[0] - u(0, 0)) < 1e-12);
    CHECK(std::abs(s.cg[2] - u(1, 0)) < 1e-12);
    CHECK(std::abs(s.ce[0] - std::cos(std::sqrt(2.0) * g * t)) < 1e-12);
    CHECK(std::abs(s.cg[2] - cplx(0.0, -std::sin(std::sqrt(2.0) * g * t))) < 1e-12);
    CHECK(std::abs(inversion(s) - std::cos(2.0 * std::sqrt(2.0) * g * t)) < 1e-12);
  }
}

TEST_CASE("free evolution keeps moduli") {
  for (const auto& spec : q_variants()) {
    const auto params = ModelParams::from_detuning(1.0, 0.4, 0.0, 2, spec);
    const auto dist = build_coherent_state(spec, FieldAmplitude(1.2, 0.3));
    const AtomInit atom = AtomInit::from_alpha_sq(0.6, 0.2);
    const auto s0 = evolve_closed_form(params, atom, dist, 0.0);
    const auto s1 = evolve_closed_form(params, atom, dist, 37.0);
    for (std::size_t n = 0; n < s0.ce.size(); ++n) {
      CHECK(std::abs(std::abs(s1.ce[n]) - std::abs(s0.ce[n])) < 1e-15);
      CHECK(std::abs(std::abs(s1.cg[n]) - std::abs(s0.cg[n])) < 1e-15);
    }
  }
}

TEST_CASE("observables at t = 0") {
  const auto spec = DeformationSpec::arik_coon(0.9);
  const auto params = ModelParams::from_detuning(1.0, 0.0, 0.1, 2, spec);
  const auto dist = build_coherent_state(spec, FieldAmplitude::from_z_sq(3.0));
  CHECK(inversion(evolve_closed_form(params, AtomInit::excited(), dist, 0.0)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(inversion(evolve_closed_form(params, AtomInit::ground(), dist, 0.0)) == doctest::Approx(-1.0).epsilon(1e-13));

  const auto ground = dipole_components(evolve_closed_form(params, AtomInit::ground(), dist, 0.0));
  CHECK(ground.sigma1 == 0.0);
  CHECK(ground.sigma2 == 0.0);
  const auto mixed = dipole_components(evolve_closed_form(params, AtomInit(std::sqrt(0.5), std::sqrt(0.5)), dist, 0.0));
  CHECK(mixed.sigma1 == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::abs(mixed.sigma2) < 1e-15);
}

TEST_CASE("squeezing indicator") {
  auto f = squeezing_indicator({0.0, -1.0, 0.0, 0.0, 0.0, 0.0});
  CHECK(f.f1 == 0.0);
  f = squeezing_indicator({0.0, 0.0, 0.5, 0.0, 0.0, 0.0});
  CHECK(f.f1 == 0.0);
  CHECK(f.f2 == 1.0);
  const auto s = make_sample(1.0, 0.3, {0.1, -0.2});
  CHECK(s.f1 == doctest::Approx(1 - 4 * 0.01 - 0.3).epsilon(1e-12));
  CHECK(s.f2 == doctest::Approx(1 - 4 * 0.04 - 0.3).epsilon(1e-12));
}

TEST_CASE("nondeformed squeezing at small field") {
  const auto spec = DeformationSpec::standard();
  const auto params = ModelParams::from_detuning(1.0, 0.0, 0.1, 2, spec);
  const auto dist = build_coherent_state(spec, FieldAmplitude::from_z_sq(0.5));
  const auto grid = gt_grid(10.0, 2001, 0.1);
  const auto samples = time_series(params, AtomInit::ground(), dist, grid);
  const double lowest = std::min_element(samples.begin(), samples.end(), [](auto& a, auto& b) { return a.f1 < b.f1; })->f1;
  CHECK(lowest < 0.0);
}

TEST_CASE("unitarity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> gt(0.0, 50.0);
  for (const auto& spec : q_variants()) {
    for (int m : {1, 2, 3}) {
      const auto c = random_case(rng, spec, m);
      for (int i = 0; i < 10; ++i) {
        const auto s = evolve_closed_form(c.params, c.atom, c.dist, gt(rng) / c.params.g());
        CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("inversion: amplitudes against explicit series") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gt(0.0, 40.0);
  for (const auto& spec : q_variants()) {
    for (int m : {1, 2, 3}) {
      for (int trial = 0; trial < 4; ++trial) {
        const auto c = random_case(rng, spec, m);
        for (int i = 0; i < 8; ++i) {
          const double t = gt(rng) / c.params.g();
          const double a = inversion(evolve_closed_form(c.params, c.atom, c.dist, t));
          CHECK(std::abs(a - inversion_series(c.params, c.atom, c.dist, t)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("dipole: amplitudes against kernel sums") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> gt(0.0, 40.0);
  for (const auto& spec : q_variants()) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto c = random_case(rng, spec, 2);
      for (int i = 0; i < 8; ++i) {
        const double t = gt(rng) / c.params.g();
        const auto a = dipole_components(evolve_closed_form(c.params, c.atom, c.dist, t));
        const auto k = dipole_kernel_expansion(c.params, c.atom, c.dist, t);
        CHECK(std::abs(a.sigma1 - k.sigma1) < 1e-10);
        CHECK(std::abs(a.sigma2 - k.sigma2) < 1e-10);
      }
    }
  }
  const auto spec = DeformationSpec::standard();
  CHECK_THROWS_AS(dipole_kernel_expansion(ModelParams::from_detuning(1, 0, 0.1, 3, spec), AtomInit::excited(),
                                          build_coherent_state(spec, FieldAmplitude(1, 0)), 1.0),
                  PreconditionError);
}

TEST_CASE("bounds and uncertainty relation") {
  std::mt19937_64 rng(19);
  for (const auto& spec : q_variants()) {
    const auto c = random_case(rng, spec, 2);
    const auto samples = time_series(c.params, c.atom, c.dist, gt_grid(25.0, 400, c.params.g()));
    for (const auto& s : samples) {
      CHECK(std::abs(s.sigma1) <= 0.5 + 1e-12);
      CHECK(std::abs(s.sigma2) <= 0.5 + 1e-12);
      CHECK(std::abs(s.sigma3) <= 1.0 + 1e-12);
      const double lhs = (0.25 - s.sigma1 * s.sigma1) * (0.25 - s.sigma2 * s.sigma2);
      CHECK(lhs >= s.sigma3 * s.sigma3 / 16.0 - 1e-10);
      const auto f = squeezing_indicator(s);
      CHECK(std::abs(f.f1 - s.f1) <= 1e-12);
      CHECK(std::abs(f.f2 - s.f2) <= 1e-12);
    }
  }
}

TEST_CASE("time series contract") {
  const auto spec = DeformationSpec::penson_solomon(0.9);
  const auto params = ModelParams::from_detuning(1.0, 0.0, 0.1, 2, spec);
  const auto dist = build_coherent_state(spec, FieldAmplitude::from_z_sq(9.0));
  const AtomInit atom = AtomInit::from_alpha_sq(0.5, 0.3);

  const std::vector<double> zero{0.0};
  const auto single = time_series(params, atom, dist, zero);
  REQUIRE(single.size() == 1);
  CHECK(single[0].sigma3 == doctest::Approx(0.0).epsilon(1e-13));

  const auto grid = gt_grid(25.0, 500, 0.1);
  const auto serial = time_series(params, atom, dist, grid, 1);
  const auto parallel = time_series(params, atom, dist, grid, 7);
  const ClosedFormEvolution evo(params, atom, dist);
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  for (std::size_t i : order) {
    const auto s = evo.sample_at(grid[i]);
    CHECK(s.sigma3 == serial[i].sigma3);
    CHECK(s.sigma1 == serial[i].sigma1);
    CHECK(s.sigma2 == serial[i].sigma2);
    CHECK(parallel[i].sigma3 == serial[i].sigma3);
    CHECK(parallel[i].f1 == serial[i].f1);
  }

  const std::vector<double> bad{0.0, 2.0, 1.0};
  CHECK_THROWS_AS(time_series(params, atom, dist, bad), DomainError);
  const std::vector<double> negative{-1.0};
  CHECK_THROWS_AS(time_series(params, atom, dist, negative), DomainError);
  CHECK_THROWS_AS(time_series(params, atom, dist, std::vector<double>{}), DomainError);

  const auto other = build_coherent_state(DeformationSpec::quesne(0.9), FieldAmplitude::from_z_sq(2.0));
  CHECK_THROWS_AS(evolve_closed_form(params, atom, other, 1.0), SpecMismatch);
}
