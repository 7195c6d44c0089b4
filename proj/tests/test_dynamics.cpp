#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "parablock/dynamics.hpp"
#include "parablock/errors.hpp"
#include "parablock/generic_model.hpp"

using namespace parablock;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("free decay of a single photon is exponential") {
  const FockSpace s({4});
  const Operator a = annihilation(4);
  const double kappa = 0.8;
  const Generator gen(build_liouvillian(Operator::zero(s), {{a, kappa}}));
  const int one[] = {1};
  const auto t = linspace(0.0, 10.0, 41);
  const Evolution ev =
      evolve(DensityMatrix::fock_state(s, one), gen, t, {{"n", a.dagger() * a}});
  const Series& n = ev.trace.column("n");
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(*n[i] == doctest::Approx(std::exp(-kappa * t[i])).epsilon(1e-7));
  CHECK(ev.max_trace_drift < 1e-8);
}

TEST_CASE("driven cavity amplitude follows the damped-driven closed form") {
  const int d = 14;
  const FockSpace s({d});
  const double delta = 0.7, f = 0.4, kappa = 1.0;
  const Operator a = annihilation(d);
  const Operator ad = a.dagger();
  const Operator h = Complex{delta} * (ad * a) + Complex{f} * (ad + a);
  const Generator gen(build_liouvillian(h, {{a, kappa}}));
  const auto t = linspace(0.0, 8.0, 33);
  const Operator x = ad + a;
  const Operator p = Complex{0.0, 1.0} * (ad - a);
  const Evolution ev = evolve(DensityMatrix::vacuum(s), gen, t, {{"x", x}, {"p", p}});

  const Complex z{kappa / 2, delta};
  const Complex ass = Complex{0.0, -f} / z;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Complex alpha = ass * (1.0 - std::exp(-z * t[i]));
    CHECK(*ev.trace.column("x")[i] == doctest::Approx(2 * alpha.real()).epsilon(1e-6));
    CHECK(*ev.trace.column("p")[i] == doctest::Approx(2 * alpha.imag()).epsilon(1e-6));
  }
}

TEST_CASE("long evolution converges to the steady state") {
  generic::ReducedParams rp;
  rp.alpha = 0.8;
  rp.F2 = 0.3;
  rp.Delta2 = 0.2;
  const FockSpace s({5, 4});
  const Liouvillian l =
      build_liouvillian(generic::build_reduced_hamiltonian(rp, s), generic::reduced_channels(rp, s));
  const SteadyState ss = steady_state(l);
  const std::vector<double> t{0.0, 80.0};
  const Evolution ev = evolve(DensityMatrix::vacuum(s), Generator(l), t, {});
  CHECK((ev.final_state.matrix() - ss.rho.matrix()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("evolution matches the exact propagator of a dense generator") {
  generic::ReducedParams rp;
  rp.alpha = 1.3;
  rp.F2 = 0.5;
  rp.Delta3 = -0.4;
  const FockSpace s({3, 3});
  const Liouvillian l =
      build_liouvillian(generic::build_reduced_hamiltonian(rp, s), generic::reduced_channels(rp, s));
  const Matrix dense(l.matrix());
  const std::vector<double> t{0.0, 0.5, 2.0, 5.0};
  const Evolution ev = evolve(DensityMatrix::vacuum(s), Generator(l), t, {});
  const Vector v0 = vectorize(DensityMatrix::vacuum(s).matrix());
  const Vector ref = oracle::expm(dense * 5.0) * v0;
  CHECK((vectorize(ev.final_state.matrix()) - ref).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("a constant envelope reproduces the static drive") {
  const int d = 8;
  const FockSpace s({d});
  const Operator a = annihilation(d);
  const Operator drive = a.dagger() + a;
  const double f = 0.35;
  const TimeDependentHamiltonian pulsed{Complex{0.2} * (a.dagger() * a), {{drive, [f](double) { return f; }}}};
  const Generator g_pulsed(pulsed, {{a, 1.0}});
  const Generator g_static(build_liouvillian(Complex{0.2} * (a.dagger() * a) + Complex{f} * drive, {{a, 1.0}}));
  CHECK(g_pulsed.time_dependent());
  const auto t = linspace(0.0, 6.0, 13);
  const Operator n = a.dagger() * a;
  const Evolution e1 = evolve(DensityMatrix::vacuum(s), g_pulsed, t, {{"n", n}});
  const Evolution e2 = evolve(DensityMatrix::vacuum(s), g_static, t, {{"n", n}});
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(*e1.trace.column("n")[i] == doctest::Approx(*e2.trace.column("n")[i]).epsilon(1e-12));
}

TEST_CASE("evolve validates its inputs") {
  const FockSpace s({3});
  const Generator gen(build_liouvillian(Operator::zero(s), {{annihilation(3), 1.0}}));
  const std::vector<double> bad{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(evolve(DensityMatrix::vacuum(s), gen, bad, {}), InvalidArgument);
  const std::vector<double> ok{0.0, 1.0};
  CHECK_THROWS_AS(evolve(DensityMatrix::vacuum(FockSpace({4})), gen, ok, {}), InvalidArgument);
}

TEST_CASE("equal-time g2 of reference states") {
  const FockSpace s({40});
  const Operator a = annihilation(40);
  const int one[] = {1};
  const int two[] = {2};
  CHECK(g2_equal_time(DensityMatrix::fock_state(s, one), a) == 0.0);
  CHECK(g2_equal_time(DensityMatrix::fock_state(s, two), a) == doctest::Approx(0.5));
  const DensityMatrix coh = DensityMatrix::pure(s, coherent_amplitudes(40, Complex{1.1, -0.4}));
  CHECK(g2_equal_time(coh, a) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(g2_equal_time(DensityMatrix::vacuum(s), a), UndefinedCorrelation);
}

TEST_CASE("two-time g2 by quantum regression") {
  generic::ReducedParams rp;
  rp.alpha = 1.0;
  rp.F2 = 0.05;
  const FockSpace s({5, 4});
  const Liouvillian l =
      build_liouvillian(generic::build_reduced_hamiltonian(rp, s), generic::reduced_channels(rp, s));
  const SteadyState ss = steady_state(l);
  const Operator a2 = embed(annihilation(5), 0, s);
  const double g0 = g2_equal_time(ss.rho, a2);

  const std::vector<double> taus{0.0, 0.5, 1.0, 2.0, 4.0, 10.0, 15.0, 20.0};
  const auto g = g2_two_time(ss.rho, a2, l, taus);
  REQUIRE(g.size() == taus.size());
  CHECK(std::abs(g.front().second - g0) < 1e-9);
  // Amplitudes relax at kappa/2, so tau >= 20 / kappa.
  CHECK(std::abs(g[7].second - 1.0) < 1e-3);

  SUBCASE("regression equals a restart from the conditioned state") {
    const Operator ad = a2.dagger();
    const double n = expectation(ss.rho, ad * a2).real();
    Matrix cond = a2.matrix() * ss.rho.matrix() * ad.matrix();
    cond /= cond.trace();
    for (std::size_t k = 1; k < taus.size(); ++k) {
      const std::vector<double> grid{0.0, taus[k]};
      const Evolution ev = evolve(DensityMatrix(s, cond), Generator(build_liouvillian(
                                      generic::build_reduced_hamiltonian(rp, s),
                                      generic::reduced_channels(rp, s))),
                                  grid, {{"n", ad * a2}});
      const double restart = *ev.trace.column("n").back() / n;
      CHECK(restart == doctest::Approx(g[k].second).epsilon(1e-6));
    }
  }
}
