#include <doctest.h>

#include <cmath>

#include "parablock/dynamics.hpp"
#include "parablock/errors.hpp"
#include "parablock/generic_model.hpp"

using namespace parablock;
using namespace parablock::generic;

TEST_CASE("mean-field occupation") {
  CHECK(mean_field_occupation(30.0, 0.0, 1.0) == doctest::Approx(3600.0).epsilon(1e-15));
  CHECK(mean_field_occupation(0.0, 0.3, 1.0) == 0.0);
  CHECK(mean_field_occupation(30.0, 0.5, 1.0) == doctest::Approx(1800.0).epsilon(1e-15));
  CHECK_THROWS_AS(mean_field_occupation(1.0, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("classical amplitude dynamics") {
  std::vector<double> t;
  for (int i = 0; i <= 60; ++i) t.push_back(i);

  SUBCASE("linear limit converges to the mean-field occupation") {
    ModelParams p;
    p.P1 = 4.0;
    p.E1 = 0.3;
    const AmplitudeTrajectory tr = mean_field_dynamics(p, t);
    CHECK(std::norm(tr.a1.back()) ==
          doctest::Approx(mean_field_occupation(4.0, 0.3, 1.0)).epsilon(1e-8));
  }
  SUBCASE("strong pump with weak alpha0 leaves modes 2 and 3 empty") {
    ModelParams p;
    p.P1 = 30.0;
    p.alpha0 = 1e-3;
    const AmplitudeTrajectory tr = mean_field_dynamics(p, t);
    const double n1 = std::norm(tr.a1.back());
    CHECK(n1 == doctest::Approx(3600.0).epsilon(0.01));
    CHECK(std::norm(tr.a2.back()) / n1 < 1e-6);
    CHECK(std::norm(tr.a3.back()) / n1 < 1e-6);
  }
  SUBCASE("no pumps, nothing happens") {
    ModelParams p;
    p.alpha0 = 0.5;
    const AmplitudeTrajectory tr = mean_field_dynamics(p, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(tr.a1[i] == Complex{});
      CHECK(tr.a2[i] == Complex{});
      CHECK(tr.a3[i] == Complex{});
    }
  }
  SUBCASE("seeded parametric conversion feeds mode 3") {
    // With both pumps on, a3 grows only through the alpha0 a1^* a2^2 term.
    ModelParams p;
    p.P1 = 5.0;
    p.F2 = 0.5;
    p.alpha0 = 0.01;
    const AmplitudeTrajectory tr = mean_field_dynamics(p, t);
    CHECK(std::abs(tr.a3.back()) > 0.0);
    p.alpha0 = 0.0;
    CHECK(std::abs(mean_field_dynamics(p, t).a3.back()) == 0.0);
  }
}

TEST_CASE("reduction keeps alpha = alpha0 sqrt(n1) and the detuning identity") {
  ModelParams p;
  p.E1 = -1.3;
  p.E2 = 0.4;
  p.E3 = 2.9;
  p.E_P1 = -1.1;
  p.E_F2 = 0.55;
  p.P1 = 12.0;
  p.alpha0 = 0.002;
  p.F2 = 0.1;
  const ReducedParams rp = reduce(p);
  CHECK(rp.alpha == p.alpha0 * std::sqrt(rp.n1));
  CHECK(rp.Delta1 == doctest::Approx(p.E1 - p.E_P1));
  CHECK(rp.Delta2 == doctest::Approx(p.E2 - p.E_F2));
  CHECK(rp.Delta3 ==
        doctest::Approx((p.E3 + p.E1 - 2 * p.E2) - rp.Delta1 + 2 * rp.Delta2).epsilon(1e-14));
  p.kappa2 = 0.0;
  CHECK_THROWS_AS(reduce(p), InvalidArgument);
}

TEST_CASE("reduced Hamiltonian matrix elements") {
  const FockSpace s({4, 3});
  ReducedParams rp;
  rp.Delta2 = 0.7;
  rp.Delta3 = -0.2;
  SUBCASE("diagonal without coupling or drive") {
    const Operator h = build_reduced_hamiltonian(rp, s);
    for (int i = 0; i < s.total_dim(); ++i) {
      const auto occ = s.occupations(i);
      CHECK(h(i, i).real() == doctest::Approx(0.7 * occ[0] - 0.2 * occ[1]));
      for (int j = 0; j < s.total_dim(); ++j)
        if (j != i) CHECK(h(i, j) == Complex{});
    }
  }
  SUBCASE("parametric element and Hermiticity") {
    rp.alpha = 0.37;
    rp.F2 = 0.11;
    const Operator h = build_reduced_hamiltonian(rp, s);
    const int n01[] = {0, 1};
    const int n20[] = {2, 0};
    CHECK(h(s.index(n01), s.index(n20)).real() == doctest::Approx(std::sqrt(2.0) * 0.37));
    CHECK(h.hermiticity_error() == 0.0);
  }
  CHECK_THROWS_AS(build_reduced_hamiltonian(rp, FockSpace({3})), InvalidArgument);
}

TEST_CASE("analytic g2") {
  CHECK(analytic_g2(0.0, 1.0) == 1.0);
  CHECK(analytic_g2(0.5, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(analytic_g2(1.0, 1.0) == doctest::Approx(0.04).epsilon(1e-15));
  double prev = analytic_g2(1e-3, 1.0);
  for (double a = 2e-3; a < 10.0; a *= 1.1) {
    const double g = analytic_g2(a, 1.0);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("weak-pump numerics follow the analytic g2") {
  for (double alpha : {0.1, 0.25, 0.5, 1.0, 2.0, 5.0}) {
    ReducedParams rp;
    rp.alpha = alpha;
    rp.F2 = 0.01;
    const SteadyObservables so = solve_steady(rp, 6, 6);
    REQUIRE(so.g2.has_value());
    CHECK(*so.g2 == doctest::Approx(analytic_g2(alpha, 1.0)).epsilon(0.02));
  }
}

TEST_CASE("two-photon amplitude is suppressed as i kappa / (2 sqrt 2 alpha)") {
  for (double alpha : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    ReducedParams rp;
    rp.alpha = alpha;
    rp.F2 = 0.01;
    const FockSpace s({6, 6});
    const SteadyObservables so = solve_steady(rp, 6, 6);
    const int n00[] = {0, 0};
    const int n20[] = {2, 0};
    const int n01[] = {0, 1};
    const Complex r20 = so.rho(s.index(n20), s.index(n00));
    const Complex r01 = so.rho(s.index(n01), s.index(n00));
    const double expected = 1.0 / (2.0 * std::sqrt(2.0) * alpha);
    CHECK(std::abs(r20) / std::abs(r01) == doctest::Approx(expected).epsilon(0.05));
    // Phase: A20 / A01 = +i * |.|
    const Complex ratio = r20 / r01;
    CHECK(std::abs(ratio.real()) < 0.05 * std::abs(ratio));
    CHECK(ratio.imag() > 0.0);
  }
}
