#include <catch_amalgamated.hpp>

#include <cmath>

#include "zitterdyn/dynamics.hpp"
#include "zitterdyn/errors.hpp"
#include "zitterdyn/retardation.hpp"

using namespace zitterdyn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ModelParams P = make_params(1.0, UnitMode::Dimensionless);

// Independent route: on shell the reception lies l = r beta + gamma^2 bdot d ahead, and
// r^2 = l^2 + d^2. Positive root of (1 - beta^2) r^2 - 2 beta k r - (k^2 + d^2) = 0.
long double quadratic_delay(long double beta, long double bdot) {
  const long double g2 = 1.0L / (1.0L - beta * beta);
  const long double k = g2 * bdot;
  const long double disc = beta * beta * k * k + (1.0L - beta * beta) * (k * k + 1.0L);
  return (beta * k + std::sqrt(disc)) * g2;
}

}  // namespace

TEST_CASE("closed-form delay examples") {
  CHECK(delay_closed_form(0.0, 0.0, P) == 1.0);
  CHECK_THAT(delay_closed_form(0.5, 0.0, P), WithinRel(1.1547005383792515, 1e-15));
  CHECK_THAT(delay_closed_form(0.6, 0.1, P), WithinRel(1.420103095330142848752649, 1e-14));
  CHECK_THROWS_AS(delay_closed_form(1.0, 0.0, P), InvalidArgument);
}

TEST_CASE("closed-form delay agrees with the light-cone quadratic") {
  for (int i = 0; i <= 40; ++i) {
    for (int j = -20; j <= 20; ++j) {
      const double b = -0.98 + 1.96 * i / 40.0;
      const double bd = j / 20.0;
      CHECK_THAT(delay_closed_form(b, bd, P), WithinRel(static_cast<double>(quadratic_delay(b, bd)), 1e-12));
    }
  }
}

TEST_CASE("delay scales with d") {
  const ModelParams p2 = make_params(3.0, UnitMode::Dimensionless);
  CHECK_THAT(delay_closed_form(0.6, 0.1, p2), WithinRel(3.0 * 1.420103095330142848752649, 1e-14));
}

TEST_CASE("separation examples") {
  CHECK(separation_l(0.0, 0.0, P) == 0.0);
  CHECK_THAT(separation_l(0.6, 0.0, P), WithinRel(0.75, 1e-15));
  CHECK_THAT(separation_l(0.6, 0.1, P), WithinRel(1.008311857198085709251590, 1e-14));
  CHECK_THAT(signed_separation(0.6, 0.1, P), WithinRel(1.008311857198085709251590, 1e-14));
}

TEST_CASE("pythagorean identity on the 50x50 grid") {
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double b = 0.99 * i / 49.0;
      const double bd = j / 49.0;
      const double r = delay_closed_form(b, bd, P);
      const double l = separation_l(b, bd, P);
      REQUIRE(std::abs(r * r - l * l - 1.0) <= 1e-12 * r * r);
    }
  }
}

TEST_CASE("delay is at least d and grows with |bdot|") {
  for (int i = 0; i < 30; ++i) {
    const double b = 0.99 * i / 29.0;
    double prev = delay_closed_form(b, 0.0, P);
    REQUIRE(prev >= 1.0);
    for (int j = 1; j <= 50; ++j) {
      const double r = delay_closed_form(b, j / 50.0, P);
      REQUIRE(r >= 1.0);
      REQUIRE(r > prev);
      prev = r;
    }
  }
}

TEST_CASE("mirror symmetry x -> -x") {
  for (double b : {0.1, 0.5, 0.9}) {
    for (double bd : {0.05, 0.3, 1.0}) {
      CHECK_THAT(delay_closed_form(-b, -bd, P), WithinRel(delay_closed_form(b, bd, P), 1e-15));
      CHECK_THAT(signed_separation(-b, -bd, P), WithinRel(-signed_separation(b, bd, P), 1e-15));
      CHECK_THAT(separation_l(-b, bd, P), WithinRel(std::abs(signed_separation(-b, bd, P)), 1e-9));
    }
  }
}

TEST_CASE("light-cone solve on rest and uniform motion") {
  const auto rest = uniform_history(0.0, -5.0, 1.0, P);
  for (double t : {-2.0, 0.0, 0.7}) {
    const auto dr = solve_retarded_time(rest, t, P);
    CHECK_THAT(dr.r, WithinAbs(1.0, 1e-12));
    CHECK_THAT(t - dr.t_r, WithinAbs(1.0, 1e-12));
    CHECK(dr.residual < 1e-12);
  }
  for (double b : {0.3, 0.5, 0.9, -0.6}) {
    const auto h = uniform_history(b, -10.0, 1.0, P);
    const auto dr = solve_retarded_time(h, 0.5, P);
    CHECK_THAT(dr.r, WithinAbs(lorentz_gamma(b), 1e-11));
    CHECK_THAT(dr.l, WithinAbs(b * lorentz_gamma(b), 1e-11));
    CHECK(dr.r >= 1.0);
  }
}

TEST_CASE("light-cone solve errors") {
  const auto h = uniform_history(0.0, 0.0, 3.0, P);
  CHECK_THROWS_AS(solve_retarded_time(h, 0.5, P), NumericalFailure);
  CHECK_THROWS_AS(solve_retarded_time(h, 4.0, P), NumericalFailure);
  try {
    solve_retarded_time(h, 0.5, P);
  } catch (const NumericalFailure& e) {
    CHECK(e.kind() == FailureKind::HistoryTooShort);
  }
}

TEST_CASE("light-cone solve matches the closed form on propagated trajectories") {
  const RootSet rs = find_roots(0.0, {-1.0, 10.0, -12.0, 12.0}, 40);
  const auto seed = perturbed_history(0.0, -2.0, 0.0, P, 1.0 / 64.0, mode_mix(random_modes(rs, 1e-5, 3), 0.0, 0.0, P));
  PropagationOptions o;
  o.reference_velocity = 0.0;
  o.max_deviation = 1e-4;
  const auto rep = propagate(seed, 2.5, 1.0 / 64.0, P, o);
  for (double t = rep.first_image_time + 1.05; t < rep.trajectory.t_max(); t += 0.0917) {
    const auto dr = solve_retarded_time(rep.trajectory, t, P);
    const auto e = rep.trajectory.at(dr.t_r);
    CHECK_THAT(dr.r, WithinAbs(delay_closed_form(e.v, e.a, P), 1e-11));
  }
}

TEST_CASE("delay variation") {
  CHECK(delay_variation(0.0, P, 123.0, 0.0) == 0.0);
  CHECK_THAT(delay_variation(0.6, P, 1.0, 0.0), WithinRel(1.46484375, 1e-15));
  CHECK_THAT(delay_variation(0.6, P, 0.0, 0.01), WithinRel(0.01, 1e-15));
  CHECK_THROWS_AS(delay_variation(1.0, P, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("delay variation equals central differences of the closed form") {
  for (double b : {0.2, 0.5, 0.8}) {
    // d r / d vdot at vdot = 0 (bdot = vdot with d = c = 1).
    const double h = 1e-3;
    const double fd = (delay_closed_form(b, h, P) - delay_closed_form(b, -h, P)) / (2 * h);
    CHECK_THAT(fd, WithinAbs(delay_variation(b, P, 1.0, 0.0), 1e-9));
    // d r / d gamma at bdot = 0.
    const double g = lorentz_gamma(b);
    const double hg = 1e-4;
    auto r_of_gamma = [](double gg) { return delay_closed_form(std::sqrt(1.0 - 1.0 / (gg * gg)), 0.0, P); };
    const double fdg = (r_of_gamma(g + hg) - r_of_gamma(g - hg)) / (2 * hg);
    CHECK_THAT(fdg, WithinAbs(delay_variation(b, P, 0.0, 1.0), 1e-7));
  }
}
