#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "zitterdyn/constants.hpp"
#include "zitterdyn/dynamics.hpp"
#include "zitterdyn/errors.hpp"
#include "zitterdyn/invariants.hpp"
#include "zitterdyn/retardation.hpp"
#include "zitterdyn/selfforce.hpp"

using namespace zitterdyn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ModelParams P = make_params(1.0, UnitMode::Dimensionless);

// Independent vector evaluation of the retarded field of a source of charge q:
// E = q/(8 pi eps0) * R/(R.u)^3 * [u (1 - beta^2) + R x (u x a) / c^2], with R = (l, d).
void field_oracle(double l, double r, double beta, double a, double pref, double& ex, double& ey) {
  const double R[2] = {l, 1.0};
  const double u[2] = {l / r - beta, 1.0 / r};
  const double Ru = R[0] * u[0] + R[1] * u[1];
  // u x a with a along x is -u_y a z_hat; R x (that) = (R_y * (-(-u_y a)) ..) computed componentwise in 3D.
  const double w[3] = {0.0, 0.0, -u[1] * a};           // u x a
  const double Rxw[3] = {R[1] * w[2], -R[0] * w[2], 0.0};  // R x w
  const double k = r / (Ru * Ru * Ru);
  ex = pref * k * (u[0] * (1 - beta * beta) + Rxw[0]);
  ey = pref * k * (u[1] * (1 - beta * beta) + Rxw[1]);
}

}  // namespace

TEST_CASE("static Coulomb geometry") {
  const auto f = lw_field(0.0, 1.0, 0.0, 0.0, P);
  CHECK(f.E_x == 0.0);
  // Source charge -e: magnitude e/(8 pi eps0 d^2) = 2 in these units, pointing toward the source.
  CHECK_THAT(f.E_y, WithinRel(-2.0, 1e-15));
  CHECK(f.radiation_part.x == 0.0);
  CHECK(f.radiation_part.y == 0.0);
}

TEST_CASE("radiation field at rest") {
  const double a = 0.7;
  const auto f = lw_field(0.0, 1.0, 0.0, a, P);
  CHECK_THAT(f.E_x, WithinRel(2.0 * a, 1e-15));
  CHECK_THAT(f.E_x, WithinRel(f.radiation_part.x, 1e-15));
}

TEST_CASE("field parts sum to the total") {
  const auto f = lw_field(0.4, std::sqrt(1.16), 0.3, -1.2, P);
  // Totals are bracketed before scaling, so they match the sum to rounding.
  CHECK_THAT(f.E_x, WithinRel(f.velocity_part.x + f.radiation_part.x, 1e-14));
  CHECK_THAT(f.E_y, WithinRel(f.velocity_part.y + f.radiation_part.y, 1e-14));
}

TEST_CASE("field agrees with a vector-algebra oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ub(-0.95, 0.95), ua(-3, 3), ul(-4, 4);
  for (int i = 0; i < 1000; ++i) {
    const double b = ub(rng), a = ua(rng), l = ul(rng);
    const double r = std::sqrt(l * l + 1.0);
    double ex = 0, ey = 0;
    field_oracle(l, r, b, a, -2.0, ex, ey);
    const auto f = lw_field(l, r, b, a, P);
    CHECK_THAT(f.E_x, WithinAbs(ex, 1e-12 * (std::abs(ex) + std::abs(ey))));
    CHECK_THAT(f.E_y, WithinAbs(ey, 1e-12 * (std::abs(ex) + std::abs(ey))));
  }
}

TEST_CASE("self-force equals -e E_x on 10^4 random inputs") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ub(-0.99, 0.99), ua(-5, 5), ul(-10, 10);
  for (int i = 0; i < 10000; ++i) {
    const double b = ub(rng), a = ua(rng), l = ul(rng);
    const double r = std::sqrt(l * l + 1.0);
    const double f = self_force(l, r, b, a, P);
    const double e = -P.e_charge * lw_field(l, r, b, a, P).E_x;
    REQUIRE(std::abs(f - e) <= 1e-12 * std::abs(f));
  }
}

TEST_CASE("self-force examples") {
  for (int i = 0; i <= 99; ++i) {
    const double b = 0.99 * i / 99.0;
    const double r = lorentz_gamma(b);
    CHECK(std::abs(self_force(b * r, r, b, 0.0, P)) <= 1e-15);
  }
  for (double a : {-3.0, -0.01, 0.01, 3.0}) {
    const double f = self_force(0.0, 1.0, 0.0, a, P);
    CHECK_THAT(f, WithinRel(-2.0 * a, 1e-15));
    CHECK(f * a < 0.0);
  }
}

TEST_CASE("self-force geometry errors") {
  CHECK_THROWS_AS(self_force(0.0, 0.5, 0.0, 0.0, P), InvalidArgument);
  CHECK_THROWS_AS(self_force(0.0, 1.0, 1.0, 0.0, P), InvalidArgument);
  CHECK_THROWS_AS(lw_field(0.0, 0.9, 0.0, 0.0, P), InvalidArgument);
  // r - l beta <= 0 needs l beta >= r, impossible with |beta| < 1 on the light cone; force it.
  CHECK_THROWS_AS(self_force(10.0, 5.0, 0.6, 0.0, P), NumericalFailure);
}

TEST_CASE("SI coupling matches e^2 / (8 pi eps0)") {
  const ModelParams si = make_params(electron_scale_separation(), UnitMode::SI);
  const double k = codata::elementary_charge * codata::elementary_charge / (8 * codata::pi * codata::vacuum_permittivity);
  CHECK_THAT(self_force(0.0, si.d, 0.0, 1.0, si), WithinRel(-k / (si.c * si.c * si.d), 1e-15));
  // Dimensionless identity e^2 / (8 pi eps0) = 2 m_e c^2 d holds in SI to the CODATA consistency of alpha.
  CHECK_THAT(k, WithinRel(2 * si.m_e * si.c * si.c * si.d, 1e-9));
}

TEST_CASE("equation-of-motion residual") {
  for (double b : {0.0, 0.3, 0.9}) {
    const double r = lorentz_gamma(b);
    const KinematicState e{0.0, 1.0, b, 0.0};
    CHECK(std::abs(eom_residual(e, 1.0 + b * r, r, P)) <= 1e-15);
  }
  const KinematicState acc{0.0, 0.5, 0.0, 0.3};
  CHECK_THAT(eom_residual(acc, 0.5, 1.0, P), WithinRel(0.3, 1e-15));
  // Coefficient of the acceleration is d^2 / c^2.
  const ModelParams p3 = make_params(3.0, UnitMode::Dimensionless);
  CHECK_THAT(eom_residual(acc, 0.5, 3.0, p3), WithinRel(9.0 * 0.3, 1e-15));
}

TEST_CASE("residual vanishes exactly when the self-force does") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ub(-0.9, 0.9), ua(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const KinematicState e{0.0, 0.0, ub(rng), ua(rng)};
    const auto arr = advance_map(e, P);
    const double l = arr.x - e.x;
    CHECK(std::abs(eom_residual(e, arr.x, arr.r, P)) < 1e-14);
    CHECK(std::abs(self_force(l, arr.r, e.v, e.a, P)) < 1e-13);
  }
}

TEST_CASE("residual of a propagated trajectory sampled mid-run") {
  const RootSet rs = find_roots(0.0, {-1.0, 10.0, -12.0, 12.0}, 40);
  const auto seed =
      perturbed_history(0.0, -2.0, 0.0, P, 1.0 / 128.0, mode_mix(random_modes(rs, 1e-6, 9), 0.0, 0.0, P));
  PropagationOptions o;
  o.reference_velocity = 0.0;
  o.max_deviation = 1e-4;
  const auto rep = propagate(seed, 2.5, 1.0 / 128.0, P, o);
  // Independent check: light-cone emission time, interpolated states, direct substitution.
  const double worst = max_lightcone_residual(rep.trajectory, rep.first_image_time + 1.0, rep.trajectory.t_max(), P);
  CHECK(worst < 1e-8);
}

TEST_CASE("electromagnetic mass") {
  CHECK(electromagnetic_mass(P) == 1.0);
  const ModelParams si = make_params(7.045e-16, UnitMode::SI);
  CHECK_THAT(electromagnetic_mass(si), WithinRel(9.109e-31, 1e-3));
  const ModelParams si_e = make_params(electron_scale_separation(), UnitMode::SI);
  CHECK_THAT(electromagnetic_mass(si_e), WithinRel(9.109e-31, 1e-4));
  const ModelParams si2 = make_params(2 * electron_scale_separation(), UnitMode::SI);
  CHECK_THAT(electromagnetic_mass(si2), WithinRel(0.5 * electromagnetic_mass(si_e), 1e-15));
}
