#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "csmsn/errors.hpp"
#include "csmsn/params.hpp"
#include "csmsn/rng.hpp"

using namespace csmsn;

namespace {

CpParams make_cp(Family f, double mu, double s2, double g, std::vector<double> nu) {
  CpParams p;
  p.family = f;
  p.beta = Eigen::VectorXd::Constant(1, mu);
  p.sigma2 = s2;
  p.gamma = g;
  p.nu = std::move(nu);
  return p;
}

}  // namespace

TEST_CASE("constants evaluate to their closed forms") {
  const auto& k = constants();
  CHECK(k.b == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-15));
  CHECK(k.b > 0.797);
  CHECK(k.b < 0.798);
  // direct evaluation gives s = 1.32570...; the (1.324, 1.325) bracket that
  // circulates for this constant is off by one digit
  CHECK(k.s == doctest::Approx(std::pow(2.0 / (4.0 - M_PI), 1.0 / 3.0)).epsilon(1e-15));
  CHECK(k.s > 1.325);
  CHECK(k.s < 1.326);
  // documented skewness bound
  CHECK(std::abs(k.gamma_max - 0.99527) < 1e-5);
  CHECK(k.gamma_max == doctest::Approx(0.99527174643115604).epsilon(1e-12));
}

TEST_CASE("cp_to_dp on the symmetric case and the 0.9 reference") {
  const DpParams d0 = cp_to_dp(make_cp(Family::csn, 0.0, 1.0, 0.0, {}));
  CHECK(d0.xi == doctest::Approx(0.0));
  CHECK(d0.omega == doctest::Approx(1.0));
  CHECK(d0.lambda == doctest::Approx(0.0));

  // gamma = 0.9 -> delta = 0.9876 (reference table value, 5e-4)
  const DpParams d9 = cp_to_dp(make_cp(Family::csn, 0.0, 1.0, 0.9, {}));
  const double delta = delta_from_lambda(d9.lambda);
  CHECK(std::abs(delta - 0.9876) < 5e-4);
  CHECK(delta == doctest::Approx(0.987627483954775524).epsilon(1e-12));
  CHECK(d9.lambda == doctest::Approx(6.2979130090001611).epsilon(1e-10));

  CHECK_THROWS_AS(cp_to_dp(make_cp(Family::csn, 0.0, 1.0, 0.9952718, {})),
                  ParameterError);
  CHECK_THROWS_AS(cp_to_dp(make_cp(Family::csn, 0.0, 1.0, -0.999, {})),
                  ParameterError);
}

TEST_CASE("dp_to_cp inverts and is odd in delta") {
  DpParams d;
  d.xi = 0.0;
  d.omega = 1.0;
  d.lambda = 0.0;
  const CpParams c = dp_to_cp(d);
  CHECK(c.mu() == doctest::Approx(0.0));
  CHECK(c.sigma2 == doctest::Approx(1.0));
  CHECK(c.gamma == doctest::Approx(0.0));

  // delta = 0.9876 -> gamma = 0.8998 (0.9 to three decimals); direct
  // evaluation of the Pearson-skewness map frozen below
  CHECK(gamma_from_delta(0.9876) == doctest::Approx(0.89980179808935590).epsilon(1e-12));
  CHECK(std::abs(gamma_from_delta(0.9876) - 0.9) < 5e-4);
  CHECK(gamma_from_delta(-0.9876) == doctest::Approx(-0.89980179808935590).epsilon(1e-12));
}

TEST_CASE("work <-> cp transforms") {
  WorkParams w;
  w.beta = Eigen::VectorXd::Zero(1);
  w.Delta = 0.0;
  w.tau = 1.0;
  CHECK(w.delta() == doctest::Approx(0.0));
  CHECK(w.sigma2() == doctest::Approx(1.0));

  // delta = 0.5, sigma2 = 1 round-trips through (Delta, tau)
  CpParams c = make_cp(Family::csn, 0.0, 1.0, gamma_from_delta(0.5), {});
  const WorkParams w2 = cp_to_work(c);
  CHECK(w2.delta() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w2.sigma2() == doctest::Approx(1.0).epsilon(1e-12));
  const CpParams c2 = work_to_cp(w2, Family::csn);
  CHECK(c2.gamma == doctest::Approx(c.gamma).epsilon(1e-12));

  // csgt: sigma pinned at 1, delta = 0 gives Delta = 0, tau = 1
  const auto [D, tau] = delta_to_work_csgt(0.0);
  CHECK(D == doctest::Approx(0.0));
  CHECK(tau == doctest::Approx(1.0));
}

TEST_CASE("round-trip bijections over random valid parameters") {
  RngStream rng(321, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const double g = rng.uniform(-0.99, 0.99) * constants().gamma_max;
    const double s2 = std::exp(rng.uniform(-2.0, 2.0));
    const double mu = rng.normal(0.0, 3.0);

    Family fam;
    std::vector<double> nu;
    switch (rep % 5) {
      case 0: fam = Family::csn; break;
      case 1: fam = Family::cst; nu = {2.0 + rng.exponential(0.2)}; break;
      case 2: fam = Family::css; nu = {1.0 + rng.exponential(0.3)}; break;
      case 3: fam = Family::cscn; nu = {rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98)}; break;
      default: fam = Family::csgt; nu = {2.0 + rng.exponential(0.2), rng.exponential(0.2) + 0.1}; break;
    }
    CpParams p = make_cp(fam, mu, fam == Family::csgt ? 1.0 : s2, g, nu);

    const CpParams via_dp = dp_to_cp(cp_to_dp(p));
    CHECK(via_dp.mu() == doctest::Approx(p.mu()).epsilon(1e-10));
    CHECK(via_dp.sigma2 == doctest::Approx(p.sigma2).epsilon(1e-10));
    CHECK(via_dp.gamma == doctest::Approx(p.gamma).epsilon(1e-10));

    const CpParams via_work = work_to_cp(cp_to_work(p), fam);
    CHECK(via_work.sigma2 == doctest::Approx(p.sigma2).epsilon(1e-10));
    CHECK(via_work.gamma == doctest::Approx(p.gamma).epsilon(1e-10));
  }
}

TEST_CASE("gamma -> lambda is strictly increasing; delta stays inside (-1,1)") {
  const double gmax = constants().gamma_max;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    const double g = -gmax + 2.0 * gmax * (i + 0.5) / 1000.0;
    const DpParams d = cp_to_dp(make_cp(Family::csn, 0.0, 1.0, g, {}));
    CHECK(d.lambda > prev);
    prev = d.lambda;
    const double delta = delta_from_lambda(d.lambda);
    CHECK(delta > -1.0);
    CHECK(delta < 1.0);
    CHECK(d.lambda == doctest::Approx(lambda_from_delta(delta)).epsilon(1e-9));
  }
  // gamma(delta) approaches the bound only as delta -> 1
  CHECK(gamma_from_delta(0.99) < gmax);
  CHECK(gamma_from_delta(1.0 - 1e-9) == doctest::Approx(gmax).epsilon(1e-6));
  CHECK(std::abs(gamma_from_delta(1.0 - 1e-9)) < gmax);
}

TEST_CASE("validation is strict-reject") {
  CHECK_THROWS_AS(validate(make_cp(Family::csn, 0.0, -1.0, 0.0, {})), ParameterError);
  CHECK_THROWS_AS(validate(make_cp(Family::cst, 0.0, 1.0, 0.0, {2.0})), ParameterError);
  CHECK_THROWS_AS(validate(make_cp(Family::css, 0.0, 1.0, 0.0, {1.0})), ParameterError);
  CHECK_THROWS_AS(validate(make_cp(Family::cscn, 0.0, 1.0, 0.0, {0.5})), ParameterError);
  CHECK_THROWS_AS(validate(make_cp(Family::cscn, 0.0, 1.0, 0.0, {1.2, 0.5})), ParameterError);
  CHECK_THROWS_AS(validate(make_cp(Family::csgt, 0.0, 2.0, 0.0, {5.0, 1.0})), ParameterError);
  CHECK_NOTHROW(validate(make_cp(Family::csgt, 0.0, 1.0, 0.0, {5.0, 1.0})));
  CHECK_THROWS_AS(family_from_name("weird"), ConfigError);
  CHECK(family_from_name("cscn") == Family::cscn);
}
