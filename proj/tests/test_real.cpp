#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eds/errors.hpp"
#include "eds/primes.hpp"
#include "eds/real_mp.hpp"
#include "eds/real_signs.hpp"
#include "eds/sequence.hpp"

#include <cmath>

using namespace eds;

namespace {
PointQ pt(long x, long y) {
    return PointQ::make_affine(mpq_class(x), mpq_class(y));
}

// |v - decimal literal| < 10^-tolexp
bool close_to(const MpReal& v, const char* literal, long tolexp) {
    MpReal ref(v.precision()), tol(v.precision());
    REQUIRE(mpfr_set_str(ref.raw(), literal, 10, MPFR_RNDN) == 0);
    MpReal ten = MpReal::of(10L, v.precision());
    mpfr_pow_si(tol.raw(), ten.raw(), -tolexp, MPFR_RNDN);
    return abs(v - ref) < tol;
}

// distance of a-b to the nearest integer, as a double
double circle_dist(const MpReal& a, const MpReal& b) {
    return dist_to_integer(a - b).to_double();
}
}  // namespace

TEST_CASE("arbitrary-precision wrapper basics") {
    MpReal a = MpReal::of(mpq_class(1, 3), 128);
    MpReal b = MpReal::of(2.5, 128);
    CHECK((a + b).to_double() == doctest::Approx(2.8333333333).epsilon(1e-9));
    CHECK((b * b).to_double() == doctest::Approx(6.25));
    CHECK((-a).sign() == -1);
    CHECK(frac01(MpReal::of(-0.25, 64)).to_double() == doctest::Approx(0.75));
    CHECK(floor_long(MpReal::of(-0.25, 64)) == -1);
    CHECK(floor_long(MpReal::of(3.75, 64)) == 3);
    CHECK(dist_to_integer(MpReal::of(2.25, 64)).to_double() == doctest::Approx(0.25));
    CHECK(abs(MpReal::of(-7L, 64)).to_double() == 7.0);
}

TEST_CASE("real period and elliptic log: split multiplicative data") {
    auto c = new_curve(0, 0, 1, -1, 0);
    auto rl = real_period_and_log(c, pt(1, 0), 64);
    CHECK(close_to(rl.omega, "2.9934586462319596298", 18));
    CHECK(close_to(rl.t, "0.6210827174482788", 15));

    // Off the identity component the log is taken of the double.
    auto rl0 = real_period_and_log(c, pt(0, 0), 64);
    CHECK(close_to(rl0.t, "0.6210827174482788", 15));

    // Identity of the group maps to t = 0.
    auto rlO = real_period_and_log(c, PointQ::make_infinity(), 64);
    CHECK(rlO.t.sign() == 0);
    CHECK(close_to(rlO.omega, "2.9934586462319596298", 18));
}

TEST_CASE("real period and elliptic log: one real root") {
    auto c = new_curve(0, 0, 0, 0, -2);
    auto rl = real_period_and_log(c, pt(3, 5), 64);
    CHECK(close_to(rl.omega, "2.1636817490137510094722028256973585285023829109045", 45));
    CHECK(close_to(rl.t, "0.73170708904856151316021809987054513301552", 38));
}

TEST_CASE("elliptic log is a homomorphism on the identity component") {
    auto c37 = new_curve(0, 0, 1, -1, 0);
    auto cneg = new_curve(0, 0, 0, 0, -2);
    struct Probe {
        CurveQ c;
        PointQ base;
    };
    for (const Probe& pr : {Probe{c37, pt(1, 0)}, Probe{cneg, pt(3, 5)}}) {
        auto base = real_period_and_log(pr.c, pr.base, 48);
        for (long m = 2; m <= 20; ++m) {
            PointQ Q = mul(pr.c, m, pr.base);
            REQUIRE(is_on_identity_component(pr.c, Q));
            auto rm = real_period_and_log(pr.c, Q, 48);
            MpReal scaled = MpReal::of(m, base.t.precision()) * base.t;
            CHECK(circle_dist(scaled, rm.t) < 1e-40);
        }
    }
}

TEST_CASE("precision validation") {
    auto c = new_curve(0, 0, 1, -1, 0);
    CHECK_THROWS_AS(real_period_and_log(c, pt(1, 0), 4), ConfigError);
    // Higher precision refines, and the round-trip check stays satisfied.
    auto lo = real_period_and_log(c, pt(1, 0), 32);
    auto hi = real_period_and_log(c, pt(1, 0), 160);
    CHECK(std::abs(lo.t.to_double() - hi.t.to_double()) < 1e-14);
}

TEST_CASE("sign data fits") {
    auto c37 = new_curve(0, 0, 1, -1, 0);

    EdsSequence off(c37, pt(0, 0));
    auto sd_off = fit_sign_data(off, 60);
    CHECK(sd_off.component_branch == ComponentBranch::NonIdentity);
    CHECK(sd_off.sigma == 1);
    CHECK(sd_off.beta.to_double() == doctest::Approx(-0.3105413587241394).epsilon(1e-12));
    CHECK(sd_off.matched_window == 60);

    EdsSequence on(c37, pt(1, 0));
    auto sd_on = fit_sign_data(on, 60);
    CHECK(sd_on.component_branch == ComponentBranch::Identity);
    CHECK(sd_on.sigma == 1);
    CHECK(sd_on.beta.to_double() == doctest::Approx(0.3789172825517212).epsilon(1e-12));
    CHECK(sd_on.beta.sign() > 0);
    CHECK(sd_on.beta < MpReal::of(1L, 64));

    EdsSequence ex17(new_curve(0, -1, 0, -6, 0), pt(-1, 2));
    auto sd17 = fit_sign_data(ex17, 60);
    CHECK(sd17.component_branch == ComponentBranch::NonIdentity);
    CHECK(close_to(sd17.beta, "-0.2298112104143457059", 18));

    EdsSequence neg(new_curve(0, 0, 0, 0, -2), pt(3, 5));
    auto sd_neg = fit_sign_data(neg, 60);
    CHECK(sd_neg.component_branch == ComponentBranch::Identity);
    CHECK(close_to(sd_neg.beta, "0.26829291095143848683978190012945486698448", 38));

    CHECK_THROWS_AS(fit_sign_data(off, 5), ConfigError);
    EdsSequence tor(new_curve(0, -1, 1, 0, 0), pt(0, 0));
    CHECK_THROWS_AS(fit_sign_data(tor, 20), TorsionPoint);
}

TEST_CASE("sign law verification to n = 500") {
    auto c37 = new_curve(0, 0, 1, -1, 0);
    EdsSequence off(c37, pt(0, 0));
    EdsSequence on(c37, pt(1, 0));
    EdsSequence ex17(new_curve(0, -1, 0, -6, 0), pt(-1, 2));
    EdsSequence neg(new_curve(0, 0, 0, 0, -2), pt(3, 5));

    for (EdsSequence* s : {&off, &on, &ex17, &neg}) {
        auto sd = fit_sign_data(*s, 60);
        auto fail = verify_sign_law(*s, sd, 500);
        CHECK_FALSE(fail.has_value());
    }

    // A negated sigma breaks the first even index.
    auto sd = fit_sign_data(off, 60);
    sd.sigma = -sd.sigma;
    auto fail = verify_sign_law(off, sd, 200);
    REQUIRE(fail.has_value());
    CHECK(*fail == 2);
}

TEST_CASE("equidistribution statistics") {
    auto c37 = new_curve(0, 0, 1, -1, 0);
    EdsSequence off(c37, pt(0, 0));
    auto sd = fit_sign_data(off, 60);

    auto st = equidistribution_stats(sd, 100000, 0, 1, 0.0, 0.5);
    long total = static_cast<long>(primes_up_to(100000).size());
    CHECK(total == 9592);
    double prop = static_cast<double>(st.count) / static_cast<double>(total);
    CHECK(std::abs(prop - 0.49676) < 0.002);
    CHECK(st.expected == doctest::Approx(0.5 * 100000.0 / std::log(100000.0)));

    // Full interval degenerates to a congruence count.
    auto full = equidistribution_stats(sd, 100, 1, 4, 0.0, 1.0);
    CHECK(full.count == 11);  // 5, 13, ..., 97

    auto empty = equidistribution_stats(sd, 100000, 0, 1, 0.3, 0.3);
    CHECK(empty.count == 0);

    CHECK_THROWS_AS(equidistribution_stats(sd, 100, 2, 4, 0.0, 1.0), ConfigError);
}
