#include "eds/real_signs.hpp"

#include "eds/errors.hpp"
#include "eds/primes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace eds {

namespace {

int parity_sign(long e) { return e % 2 == 0 ? 1 : -1; }

// Predicted sign(beta_n) under the fitted law.
int law_sign(ComponentBranch branch, int sigma, const MpReal& beta, long n) {
    int sig_pow = (n - 1) % 2 == 0 ? 1 : sigma;
    long fl = floor_long(MpReal::of(n, beta.precision()) * beta);
    long expo;
    if (branch == ComponentBranch::Identity) {
        expo = fl;
    } else if (n % 2 == 0) {
        expo = fl + n / 2;
    } else {
        return parity_sign((n - 1) / 2);  // parameter-free odd branch
    }
    return sig_pow * parity_sign(expo);
}

bool candidate_fits(EdsSequence& seq, ComponentBranch branch, int sigma, const MpReal& beta,
                    long window) {
    for (long n = 2; n <= window; ++n)
        if (law_sign(branch, sigma, beta, n) != seq.psi_sign(n)) return false;
    return true;
}

// Reduce into [-1, 0): fractional part shifted one period down.
MpReal to_negative_unit(const MpReal& v) {
    return frac01(v) - MpReal::of(1L, v.precision());
}

}  // namespace

SignData fit_sign_data(EdsSequence& seq, long window, unsigned digits) {
    if (window < 10) throw ConfigError("fit window must be at least 10");
    (void)seq.beta(2);  // rejects torsion base points up front

    RealLog rl = real_period_and_log(seq.curve(), seq.point(), digits);
    const mpfr_prec_t p = rl.t.precision();
    const MpReal one = MpReal::of(1L, p);
    const MpReal half = MpReal::of(mpq_class(1, 2), p);

    ComponentBranch branch = is_on_identity_component(seq.curve(), seq.point())
                                 ? ComponentBranch::Identity
                                 : ComponentBranch::NonIdentity;

    std::vector<MpReal> cands;
    if (branch == ComponentBranch::Identity) {
        cands = {rl.t, one - rl.t, -rl.t, rl.t - one};
    } else {
        // rl.t is the log of 2P; its half generates the candidates, folded
        // into [-1, 0) where the even-branch floor expects them.
        MpReal th = rl.t * half;
        cands = {to_negative_unit(th), to_negative_unit(-th), to_negative_unit(th + half),
                 to_negative_unit(half - th)};
    }

    std::vector<std::pair<MpReal, int>> survivors;
    for (const MpReal& b : cands)
        for (int sigma : {1, -1})
            if (candidate_fits(seq, branch, sigma, b, window)) survivors.emplace_back(b, sigma);

    if (survivors.size() != 2)
        throw NoConsistentFit("sign fit found " + std::to_string(survivors.size()) +
                              " candidates instead of an involution pair");
    auto& s0 = survivors[0];
    auto& s1 = survivors[1];
    // The two survivors must be images of each other under the involution
    // beta -> 1-beta (identity branch) resp. beta -> -1-beta, sigma -> -sigma.
    MpReal sum = s0.first + s1.first;
    MpReal target = branch == ComponentBranch::Identity ? one : -one;
    MpReal tol(p);
    mpfr_set_ui_2exp(tol.raw(), 1, -static_cast<long>(p) / 2, MPFR_RNDN);
    if (s0.second * s1.second != -1 || abs(sum - target) > tol)
        throw NoConsistentFit("surviving sign candidates are not an involution pair");

    SignData sd;
    sd.sigma = 1;
    sd.beta = s0.second == 1 ? s0.first : s1.first;
    sd.component_branch = branch;
    sd.matched_window = window;
    sd.precision_digits = digits;
    return sd;
}

std::optional<long> verify_sign_law(EdsSequence& seq, const SignData& sd, long n_max) {
    SignData cur = sd;
    MpReal thresh(cur.beta.precision());
    auto set_thresh = [&] {
        MpReal ten = MpReal::of(10L, cur.beta.precision());
        mpfr_pow_si(thresh.raw(), ten.raw(),
                    8 - static_cast<long>(cur.precision_digits), MPFR_RNDN);
    };
    set_thresh();

    for (long n = 2; n <= n_max; ++n) {
        while (dist_to_integer(MpReal::of(n, cur.beta.precision()) * cur.beta) < thresh) {
            if (cur.precision_digits >= 1024)
                throw AmbiguousFloor("floor of " + std::to_string(n) +
                                     "*beta ambiguous at 1024 digits");
            unsigned bumped = std::min(1024u, cur.precision_digits * 2);
            SignData refit = fit_sign_data(seq, cur.matched_window, bumped);
            if (refit.component_branch != cur.component_branch || refit.sigma != cur.sigma)
                throw NoConsistentFit("refit at higher precision changed the fitted law");
            cur = refit;
            set_thresh();
        }
        if (law_sign(cur.component_branch, cur.sigma, cur.beta, n) != seq.psi_sign(n)) return n;
    }
    return std::nullopt;
}

EquidistStats equidistribution_stats(const SignData& sd, uint64_t x, uint64_t s, uint64_t t,
                                     double a, double b) {
    if (t == 0) throw ConfigError("congruence modulus must be positive");
    if (std::gcd(s % t, t) != 1)
        throw ConfigError("congruence class must be coprime to the modulus");

    const mpfr_prec_t p = sd.beta.precision();
    EquidistStats out;
    for (uint64_t ell : primes_up_to(x)) {
        if (ell % t != s % t) continue;
        MpReal v = MpReal::of(static_cast<long>(ell), p) * sd.beta;
        mpfr_div_2ui(v.raw(), v.raw(), 1, MPFR_RNDN);
        MpReal f = frac01(v);
        if (mpfr_cmp_d(f.raw(), a) >= 0 && mpfr_cmp_d(f.raw(), b) < 0) ++out.count;
    }

    uint64_t phi = t, m = t;
    for (uint64_t q = 2; q * q <= m; ++q)
        if (m % q == 0) {
            phi -= phi / q;
            while (m % q == 0) m /= q;
        }
    if (m > 1) phi -= phi / m;
    if (x >= 2)
        out.expected = (b - a) / static_cast<double>(phi) * static_cast<double>(x) /
                       std::log(static_cast<double>(x));
    return out;
}

}  // namespace eds
