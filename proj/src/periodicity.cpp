#include "eds/periodicity.hpp"

#include "eds/errors.hpp"
#include "eds/padic.hpp"
#include "eds/primes.hpp"

#include <algorithm>
#include <vector>

namespace eds {

namespace {

mpz_class pow_u(uint64_t p, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
    return r;
}

long vp_of_multiple(EdsSequence& seq, long M, uint64_t p) {
    PointQ MP = seq.multiple(M);
    PointValuation pv = vp_point(seq.curve(), MP, p);
    if (pv.infinite) throw TorsionPoint("M * P is the identity");
    return pv.v;
}

}  // namespace

uint64_t r_pk(EdsSequence& seq, uint64_t p, long k) {
    if (k < 1) throw ConfigError("r(p^k) requires k >= 1");
    long M = seq.M();
    long v = vp_of_multiple(seq, M, p);
    PointQ MP = seq.multiple(M);
    uint64_t ord = ord_mod_pk(seq.curve(), MP, p, k + v);
    return static_cast<uint64_t>(M) * ord;
}

mpz_class pi_pk(EdsSequence& seq, uint64_t p, long k) {
    uint64_t r = r_pk(seq, p, k);
    long M = seq.M();
    mpz_class base = mpz_class(p - 1) * pow_u(p, k - 1) * mpz_class(static_cast<unsigned long>(r));
    if (p == 2) return 2 * base;
    mpz_class prod = seq.beta(M + static_cast<long>(r)) * seq.beta(M - static_cast<long>(r));
    mpz_class pm(static_cast<unsigned long>(p)), rem;
    mpz_fdiv_r(rem.get_mpz_t(), prod.get_mpz_t(), pm.get_mpz_t());
    if (legendre_u64(rem.get_ui(), p) == 1) return base;
    return 2 * base;
}

mpz_class simple_bound(EdsSequence& seq, uint64_t p, long k) {
    if (k < 1) throw ConfigError("simple_bound requires k >= 1");
    long M = seq.M();
    long v = vp_of_multiple(seq, M, p);
    mpz_class lead = 2 * mpz_class(M) * mpz_class(p - 1);
    if (v == 0) {
        PointQ MP = seq.multiple(M);
        uint64_t ord = ord_mod_pk(seq.curve(), MP, p, 1);
        return lead * pow_u(p, 2 * (k - 1)) * mpz_class(static_cast<unsigned long>(ord));
    }
    return lead * pow_u(p, 2 * k - 1);
}

PeriodCertificate minimal_period_mod(EdsSequence& seq, uint64_t N, uint64_t cap) {
    if (N == 0) throw ConfigError("modulus must be positive");
    if (N == 1) return {1, 1, 1, 1};

    auto nf = factor_int(mpz_class(static_cast<unsigned long>(N)));
    if (!nf.complete) throw FactoringBudgetExceeded("modulus factorization incomplete");

    mpz_class bound = 1;
    for (const auto& [pz, k] : nf.factors) {
        uint64_t p = pz.get_ui();
        mpz_class pi = pi_pk(seq, p, static_cast<long>(k));
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), bound.get_mpz_t(), pi.get_mpz_t());
        bound = bound / g * pi;
    }
    if (bound > mpz_class(static_cast<unsigned long>(cap)))
        throw BoundExceedsCap("period divisor bound " + bound.get_str() +
                              " exceeds cap " + std::to_string(cap));
    uint64_t B = bound.get_ui();

    std::vector<uint64_t> window(2 * B);
    for (uint64_t i = 0; i < 2 * B; ++i)
        window[i] = seq.beta_mod(static_cast<long>(i), N).value;

    std::vector<uint64_t> divisors;
    for (uint64_t d = 1; d * d <= B; ++d) {
        if (B % d == 0) {
            divisors.push_back(d);
            if (d != B / d) divisors.push_back(B / d);
        }
    }
    std::sort(divisors.begin(), divisors.end());

    for (uint64_t d : divisors) {
        bool ok = true;
        for (uint64_t i = 0; i < B && ok; ++i) ok = window[i + d] == window[i];
        if (ok) return {N, d, B, B};
    }
    throw EdsError("no divisor of the period bound is a period (bound violated)");
}

}  // namespace eds
