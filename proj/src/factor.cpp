#include "eds/factor.hpp"

#include "eds/primes.hpp"

#include <algorithm>

namespace eds {

bool PartialFactorization::consistent() const {
    mpz_class prod = cofactor;
    for (const auto& [p, e] : factors) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        prod *= pe;
    }
    return prod == value && (!complete || cofactor == 1);
}

namespace {

bool probab_prime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0; }

// Brent's cycle-finding rho with batched gcds; x_{k+1} = x_k^2 + c mod n.
// Returns a nontrivial factor or 0. Deterministic for fixed (c, iters).
mpz_class brent_rho(const mpz_class& n, unsigned long c, uint64_t iters) {
    const unsigned batch = 128;
    mpz_class y = 2, x, q = 1, g = 1, ys;
    uint64_t r = 1, used = 0;
    auto step = [&](mpz_class& v) {
        v = (v * v + c) % n;
    };
    while (g == 1 && used < iters) {
        x = y;
        for (uint64_t i = 0; i < r && used < iters; ++i, ++used) step(y);
        uint64_t k = 0;
        while (k < r && g == 1 && used < iters) {
            ys = y;
            uint64_t lim = std::min<uint64_t>(batch, r - k);
            for (uint64_t i = 0; i < lim && used < iters; ++i, ++used) {
                step(y);
                mpz_class d = x - y;
                if (d < 0) d = -d;
                if (d == 0) continue;
                q = q * d % n;
            }
            g = gcd(q, n);
            k += lim;
        }
        r *= 2;
    }
    if (g == n) {
        // Backtrack one step at a time from the last saved point.
        g = 1;
        while (g == 1) {
            step(ys);
            mpz_class d = x - ys;
            if (d < 0) d = -d;
            if (d == 0) return 0;
            g = gcd(d, n);
        }
    }
    if (g > 1 && g < n) return g;
    return 0;
}

// Pollard p-1 stage 1: g = gcd(2^{lcm(1..B)} - 1, n), computed via prime
// powers <= B. Cheap pre-pass that often cracks cofactors rho would need
// many iterations for.
mpz_class pollard_pm1(const mpz_class& n, uint64_t bound) {
    if (bound < 2) return 0;
    const auto primes = prime_table(bound);
    mpz_class a = 2;
    for (uint64_t p : *primes) {
        uint64_t pe = p;
        while (pe <= bound / p) pe *= p;
        mpz_class e(static_cast<unsigned long>(pe));
        mpz_powm(a.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    }
    mpz_class g = gcd(a - 1, n);
    if (g > 1 && g < n) return g;
    return 0;
}

void add_factor(PartialFactorization& f, const mpz_class& p, unsigned e) { f.factors[p] += e; }

// Recursively factor m (no prime factor <= trial bound) into f.
void factor_hard(PartialFactorization& f, mpz_class m, unsigned mult, const FactorBudget& budget) {
    if (m == 1) return;
    if (probab_prime(m)) {
        add_factor(f, m, mult);
        return;
    }
    // Perfect power: m = b^k reduces the problem to b.
    if (mpz_perfect_power_p(m.get_mpz_t())) {
        for (unsigned long k = 2; k <= mpz_sizeinbase(m.get_mpz_t(), 2); ++k) {
            mpz_class root;
            if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k) != 0) {
                factor_hard(f, root, mult * k, budget);
                return;
            }
        }
    }
    mpz_class d = pollard_pm1(m, budget.pm1_bound);
    for (int attempt = 0; d == 0 && attempt < budget.rho_attempts; ++attempt)
        d = brent_rho(m, 2 * attempt + 1, budget.rho_iters);
    if (d == 0) {
        if (mult > 1) {
            // An unfactored composite to an even power still has even
            // valuations; record multiplicity by leaving the cofactor as
            // the full power so value bookkeeping stays exact.
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), m.get_mpz_t(), mult);
            f.cofactor *= pw;
        } else {
            f.cofactor *= m;
        }
        f.complete = false;
        return;
    }
    factor_hard(f, d, mult, budget);
    factor_hard(f, m / d, mult, budget);
}

}  // namespace

PartialFactorization factor_int(const mpz_class& v, const FactorBudget& budget) {
    PartialFactorization f;
    f.value = abs(v);
    if (f.value == 0) {
        f.complete = false;
        f.cofactor = 0;
        return f;
    }
    mpz_class m = f.value;
    if (m == 1) return f;
    const auto primes = prime_table(budget.trial_bound);
    for (uint64_t p : *primes) {
        // The shared table may extend past this call's bound; honor the budget.
        if (p > budget.trial_bound) break;
        if (mpz_cmp_ui(m.get_mpz_t(), p) < 0) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            unsigned e = 0;
            do {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
            add_factor(f, mpz_class(static_cast<unsigned long>(p)), e);
        }
        mpz_class p2(static_cast<unsigned long>(p));
        if (p2 * p2 > m) break;
    }
    if (m > 1) {
        // After trial division to bound T, any remaining m < T^2 is prime.
        mpz_class t2(static_cast<unsigned long>(budget.trial_bound));
        t2 *= t2;
        if (m < t2)
            add_factor(f, m, 1);
        else
            factor_hard(f, m, 1, budget);
    }
    if (!f.complete && f.cofactor > 1) {
        // Splitting can deposit the same prime in both the factored part and
        // an unfactored composite; restore disjointness so parity arguments
        // on the cofactor are sound.
        for (auto& [p, e] : f.factors) {
            while (mpz_divisible_p(f.cofactor.get_mpz_t(), p.get_mpz_t())) {
                mpz_divexact(f.cofactor.get_mpz_t(), f.cofactor.get_mpz_t(), p.get_mpz_t());
                ++e;
            }
        }
        if (f.cofactor == 1)
            f.complete = true;
        else if (probab_prime(f.cofactor)) {
            add_factor(f, f.cofactor, 1);
            f.cofactor = 1;
            f.complete = true;
        }
    }
    return f;
}

void absorb_known_prime(PartialFactorization& f, const mpz_class& p) {
    if (f.complete || f.cofactor <= 1) return;
    unsigned e = 0;
    while (mpz_divisible_p(f.cofactor.get_mpz_t(), p.get_mpz_t())) {
        f.cofactor /= p;
        ++e;
    }
    if (e) {
        add_factor(f, p, e);
        if (f.cofactor == 1)
            f.complete = true;
        else if (probab_prime(f.cofactor)) {
            add_factor(f, f.cofactor, 1);
            f.cofactor = 1;
            f.complete = true;
        }
    }
}

}  // namespace eds
