#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

namespace eds {

// Effort limits for integer factorization. All stages are deterministic
// (fixed polynomial parameters), so results are reproducible run to run.
struct FactorBudget {
    uint64_t trial_bound = 100000;   // trial division by primes up to this
    uint64_t rho_iters = 1000000;    // Brent-rho iterations per attempt
    int rho_attempts = 2;            // distinct rho polynomials tried
    uint64_t pm1_bound = 100000;     // Pollard p-1 stage-1 smoothness bound

    bool operator==(const FactorBudget&) const = default;
};

// Factorization of a positive integer, possibly incomplete: value equals
// cofactor times the product of the listed prime powers; cofactor is 1 when
// complete, otherwise a composite with no prime factor <= the trial bound
// and coprime to every listed prime (so exponent parities of unseen primes
// are confined to the cofactor).
struct PartialFactorization {
    mpz_class value;
    std::map<mpz_class, unsigned> factors;
    mpz_class cofactor = 1;
    bool complete = true;

    // Exponent of p in the factored part (0 if absent).
    unsigned exponent(const mpz_class& p) const {
        auto it = factors.find(p);
        return it == factors.end() ? 0 : it->second;
    }
    // value == cofactor * prod p^e; used by tests as the re-multiplication
    // oracle.
    bool consistent() const;
};

// Factor |v| (v must be nonzero; the sign is dropped). Stages: trial
// division, perfect-power peeling, strong-probable-prime testing, Pollard
// p-1, Brent rho with batched gcds. Never throws on budget exhaustion; the
// unfactored part is returned as the cofactor with complete=false.
PartialFactorization factor_int(const mpz_class& v, const FactorBudget& budget = {});

// Merge a known prime factor into an existing factorization of the same value:
// divides out each given prime from the cofactor to full multiplicity.
void absorb_known_prime(PartialFactorization& f, const mpz_class& p);

}  // namespace eds
