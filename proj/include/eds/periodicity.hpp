#pragma once

#include "eds/sequence.hpp"

#include <cstdint>

namespace eds {

// Certificate that `minimal_period` really is the least period of the
// sequence modulo `modulus`: every period must divide `divisor_bound`, the
// bound's divisors were scanned in increasing order, and the winner was
// verified on a window of length `window_checked` >= divisor_bound.
struct PeriodCertificate {
    uint64_t modulus = 0;
    uint64_t minimal_period = 0;
    uint64_t divisor_bound = 0;
    uint64_t window_checked = 0;
};

// r(p^k): with M the good-reduction multiplier and v = v_p(MP), this is
// M times the least m with v_p(m * MP) >= k + v — the first index at which
// the p-adic depth gains k beyond its starting level.
uint64_t r_pk(EdsSequence& seq, uint64_t p, long k);

// pi(p^k): (p-1) p^{k-1} r(p^k), doubled unless p is odd and
// beta_{M+r} beta_{M-r} is a nonzero square modulo p.
mpz_class pi_pk(EdsSequence& seq, uint64_t p, long k);

// Coarse period bound: 2 M (p-1) p^{2(k-1)} ord_p(MP) when v_p(MP) = 0,
// else 2 M (p-1) p^{2k-1}.
mpz_class simple_bound(EdsSequence& seq, uint64_t p, long k);

// Least period of beta_n mod N, certified by an exhaustive window check of
// length equal to the divisor bound (the lcm of pi(p^k) over p^k || N).
// Throws BoundExceedsCap when that bound exceeds `cap`.
PeriodCertificate minimal_period_mod(EdsSequence& seq, uint64_t N, uint64_t cap = 1000000);

}  // namespace eds
