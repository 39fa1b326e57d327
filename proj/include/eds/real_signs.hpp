#pragma once

#include "eds/real_mp.hpp"
#include "eds/sequence.hpp"

#include <cstdint>
#include <optional>

namespace eds {

enum class ComponentBranch { Identity, NonIdentity };

// Fitted parameters of the closed-form law for the signs of the sequence:
//   sigma^(n-1) * sign(beta_n) = (-1)^floor(n*beta)            P on E(R)^0
//                              = (-1)^(floor(n*beta) + n/2)    off E(R)^0, n even
//                              = (-1)^((n-1)/2)                off E(R)^0, n odd
// The pair (beta, sigma) is only determined up to an exact involution that
// leaves every prediction unchanged (beta -> 1-beta resp. -1-beta, with
// sigma negated); the stored representative is the one with sigma = +1.
// On the identity branch beta lies in (0, 1), otherwise in (-1, 0).
struct SignData {
    int sigma = 1;
    MpReal beta;
    ComponentBranch component_branch = ComponentBranch::Identity;
    long matched_window = 0;
    unsigned precision_digits = 64;
};

// Determines (beta, sigma) numerically: candidate values derived from the
// normalized elliptic logarithm are screened against the exact signs of
// beta_n for 2 <= n <= window.  Exactly one involution orbit must survive;
// anything else raises NoConsistentFit (raise the precision or shrink a
// window that straddles a floor boundary and retry).
SignData fit_sign_data(EdsSequence& seq, long window, unsigned digits = 64);

// Compares predicted and actual signs exactly for all 2 <= n <= n_max.
// Returns the first failing index, or nullopt if every index matches.
// Floor evaluations closer to an integer than 10^-(digits-8) trigger a
// refit at doubled precision, up to 1024 digits (AmbiguousFloor beyond).
std::optional<long> verify_sign_law(EdsSequence& seq, const SignData& sd, long n_max);

struct EquidistStats {
    long count = 0;
    double expected = 0.0;
};

// Counts primes ell <= x with ell = s (mod t) whose scaled multiple of the
// fitted beta has fractional part {ell*beta/2} in [a, b); the reference
// main term (b-a)/phi(t) * x/log(x) is reported alongside.
EquidistStats equidistribution_stats(const SignData& sd, uint64_t x, uint64_t s, uint64_t t,
                                     double a, double b);

}  // namespace eds
