#pragma once

#include "eds/curve.hpp"
#include "eds/factor.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

namespace eds {

// Residue of a sequence value together with a note on how it was obtained.
struct ResidueResult {
    uint64_t value = 0;      // representative in [0, N)
    bool fast_path = false;  // true when the modular recurrence produced it
};

// Cached view of the normalized denominator sequence attached to a fixed
// curve/point pair, together with derived constants.
//
// For nP = (a_n/e_n^2, b_n/e_n^3) in lowest terms, the sequence value is
//   beta_n = sign(psi_n(P)) * e_n / e_1,
// where psi_n is the n-th division polynomial.  beta_0 = 0, beta_1 = 1 and
// beta_{-n} = -beta_n.  e_1 | e_n always holds for points on integral models
// (the denominator primes of P persist in every multiple); a violation is
// reported as NonIntegralBeta rather than silently truncated.
//
// All accessors are internally synchronized: callers may race, results are
// identical (the caches are append-only and deterministic).
class EdsSequence {
public:
    EdsSequence(CurveQ curve, PointQ point);

    const CurveQ& curve() const { return curve_; }
    const PointQ& point() const { return point_; }
    const mpz_class& e1() const { return e1_; }

    // n-th multiple of the base point (cached; n may be negative).
    PointQ multiple(long n);

    // Exact sequence value.  Throws TorsionPoint if the base point has
    // finite order (the sequence is only defined for points of infinite
    // order) and NonIntegralBeta if e_1 fails to divide e_n.
    mpz_class beta(long n);

    // Sign of psi_n at the base point (+1/-1 for n != 0, 0 for n = 0).
    int psi_sign(long n);

    // Least m >= 1 such that m*point has nonsingular reduction at every
    // prime; the lcm over bad primes of the component-group orders.
    long M();

    // beta(n) mod N.  When the pair satisfies the fast-path conditions
    // (M = 1, integral base point, gcd(beta_2, N) = 1) the value comes
    // from a cached modular recurrence table; otherwise the exact value
    // is reduced.
    ResidueResult beta_mod(long n, uint64_t N);

    // Pre-extend the exact caches so subsequent calls up to |n| are lookups.
    void ensure(long n);

private:
    void grow(size_t n);                       // requires lock held
    void grow_points(size_t n);                // lock held; extends multiples_
    void grow_psi(size_t n);                   // lock held; integer recurrence
    bool exact_psi_ok_locked();                // lock held
    const std::vector<uint64_t>& mod_table(uint64_t N, size_t n);  // lock held
    bool fast_path_ok(uint64_t N);             // lock held
    long compute_M_locked();                   // lock held

    CurveQ curve_;
    PointQ point_;
    mpz_class e1_;
    // multiples_ may lag betas_: for integral points with M = 1 the beta
    // table extends by integer recurrences without computing new multiples.
    std::vector<PointQ> multiples_;            // multiples_[n] = n * point
    std::vector<int> signs_;                   // sign(psi_n(point))
    std::vector<mpz_class> betas_;             // beta_n for n >= 0
    std::optional<long> torsion_order_;
    std::optional<long> M_;
    std::optional<bool> integral_fast_;        // M == 1 and integral point
    std::map<uint64_t, std::vector<uint64_t>> mod_tables_;
    // Held indirectly so sequences can live in containers; moving a sequence
    // while another thread uses it is (as usual) undefined.
    std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

// Exact check of the three-term product identity
//   beta_{m+n} beta_{m-n} beta_r^2
//     = beta_{m+r} beta_{m-r} beta_n^2 - beta_{n+r} beta_{n-r} beta_m^2.
// Requires at least two of n, m, r to be multiples of M (HypothesisNotMet
// otherwise); outside that regime the identity fails for generic triples.
bool verzobio_identity_check(EdsSequence& seq, long n, long m, long r);

// Exact check of the strong divisibility law
//   gcd(beta_m, beta_n) = |beta_{gcd(m,n)}|.
bool gcd_check(EdsSequence& seq, long m, long n);

// Factorization of |beta_n|.  Exploits strong divisibility: prime factors
// of beta_d for proper divisors d | n are divided out first (recursively),
// so general-purpose factoring only ever sees the primitive part.
PartialFactorization factor_beta(EdsSequence& seq, long n,
                                 const FactorBudget& budget = FactorBudget{});

// Primes dividing e_1, i.e. the primes p with v_p(point) > 0.
std::set<mpz_class> primes_T(EdsSequence& seq);

}  // namespace eds
