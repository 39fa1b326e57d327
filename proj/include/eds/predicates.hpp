#pragma once

#include "eds/dirichlet.hpp"
#include "eds/sequence.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace eds {

// Outcome of a local-obstruction scan that depends on factorizations:
// Nonzero is definite, PossiblyZero means every checked prime passed with a
// complete factorization, Unknown means the factorization ran out of budget
// before the scan could become definite.
enum class TriState { Nonzero, PossiblyZero, Unknown };

// A place of Q: the real place or a finite prime.
struct Place {
    bool is_real = true;
    uint64_t p = 0;

    static Place real() { return {true, 0}; }
    static Place finite(uint64_t prime) { return {false, prime}; }
};

// (a,b)_v = 1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over the
// completion at v; classical closed formulas (valuations and Legendre
// symbols at odd p, the epsilon/omega formulas at 2, signs at the real
// place).
int hilbert_symbol(const mpq_class& a, const mpq_class& b, const Place& v);

// Whether a x^2 + b y^2 + c z^2 = 0 has a nontrivial rational solution:
// checks (-ac,-bc)_v at the real place, 2, and every odd prime dividing a
// numerator or denominator; the global product formula is recomputed as a
// consistency cross-check.
bool conic_solvable(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                    const FactorBudget& budget = FactorBudget{});

// r = u^2 + v^2 with u, v rational iff r = 0, or r > 0 and v_p(r) is even
// for every prime p = 3 (mod 4).  The optional-returning form yields
// nullopt when the factorization budget cannot decide; the bool form turns
// that into FactoringBudgetExceeded.
std::optional<bool> two_squares_decide(const mpq_class& r,
                                       const FactorBudget& budget = FactorBudget{});
bool is_sum_of_two_squares(const mpq_class& r, const FactorBudget& budget = FactorBudget{});

// Canonical choice for the excluded prime set: primes dividing
// 2 * disc * q(chi) * ord(chi), plus the primes of e_1.
std::set<mpz_class> default_prime_set(EdsSequence& seq, const DirichletCharacter& chi);

// Local vanishing scan for the class specialized at nP: for every prime
// p | e_n e_1 outside S the class vanishes locally iff ord(chi(p)) divides
// v_p(nP).  Nonzero reports a definite local obstruction.
TriState brauer_vanishing_test(EdsSequence& seq, const DirichletCharacter& chi, long n,
                               const std::set<mpz_class>& S,
                               const FactorBudget& budget = FactorBudget{});

// A witness index for the nonvanishing conditions, with the branch that
// certified it:
//   1: chi(|beta_alpha|) not in {0,1}
//   2: chi(-|beta_alpha|) not in {0,1} and the base point lies on the
//      identity component of E(R)
//   3: chi(-|beta_alpha|) not in {0,1} and 4 does not divide the period
// alpha is always coprime to the minimal period of beta mod q(chi).
struct Star2Witness {
    uint64_t alpha = 0;
    int branch = 0;
    uint64_t period = 0;
};

// Branch-priority search: all alpha for branch 1 first, then 2, then 3.
std::optional<Star2Witness> find_star2_witness(EdsSequence& seq, const DirichletCharacter& chi,
                                               uint64_t alpha_max,
                                               uint64_t period_cap = 1000000);

// For the y^2 = x(x+2)(x-3) pair: whether the fiber over nP (n even) of the
// double cover t0^2 + t1^2 = (x - x(P))(x - x(3P)) t2^2 has a rational
// point, i.e. whether c = (x(nP) - x(P))(x(nP) - x(3P)) is a sum of two
// squares.  Decided exactly via the sequence-product form of c.
bool example13_fiber_check(EdsSequence& seq, long n);

struct SievePair {
    uint64_t ell = 0;   // prime index into the sequence
    mpz_class p;        // witness prime with ord(chi(p)) not dividing v_p(beta_ell)
};

// For each prime ell <= x, a witness prime p | beta_ell with
// ord(chi(p)) not dividing v_p(beta_ell) and p not dividing q(chi).
// Indices whose factorization stays incomplete are skipped with a warning.
std::vector<SievePair> find_sieve_primes(EdsSequence& seq, const DirichletCharacter& chi,
                                         uint64_t x, const FactorBudget& budget = FactorBudget{},
                                         std::vector<std::string>* warnings = nullptr);

}  // namespace eds
