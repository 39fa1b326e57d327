#include "eds/sequence.hpp"

#include "eds/errors.hpp"
#include "eds/padic.hpp"
#include "eds/primes.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace eds {

namespace {

int sign_of(const mpq_class& q) { return sgn(q); }

// Square root of a perfect square, with the context in the error message.
mpz_class exact_sqrt(const mpz_class& v, const char* what) {
    if (mpz_perfect_square_p(v.get_mpz_t()) == 0)
        throw NonIntegralBeta(std::string(what) +
                              ": denominator is not a perfect square");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

uint64_t reduce_mod(const mpz_class& v, uint64_t N) {
    mpz_class n(static_cast<unsigned long>(N)), r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    return r.get_ui();
}

std::vector<long> prime_divisors_long(long n) {
    std::vector<long> out;
    if (n < 0) n = -n;
    for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

EdsSequence::EdsSequence(CurveQ curve, PointQ point)
    : curve_(std::move(curve)), point_(std::move(point)) {
    if (point_.infinity) throw TorsionPoint("base point is the identity");
    if (!on_curve(curve_, point_)) throw PointNotOnCurve("base point not on curve");

    e1_ = exact_sqrt(point_.x.get_den(), "base point");
    if (point_.y.get_den() != e1_ * e1_ * e1_)
        throw NonIntegralBeta("base point: y-denominator is not e^3");

    multiples_.push_back(PointQ::make_infinity());
    multiples_.push_back(point_);
    signs_ = {0, 1};
    betas_ = {mpz_class(0), mpz_class(1)};

    // Any rational torsion point has order at most 12; growing the cache past
    // that bound up front pins down once and for all whether the sequence is
    // defined, keeping beta() answers stable across calls.  (This also seeds
    // the recurrence path, which consumes indices near half its target.)
    grow_points(16);
}

void EdsSequence::grow(size_t n) {
    if (betas_.size() > n) return;
    // For integral points whose multiples all reduce to nonsingular points
    // (M = 1), beta_n coincides with psi_n evaluated at the point, so the
    // table extends by integer recurrences: far cheaper than the rational
    // point additions and square-root extractions of the general path.
    if (exact_psi_ok_locked())
        grow_psi(n);
    else
        grow_points(n);
}

void EdsSequence::grow_points(size_t n) {
    while (multiples_.size() <= n) {
        size_t k = multiples_.size();
        PointQ next = add(curve_, multiples_[k - 1], point_);
        // beta/sign bookkeeping only while the tables are in lockstep; once
        // the recurrence path has raced ahead, this loop just adds points.
        bool track = betas_.size() == k;

        int s = 0;
        if (track && !torsion_order_) {
            if (k == 2) {
                mpq_class psi2 = 2 * point_.y + mpq_class(curve_.a1) * point_.x +
                                 mpq_class(curve_.a3);
                s = sign_of(psi2);
            } else {
                const PointQ& prev = multiples_[k - 1];
                if (!prev.infinity) s = signs_[k - 2] * sign_of(point_.x - prev.x);
            }
        }

        mpz_class b = 0;
        if (next.infinity) {
            if (!torsion_order_) torsion_order_ = static_cast<long>(k);
        } else if (track && !torsion_order_) {
            mpz_class e = exact_sqrt(next.x.get_den(), "multiple");
            if (next.y.get_den() != e * e * e)
                throw NonIntegralBeta("multiple: y-denominator is not e^3");
            if (!mpz_divisible_p(e.get_mpz_t(), e1_.get_mpz_t()))
                throw NonIntegralBeta("e_1 does not divide e_n");
            if (s == 0) throw EdsError("sign chain degenerate at non-torsion point");
            mpz_class q;
            mpz_divexact(q.get_mpz_t(), e.get_mpz_t(), e1_.get_mpz_t());
            b = s * q;
        }

        multiples_.push_back(std::move(next));
        if (track) {
            signs_.push_back(s);
            betas_.push_back(std::move(b));
        }
    }
}

void EdsSequence::grow_psi(size_t n) {
    // Duplication recurrences for division-polynomial values; valid here
    // because beta_k = psi_k(point) exactly on this path.  All indices on
    // the right stay below k (the cache is seeded well past index 4).
    while (betas_.size() <= n) {
        size_t k = betas_.size();
        size_t m = k / 2;
        mpz_class b;
        if (k % 2 == 1) {
            b = betas_[m + 2] * betas_[m] * betas_[m] * betas_[m] -
                betas_[m + 1] * betas_[m + 1] * betas_[m + 1] * betas_[m - 1];
        } else {
            mpz_class t = betas_[m] * (betas_[m + 2] * betas_[m - 1] * betas_[m - 1] -
                                       betas_[m - 2] * betas_[m + 1] * betas_[m + 1]);
            mpz_divexact(b.get_mpz_t(), t.get_mpz_t(), betas_[2].get_mpz_t());
        }
        int s = sgn(b);
        if (s == 0) throw EdsError("recurrence value vanished at non-torsion index");
        signs_.push_back(s);
        betas_.push_back(std::move(b));
    }
}

bool EdsSequence::exact_psi_ok_locked() {
    if (!integral_fast_) {
        bool integral = point_.x.get_den() == 1 && point_.y.get_den() == 1;
        if (!integral || torsion_order_) {
            integral_fast_ = false;
        } else {
            try {
                integral_fast_ = compute_M_locked() == 1;
            } catch (const EdsError&) {
                // Cannot certify the hypothesis (e.g. discriminant would not
                // factor within budget); the general path needs no certificate.
                integral_fast_ = false;
            }
        }
    }
    return *integral_fast_;
}

PointQ EdsSequence::multiple(long n) {
    std::scoped_lock lk(*mu_);
    size_t a = static_cast<size_t>(n < 0 ? -n : n);
    grow_points(a);
    PointQ r = multiples_[a];
    return n < 0 ? neg(curve_, r) : r;
}

mpz_class EdsSequence::beta(long n) {
    std::scoped_lock lk(*mu_);
    if (torsion_order_)
        throw TorsionPoint("sequence undefined: base point has order " +
                           std::to_string(*torsion_order_));
    if (n == 0) return 0;
    size_t a = static_cast<size_t>(n < 0 ? -n : n);
    grow(a);
    return n < 0 ? mpz_class(-betas_[a]) : betas_[a];
}

int EdsSequence::psi_sign(long n) {
    std::scoped_lock lk(*mu_);
    if (n == 0) return 0;
    size_t a = static_cast<size_t>(n < 0 ? -n : n);
    grow(a);
    return n < 0 ? -signs_[a] : signs_[a];
}

long EdsSequence::compute_M_locked() {
    if (M_) return *M_;
    auto df = factor_int(curve_.disc);
    if (!df.complete)
        throw FactoringBudgetExceeded("discriminant factorization incomplete");
    long result = 1;
    for (const auto& [p, vpd] : df.factors) {
        if (!p.fits_ulong_p())
            throw EdsError("bad prime exceeds machine word");
        uint64_t pu = p.get_ui();
        long bound = std::max<long>(4, static_cast<long>(vpd) + 1);
        grow_points(static_cast<size_t>(bound));
        long order = 0;
        for (long m = 1; m <= bound; ++m) {
            const PointQ& Q = multiples_[static_cast<size_t>(m)];
            if (Q.infinity || reduction_data(curve_, Q, pu).nonsingular) {
                order = m;
                break;
            }
        }
        if (order == 0)
            throw ComponentOrderSearchExceeded(
                "no multiple up to " + std::to_string(bound) +
                " has nonsingular reduction at p=" + std::to_string(pu));
        result = std::lcm(result, order);
    }
    M_ = result;
    return result;
}

long EdsSequence::M() {
    std::scoped_lock lk(*mu_);
    return compute_M_locked();
}

bool EdsSequence::fast_path_ok(uint64_t N) {
    if (!exact_psi_ok_locked()) return false;
    // The even-index recurrence step is the only division in the modular
    // table, and it divides by beta_2; nothing else needs to be invertible.
    mpz_class g, n(static_cast<unsigned long>(N));
    mpz_gcd(g.get_mpz_t(), betas_[2].get_mpz_t(), n.get_mpz_t());
    return g == 1;
}

const std::vector<uint64_t>& EdsSequence::mod_table(uint64_t N, size_t n) {
    auto& t = mod_tables_[N];
    if (t.size() > n) return t;
    size_t target = std::max<size_t>({t.size() * 2, n + 1, 8});
    if (t.empty()) {
        t.resize(5);
        for (long i = 0; i <= 4; ++i) {
            mpq_class psi = division_poly_eval(curve_, i, point_);
            if (psi.get_den() != 1)
                throw NoModularInverse("non-integral division polynomial value");
            t[static_cast<size_t>(i)] = reduce_mod(psi.get_num(), N);
        }
    }
    mpz_class psi2(static_cast<unsigned long>(t[2])), inv, n_mpz(static_cast<unsigned long>(N));
    if (N == 1) {
        inv = 0;
    } else if (mpz_invert(inv.get_mpz_t(), psi2.get_mpz_t(), n_mpz.get_mpz_t()) == 0) {
        throw NoModularInverse("psi_2 not invertible modulo N");
    }
    uint64_t inv2 = inv.get_ui();

    size_t old = t.size();
    t.resize(std::max(target, old));
    auto sub = [N](uint64_t a, uint64_t b) { return (a + N - b) % N; };
    for (size_t i = old; i < t.size(); ++i) {
        size_t m = i / 2;
        if (i % 2 == 1) {
            // psi_{2m+1} = psi_{m+2} psi_m^3 - psi_{m+1}^3 psi_{m-1}
            uint64_t t1 = mulmod_u64(t[m + 2], mulmod_u64(t[m], mulmod_u64(t[m], t[m], N), N), N);
            uint64_t t2 = mulmod_u64(mulmod_u64(t[m + 1], mulmod_u64(t[m + 1], t[m + 1], N), N),
                                     t[m - 1], N);
            t[i] = sub(t1, t2);
        } else {
            // psi_{2m} = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2) / psi_2
            uint64_t t1 = mulmod_u64(t[m + 2], mulmod_u64(t[m - 1], t[m - 1], N), N);
            uint64_t t2 = mulmod_u64(t[m - 2], mulmod_u64(t[m + 1], t[m + 1], N), N);
            t[i] = mulmod_u64(mulmod_u64(t[m], sub(t1, t2), N), inv2, N);
        }
    }
    return t;
}

ResidueResult EdsSequence::beta_mod(long n, uint64_t N) {
    std::scoped_lock lk(*mu_);
    if (N == 0) throw ConfigError("modulus must be positive");
    size_t a = static_cast<size_t>(n < 0 ? -n : n);
    if (fast_path_ok(N)) {
        try {
            const auto& t = mod_table(N, a);
            uint64_t v = t[a];
            if (n < 0) v = (N - v) % N;
            return {v, true};
        } catch (const NoModularInverse&) {
            // fall through to the exact path
        }
    }
    if (torsion_order_)
        throw TorsionPoint("sequence undefined: base point has finite order");
    grow(a);
    mpz_class b = n < 0 ? mpz_class(-betas_[a]) : betas_[a];
    return {reduce_mod(b, N), false};
}

void EdsSequence::ensure(long n) {
    std::scoped_lock lk(*mu_);
    grow(static_cast<size_t>(n < 0 ? -n : n));
}

bool verzobio_identity_check(EdsSequence& seq, long n, long m, long r) {
    long M = seq.M();
    int multiples = (n % M == 0) + (m % M == 0) + (r % M == 0);
    if (multiples < 2)
        throw HypothesisNotMet("identity requires at least two of n,m,r divisible by M=" +
                               std::to_string(M));
    mpz_class bn = seq.beta(n), bm = seq.beta(m), br = seq.beta(r);
    mpz_class lhs = seq.beta(m + n) * seq.beta(m - n) * br * br;
    mpz_class rhs = seq.beta(m + r) * seq.beta(m - r) * bn * bn -
                    seq.beta(n + r) * seq.beta(n - r) * bm * bm;
    return lhs == rhs;
}

bool gcd_check(EdsSequence& seq, long m, long n) {
    mpz_class bm = abs(seq.beta(m)), bn = abs(seq.beta(n));
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), bm.get_mpz_t(), bn.get_mpz_t());
    return g == abs(seq.beta(std::gcd(m, n)));
}

namespace {

PartialFactorization factor_beta_impl(EdsSequence& seq, long n, const FactorBudget& budget,
                                      std::map<long, PartialFactorization>& memo) {
    if (n < 0) n = -n;
    if (n == 0) throw ZeroInput("factor_beta requires n != 0");
    if (auto it = memo.find(n); it != memo.end()) return it->second;

    mpz_class v = abs(seq.beta(n));
    PartialFactorization out;
    out.value = v;
    if (v == 1) {
        memo.emplace(n, out);
        return out;
    }

    // Strong divisibility: every prime of beta_d for d | n divides beta_n,
    // so divide those out (to full multiplicity) before general factoring.
    mpz_class rem = v;
    for (long p : prime_divisors_long(n)) {
        long d = n / p;
        if (d < 1) continue;
        auto sub = factor_beta_impl(seq, d, budget, memo);
        for (const auto& [q, e] : sub.factors) {
            (void)e;
            unsigned cnt = 0;
            while (mpz_divisible_p(rem.get_mpz_t(), q.get_mpz_t())) {
                mpz_divexact(rem.get_mpz_t(), rem.get_mpz_t(), q.get_mpz_t());
                ++cnt;
            }
            if (cnt > 0) out.factors[q] += cnt;
        }
    }

    auto tail = factor_int(rem, budget);
    for (const auto& [q, e] : tail.factors) out.factors[q] += e;
    out.cofactor = tail.cofactor;
    out.complete = tail.complete;
    memo.emplace(n, out);
    return out;
}

}  // namespace

PartialFactorization factor_beta(EdsSequence& seq, long n, const FactorBudget& budget) {
    std::map<long, PartialFactorization> memo;
    return factor_beta_impl(seq, n, budget, memo);
}

std::set<mpz_class> primes_T(EdsSequence& seq) {
    auto f = factor_int(seq.e1());
    if (!f.complete) throw FactoringBudgetExceeded("e_1 factorization incomplete");
    std::set<mpz_class> out;
    for (const auto& [p, e] : f.factors) {
        (void)e;
        out.insert(p);
    }
    return out;
}

}  // namespace eds
