#include "eds/dirichlet.hpp"

#include "eds/errors.hpp"
#include "eds/factor.hpp"
#include "eds/primes.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

namespace eds {

namespace {

constexpr uint64_t kDlogTableLimit = 10000;

bool is_fundamental_discriminant(long D) {
    if (D == 0) return false;
    long r = ((D % 4) + 4) % 4;
    if (r != 0 && r != 1) return false;
    auto squarefree = [](long v) {
        if (v < 0) v = -v;
        auto f = factor_int(mpz_class(v));
        if (!f.complete) throw FactoringBudgetExceeded("discriminant too hard to factor");
        for (const auto& [p, e] : f.factors) {
            (void)p;
            if (e > 1) return false;
        }
        return true;
    };
    if (r == 1) return squarefree(D);
    long m = D / 4;
    long mr = ((m % 4) + 4) % 4;
    if (mr != 2 && mr != 3) return false;
    return squarefree(m);
}

uint64_t least_primitive_root(uint64_t q) {
    // q odd prime: test candidates against the prime factors of q-1.
    auto f = factor_int(mpz_class(static_cast<unsigned long>(q - 1)));
    std::vector<uint64_t> pf;
    for (const auto& [p, e] : f.factors) {
        (void)e;
        pf.push_back(p.get_ui());
    }
    for (uint64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (uint64_t p : pf)
            if (powmod_u64(g, (q - 1) / p, q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw EdsError("no primitive root found (modulus not an odd prime?)");
}

}  // namespace

int kronecker(long D, const mpz_class& m) {
    return mpz_si_kronecker(D, m.get_mpz_t());
}

DirichletCharacter DirichletCharacter::kronecker_char(long D, bool strict) {
    if (strict && !is_fundamental_discriminant(D))
        throw InvalidDiscriminant("not a fundamental discriminant: " + std::to_string(D));
    DirichletCharacter chi;
    chi.kind_ = Kind::Kronecker;
    chi.D_ = D;
    chi.q_ = static_cast<uint64_t>(D < 0 ? -D : D);
    chi.order_ = (D == 1) ? 1 : 2;
    chi.even_ = D > 0;
    return chi;
}

DirichletCharacter DirichletCharacter::prime_char(uint64_t q, uint64_t j) {
    if (q < 3 || !is_prime_u64(q))
        throw CompositeModulus("modulus must be an odd prime, got " + std::to_string(q));
    if (j >= q - 1) throw ConfigError("exponent index j must satisfy 0 <= j < q-1");
    DirichletCharacter chi;
    chi.kind_ = Kind::PrimeModulus;
    chi.q_ = q;
    chi.g_ = least_primitive_root(q);
    chi.j_ = j;
    chi.order_ = (q - 1) / std::gcd(j, q - 1);
    chi.even_ = j % 2 == 0;
    if (q < kDlogTableLimit) {
        std::vector<uint32_t> table(q, 0);
        uint64_t acc = 1;
        for (uint64_t a = 0; a + 1 < q; ++a) {
            table[acc] = static_cast<uint32_t>(a);
            acc = mulmod_u64(acc, chi.g_, q);
        }
        chi.dlog_ = std::make_shared<const std::vector<uint32_t>>(std::move(table));
    }
    return chi;
}

uint64_t DirichletCharacter::dlog(uint64_t m) const {
    if (dlog_) return (*dlog_)[m];
    // Baby-step giant-step in the cyclic group (Z/q)^*.
    uint64_t n = q_ - 1;
    uint64_t s = static_cast<uint64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    std::unordered_map<uint64_t, uint64_t> baby;
    baby.reserve(s * 2);
    uint64_t acc = 1;
    for (uint64_t i = 0; i < s; ++i) {
        baby.emplace(acc, i);
        acc = mulmod_u64(acc, g_, q_);
    }
    // acc = g^s; giant factor g^{-s} = (g^s)^{q-2} mod q.
    uint64_t giant = powmod_u64(acc, q_ - 2, q_);
    uint64_t cur = m;
    for (uint64_t k = 0; k <= n / s + 1; ++k) {
        auto it = baby.find(cur);
        if (it != baby.end()) return (k * s + it->second) % n;
        cur = mulmod_u64(cur, giant, q_);
    }
    throw EdsError("discrete log failed (element outside the group?)");
}

CharValue DirichletCharacter::eval(const mpz_class& m) const {
    if (kind_ == Kind::Kronecker) {
        int v = kronecker(D_, m);
        if (v == 0) return {true, 0};
        return {false, v == 1 ? 0ull : 1ull};
    }
    mpz_class q(static_cast<unsigned long>(q_)), r;
    mpz_fdiv_r(r.get_mpz_t(), m.get_mpz_t(), q.get_mpz_t());
    uint64_t mr = r.get_ui();
    if (mr == 0) return {true, 0};
    uint64_t a = dlog(mr);
    uint64_t d = std::gcd(j_, q_ - 1);
    return {false, mulmod_u64(j_ / d, a, order_) % order_};
}

uint64_t DirichletCharacter::value_order(const mpz_class& p) const {
    CharValue v = eval(p);
    if (v.zero) return 0;
    return order_ / std::gcd(v.exponent, order_);
}

std::string DirichletCharacter::literal() const {
    if (kind_ == Kind::Kronecker) return "kronecker:" + std::to_string(D_);
    return "prime:" + std::to_string(q_) + ":" + std::to_string(j_);
}

std::vector<DirichletCharacter> enumerate_characters(uint64_t q, Parity parity) {
    if (q < 3) throw CompositeModulus("modulus must be an odd prime >= 3");
    if (!is_prime_u64(q)) throw CompositeModulus("modulus is composite: " + std::to_string(q));
    std::vector<DirichletCharacter> out;
    for (uint64_t j = 0; j + 1 < q; ++j) {
        if (parity == Parity::Even && j % 2 != 0) continue;
        if (parity == Parity::Odd && j % 2 == 0) continue;
        out.push_back(DirichletCharacter::prime_char(q, j));
    }
    return out;
}

DirichletCharacter parse_character(const std::string& literal) {
    auto fail = [&]() -> DirichletCharacter {
        throw ConfigError("bad character literal '" + literal +
                          "' (expected kronecker:D or prime:q:j)");
    };
    auto colon = literal.find(':');
    if (colon == std::string::npos) return fail();
    std::string kind = literal.substr(0, colon);
    try {
        if (kind == "kronecker") {
            long D = std::stol(literal.substr(colon + 1));
            return DirichletCharacter::kronecker_char(D);
        }
        if (kind == "prime") {
            std::string rest = literal.substr(colon + 1);
            auto colon2 = rest.find(':');
            if (colon2 == std::string::npos) return fail();
            uint64_t q = std::stoull(rest.substr(0, colon2));
            uint64_t j = std::stoull(rest.substr(colon2 + 1));
            return DirichletCharacter::prime_char(q, j);
        }
    } catch (const std::invalid_argument&) {
        return fail();
    } catch (const std::out_of_range&) {
        return fail();
    }
    return fail();
}

}  // namespace eds
