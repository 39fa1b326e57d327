#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace eds {

// Value of a character as an exponent of a fixed abstract primitive
// order-th root of unity; only the order of values matters downstream, so
// no floating-point complex numbers are ever involved.
struct CharValue {
    bool zero = false;
    uint64_t exponent = 0;  // residue mod the character order; 0 when zero

    bool is_one() const { return !zero && exponent == 0; }
};

enum class Parity { All, Even, Odd };

// A Dirichlet character: either the quadratic character of a fundamental
// discriminant D (Kronecker symbol, modulus |D|), or a character of prime
// modulus q given by the image of the least primitive root.
class DirichletCharacter {
public:
    // chi(m) = (D|m); strict mode validates that D is fundamental.
    static DirichletCharacter kronecker_char(long D, bool strict = true);
    // chi(g^a) = zeta_{q-1}^{j a} for the least primitive root g mod q.
    static DirichletCharacter prime_char(uint64_t q, uint64_t j);

    uint64_t modulus() const { return q_; }
    uint64_t order() const { return order_; }
    bool is_principal() const { return order_ == 1; }
    bool is_even() const { return even_; }

    CharValue eval(const mpz_class& m) const;
    CharValue eval(long m) const { return eval(mpz_class(m)); }

    // Multiplicative order of chi(p); 0 is the Zero-marker for p | q.
    uint64_t value_order(const mpz_class& p) const;

    // "kronecker:D" or "prime:q:j"
    std::string literal() const;

private:
    enum class Kind { Kronecker, PrimeModulus };
    Kind kind_ = Kind::Kronecker;
    long D_ = 0;
    uint64_t q_ = 0;
    uint64_t g_ = 0;
    uint64_t j_ = 0;
    uint64_t order_ = 1;
    bool even_ = true;
    // Discrete-log table for small prime moduli: dlog_[m] = a with g^a = m.
    std::shared_ptr<const std::vector<uint32_t>> dlog_;

    uint64_t dlog(uint64_t m) const;
};

// Standard Kronecker symbol (D|m), all conventions included.
int kronecker(long D, const mpz_class& m);
inline int kronecker(long D, long m) { return kronecker(D, mpz_class(m)); }

// The q-1 characters of prime modulus q >= 3, optionally filtered by parity.
std::vector<DirichletCharacter> enumerate_characters(uint64_t q, Parity parity = Parity::All);

DirichletCharacter parse_character(const std::string& literal);

}  // namespace eds
