#include "eds/primes.hpp"

#include <gmpxx.h>

#include <mutex>

namespace eds {

std::vector<uint64_t> primes_up_to(uint64_t bound) {
    std::vector<uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> comp(bound + 1, false);
    for (uint64_t p = 2; p * p <= bound; ++p)
        if (!comp[p])
            for (uint64_t q = p * p; q <= bound; q += p) comp[q] = true;
    for (uint64_t p = 2; p <= bound; ++p)
        if (!comp[p]) out.push_back(p);
    return out;
}

namespace {
std::mutex table_mu;
std::shared_ptr<const std::vector<uint64_t>> table;
uint64_t table_bound = 0;
}  // namespace

std::shared_ptr<const std::vector<uint64_t>> prime_table(uint64_t bound) {
    std::lock_guard<std::mutex> lock(table_mu);
    if (!table || bound > table_bound) {
        table = std::make_shared<const std::vector<uint64_t>>(primes_up_to(bound));
        table_bound = bound;
    }
    return table;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
    return mpz_probab_prime_p(z.get_mpz_t(), 30) != 0;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

int legendre_u64(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    uint64_t e = powmod_u64(a, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

}  // namespace eds
