#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace eds {

// All primes <= bound, by Eratosthenes sieve.
std::vector<uint64_t> primes_up_to(uint64_t bound);

// Shared, lazily grown prime table (thread-safe). The returned snapshot
// covers at least [2, bound] and stays valid even if another thread grows
// the table afterwards.
std::shared_ptr<const std::vector<uint64_t>> prime_table(uint64_t bound);

// Deterministic primality for word-sized n (trial by sieve + Miller-Rabin
// via GMP for larger values).
bool is_prime_u64(uint64_t n);

// (a/p) Legendre symbol for odd prime p, a any integer residue.
int legendre_u64(uint64_t a, uint64_t p);

// Modular helpers on 64-bit words (128-bit intermediate products).
uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m);

}  // namespace eds
