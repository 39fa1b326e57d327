#pragma once

#include "eds/curve.hpp"

#include <cstdint>

namespace eds {

// Depth of a point in the p-adic filtration: v = max{0, -v_p(x)/2} for
// affine points; the identity gets an infinity sentinel.
struct PointValuation {
    uint64_t p = 0;
    bool infinite = false;  // set for the point at infinity
    long v = 0;

    bool at_least(long k) const { return infinite || v >= k; }
};

// Exact p-adic valuation of a nonzero rational (can be negative).
long vp_rational(const mpq_class& r, uint64_t p);

PointValuation vp_point(const CurveQ& c, const PointQ& P, uint64_t p);

// Least m >= 1 with v_p(mP) >= k. Starts from the order modulo p and then
// multiplies by p, re-evaluating the valuation exactly at every step (the
// valuation can jump by more than 1, notably at p = 2).
uint64_t ord_mod_pk(const CurveQ& c, const PointQ& P, uint64_t p, long k);

// (v_p(nP), v_p(P) + v_p(n)) for points in the kernel of reduction; the
// first component is >= the second, with equality when p does not divide n.
std::pair<long, long> mul_valuation_pair(const CurveQ& c, const PointQ& P, uint64_t p, long n);

}  // namespace eds
