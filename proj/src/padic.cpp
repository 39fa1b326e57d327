#include "eds/padic.hpp"

#include "eds/errors.hpp"

namespace eds {

long vp_rational(const mpq_class& r, uint64_t p) {
    if (r == 0) throw ZeroInput("valuation of zero");
    auto count = [&](const mpz_class& z) {
        mpz_class m = z;
        long v = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++v;
        }
        return v;
    };
    long vn = count(r.get_num());
    if (vn > 0) return vn;  // canonical form: num and den are coprime
    return -count(r.get_den());
}

PointValuation vp_point(const CurveQ& c, const PointQ& P, uint64_t p) {
    if (!on_curve(c, P)) throw PointNotOnCurve("valuation of a point not on the curve");
    PointValuation pv;
    pv.p = p;
    if (P.infinity) {
        pv.infinite = true;
        return pv;
    }
    long vx = P.x == 0 ? 0 : vp_rational(P.x, p);
    if (vx >= 0) {
        pv.v = 0;
        return pv;
    }
    if ((-vx) % 2 != 0)
        throw OddNegativeXValuation("odd denominator valuation: model is not integral at p");
    pv.v = (-vx) / 2;
    return pv;
}

uint64_t ord_mod_pk(const CurveQ& c, const PointQ& P, uint64_t p, long k) {
    if (k <= 0) return 1;
    if (vp_point(c, P, p).at_least(k)) return 1;
    uint64_t m = ord_mod_p(c, P, p);  // throws SingularReduction when needed
    PointQ Q = mul(c, static_cast<long>(m), P);
    while (!vp_point(c, Q, p).at_least(k)) {
        m *= p;
        Q = mul(c, static_cast<long>(p), Q);
    }
    return m;
}

std::pair<long, long> mul_valuation_pair(const CurveQ& c, const PointQ& P, uint64_t p, long n) {
    if (n == 0) throw ZeroInput("multiplier must be nonzero");
    PointValuation vP = vp_point(c, P, p);
    if (!vP.infinite && vP.v < 1)
        throw NotInKernelOfReduction("point is not in the kernel of reduction at p");
    long vn = 0;
    for (long t = n < 0 ? -n : n; t % static_cast<long>(p) == 0; t /= static_cast<long>(p)) ++vn;
    PointQ Q = mul(c, n, P);
    PointValuation vQ = vp_point(c, Q, p);
    if (vQ.infinite) throw TorsionPoint("nP is the identity");
    long lhs = vQ.v;
    long rhs = (vP.infinite ? lhs : vP.v) + vn;
    return {lhs, rhs};
}

}  // namespace eds
