#include "eds/curve.hpp"

#include "eds/errors.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace eds {

CurveQ new_curve(const mpz_class& a1, const mpz_class& a2, const mpz_class& a3,
                 const mpz_class& a4, const mpz_class& a6) {
    CurveQ c;
    c.a1 = a1;
    c.a2 = a2;
    c.a3 = a3;
    c.a4 = a4;
    c.a6 = a6;
    c.b2 = a1 * a1 + 4 * a2;
    c.b4 = 2 * a4 + a1 * a3;
    c.b6 = a3 * a3 + 4 * a6;
    mpz_class num = c.b2 * c.b6 - c.b4 * c.b4;
    // b2*b6 - b4^2 is always divisible by 4 for integer coefficients.
    mpz_divexact_ui(c.b8.get_mpz_t(), num.get_mpz_t(), 4);
    c.disc = -c.b2 * c.b2 * c.b8 - 8 * c.b4 * c.b4 * c.b4 - 27 * c.b6 * c.b6 +
             9 * c.b2 * c.b4 * c.b6;
    if (c.disc == 0) throw SingularCurve("discriminant is zero");
    return c;
}

bool on_curve(const CurveQ& c, const PointQ& P) {
    if (P.infinity) return true;
    mpq_class lhs = P.y * P.y + c.a1 * P.x * P.y + c.a3 * P.y;
    mpq_class rhs = P.x * P.x * P.x + c.a2 * P.x * P.x + c.a4 * P.x + c.a6;
    return lhs == rhs;
}

namespace {
void require_on_curve(const CurveQ& c, const PointQ& P) {
    if (!on_curve(c, P)) throw PointNotOnCurve("point does not satisfy the curve equation");
}
}  // namespace

PointQ neg(const CurveQ& c, const PointQ& P) {
    if (P.infinity) return P;
    return PointQ::make_affine(P.x, -P.y - c.a1 * P.x - c.a3);
}

PointQ add(const CurveQ& c, const PointQ& P, const PointQ& Q) {
    require_on_curve(c, P);
    require_on_curve(c, Q);
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    mpq_class lambda;
    if (P.x == Q.x) {
        if (P.y + Q.y + c.a1 * P.x + c.a3 == 0) return PointQ::make_infinity();
        // Tangent slope; the denominator is nonzero since Q != -P.
        mpq_class den = 2 * P.y + c.a1 * P.x + c.a3;
        lambda = (3 * P.x * P.x + 2 * c.a2 * P.x + c.a4 - c.a1 * P.y) / den;
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    mpq_class x3 = lambda * lambda + c.a1 * lambda - c.a2 - P.x - Q.x;
    mpq_class y3 = lambda * (P.x - x3) - P.y - c.a1 * x3 - c.a3;
    return PointQ::make_affine(x3, y3);
}

PointQ mul(const CurveQ& c, long n, const PointQ& P) {
    require_on_curve(c, P);
    if (n == 0 || P.infinity) return PointQ::make_infinity();
    PointQ base = n < 0 ? neg(c, P) : P;
    unsigned long k = n < 0 ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
    PointQ acc = PointQ::make_infinity();
    // Double-and-add, most significant bit first.
    int bits = 0;
    for (unsigned long t = k; t; t >>= 1) ++bits;
    for (int i = bits - 1; i >= 0; --i) {
        acc = add(c, acc, acc);
        if ((k >> i) & 1) acc = add(c, acc, base);
    }
    return acc;
}

mpq_class division_poly_eval(const CurveQ& c, long n, const PointQ& P) {
    require_on_curve(c, P);
    if (P.infinity) throw PointNotOnCurve("division polynomial requires an affine point");
    bool negate = n < 0;
    unsigned long m = negate ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
    const mpq_class& x = P.x;
    const mpq_class& y = P.y;
    std::vector<mpq_class> psi(std::max<unsigned long>(m, 4) + 1);
    psi[0] = 0;
    psi[1] = 1;
    psi[2] = 2 * y + c.a1 * x + c.a3;
    mpq_class x2 = x * x, x3 = x2 * x;
    psi[3] = 3 * x2 * x2 + c.b2 * x3 + 3 * c.b4 * x2 + 3 * c.b6 * x + c.b8;
    psi[4] = psi[2] * (2 * x3 * x3 + c.b2 * x3 * x2 + 5 * c.b4 * x2 * x2 + 10 * c.b6 * x3 +
                       10 * c.b8 * x2 + (c.b2 * c.b8 - c.b4 * c.b6) * x +
                       (c.b4 * c.b8 - c.b6 * c.b6));
    for (unsigned long i = 5; i <= m; ++i) {
        unsigned long h = i / 2;
        if (i % 2 == 1) {
            psi[i] = psi[h + 2] * psi[h] * psi[h] * psi[h] -
                     psi[h + 1] * psi[h + 1] * psi[h + 1] * psi[h - 1];
        } else {
            if (psi[2] == 0) {
                psi[i] = 0;  // 2-torsion point: all even-index values vanish
                continue;
            }
            psi[i] = psi[h] *
                     (psi[h + 2] * psi[h - 1] * psi[h - 1] - psi[h - 2] * psi[h + 1] * psi[h + 1]) /
                     psi[2];
        }
    }
    mpq_class v = psi[m];
    return negate ? mpq_class(-v) : v;
}

namespace {
// Accurate log of |z| for huge integers.
double log_mpz(const mpz_class& z) {
    signed long exp2;
    double d = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(std::fabs(d)) + static_cast<double>(exp2) * std::log(2.0);
}

double naive_x_height(const PointQ& P) {
    const mpz_class num = P.x.get_num(), den = P.x.get_den();
    mpz_class a = abs(num);
    return log_mpz(a > den ? a : den);
}
}  // namespace

double canonical_height(const CurveQ& c, const PointQ& P, int iters) {
    require_on_curve(c, P);
    if (P.infinity) throw TorsionPoint("height of the identity");
    // All rational torsion has order <= 12; scanning multiples to 16 is a
    // complete torsion test.
    PointQ Q = P;
    for (int n = 2; n <= 16; ++n) {
        Q = add(c, Q, P);
        if (Q.infinity) throw TorsionPoint("point has finite order");
    }
    Q = P;
    for (int k = 0; k < iters; ++k) {
        Q = add(c, Q, Q);
        if (Q.infinity) throw TorsionPoint("point has finite order");
    }
    return std::ldexp(0.5 * naive_x_height(Q), -2 * iters);
}

bool is_on_identity_component(const CurveQ& c, const PointQ& P) {
    if (P.infinity) return true;
    if (c.disc < 0) return true;  // E(R) connected
    // Completed square: w^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 =: g(x).
    // x >= (largest root of g)  <=>  g(x) >= 0, g'(x) >= 0, g''(x) >= 0,
    // decided exactly over Q.
    const mpq_class& x = P.x;
    mpq_class g = 4 * x * x * x + c.b2 * x * x + 2 * c.b4 * x + c.b6;
    mpq_class gp = 12 * x * x + 2 * c.b2 * x + 2 * c.b4;
    mpq_class gpp = 24 * x + 2 * c.b2;
    return g >= 0 && gp >= 0 && gpp >= 0;
}

uint64_t count_points_mod_p(const CurveQ& c, uint64_t p) {
    if (mpz_divisible_ui_p(c.disc.get_mpz_t(), p))
        throw BadReductionPrime("prime divides the discriminant");
    auto red = [&](const mpz_class& z) { return mpz_fdiv_ui(z.get_mpz_t(), p); };
    uint64_t n = 1;  // the point at infinity
    if (p == 2) {
        uint64_t a1 = red(c.a1), a2 = red(c.a2), a3 = red(c.a3), a4 = red(c.a4), a6 = red(c.a6);
        for (uint64_t x = 0; x < 2; ++x)
            for (uint64_t y = 0; y < 2; ++y) {
                uint64_t lhs = (y * y + a1 * x * y + a3 * y) % 2;
                uint64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                if (lhs == rhs) ++n;
            }
    } else {
        uint64_t b2 = red(c.b2), b4 = red(c.b4), b6 = red(c.b6);
        std::vector<unsigned char> is_sq(p, 0);
        for (uint64_t t = 0; t < p; ++t) is_sq[t * t % p] = 1;
        for (uint64_t x = 0; x < p; ++x) {
            uint64_t g = (((4 * x + b2) % p) * x % p * x % p + (2 * b4 % p) * x + b6) % p;
            if (g == 0)
                n += 1;
            else if (is_sq[g])
                n += 2;
        }
    }
    // Hasse bound sanity: |n - p - 1| <= 2 sqrt(p).
    long long d = static_cast<long long>(n) - static_cast<long long>(p) - 1;
    if (static_cast<unsigned long long>(d * d) > 4 * p)
        throw EdsError("point count violates the Hasse bound");
    return n;
}

namespace {
long vp_of_mpz(const mpz_class& z, uint64_t p) {
    if (z == 0) throw ZeroInput("valuation of zero");
    mpz_class m = z;
    long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++v;
    }
    return v;
}

uint64_t mod_inverse(uint64_t a, uint64_t p) {
    mpz_class r, az(static_cast<unsigned long>(a)), pz(static_cast<unsigned long>(p));
    if (mpz_invert(r.get_mpz_t(), az.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw EdsError("no modular inverse");
    return mpz_get_ui(r.get_mpz_t());
}

// Residue of a rational with p not dividing its denominator.
uint64_t red_rat(const mpq_class& r, uint64_t p) {
    uint64_t num = mpz_fdiv_ui(r.get_num().get_mpz_t(), p);
    uint64_t den = mpz_fdiv_ui(r.get_den().get_mpz_t(), p);
    return num * mod_inverse(den, p) % p;
}

struct FpPoint {
    bool infinity = true;
    uint64_t x = 0, y = 0;
};

struct FpCurve {
    uint64_t p, a1, a2, a3, a4;
    uint64_t sub(uint64_t a, uint64_t b) const { return (a + p - b % p) % p; }
};

FpPoint fp_add(const FpCurve& c, const FpPoint& P, const FpPoint& Q) {
    const uint64_t p = c.p;
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    uint64_t lambda;
    if (P.x == Q.x) {
        if ((P.y + Q.y + c.a1 * P.x % p + c.a3) % p == 0) return FpPoint{};
        uint64_t den = (2 * P.y + c.a1 * P.x % p + c.a3) % p;
        uint64_t num =
            ((3 * P.x % p) * P.x + (2 * c.a2 % p) * P.x + c.a4 + c.sub(0, c.a1 * P.y % p)) % p;
        lambda = num * mod_inverse(den, p) % p;
    } else {
        uint64_t num = c.sub(Q.y, P.y);
        uint64_t den = c.sub(Q.x, P.x);
        lambda = num * mod_inverse(den, p) % p;
    }
    uint64_t x3 = c.sub(c.sub((lambda * lambda + c.a1 * lambda) % p, c.a2), (P.x + Q.x) % p);
    uint64_t y3 = c.sub(c.sub(lambda * c.sub(P.x, x3) % p, P.y), (c.a1 * x3 + c.a3) % p);
    return FpPoint{false, x3, y3};
}
}  // namespace

ReducedPointData reduction_data(const CurveQ& c, const PointQ& P, uint64_t p) {
    require_on_curve(c, P);
    ReducedPointData d;
    d.p = p;
    if (P.infinity) {
        d.reduces_to_infinity = true;
        return d;
    }
    long vx = vp_of_mpz(P.x.get_den(), p);
    if (vx > 0) {
        // Negative x-valuation: the projective reduction is O.
        d.reduces_to_infinity = true;
        return d;
    }
    uint64_t xr = red_rat(P.x, p), yr = red_rat(P.y, p);
    auto red = [&](const mpz_class& z) { return mpz_fdiv_ui(z.get_mpz_t(), p); };
    uint64_t a1 = red(c.a1), a2 = red(c.a2), a3 = red(c.a3), a4 = red(c.a4);
    uint64_t fy = (2 * yr + a1 * xr + a3) % p;
    // F_x = a1 y - 3x^2 - 2 a2 x - a4 mod p.
    uint64_t fx = (a1 * yr % p + 4 * p * p - (3 * xr % p) * xr % p - (2 * a2 % p) * xr % p - a4) % p;
    d.nonsingular = !(fy == 0 && fx == 0);
    return d;
}

uint64_t ord_mod_p(const CurveQ& c, const PointQ& P, uint64_t p) {
    ReducedPointData d = reduction_data(c, P, p);
    if (!d.nonsingular) throw SingularReduction("point reduces to the singular point");
    if (d.reduces_to_infinity) return 1;
    FpCurve fc{p, mpz_fdiv_ui(c.a1.get_mpz_t(), p), mpz_fdiv_ui(c.a2.get_mpz_t(), p),
               mpz_fdiv_ui(c.a3.get_mpz_t(), p), mpz_fdiv_ui(c.a4.get_mpz_t(), p)};
    FpPoint base{false, red_rat(P.x, p), red_rat(P.y, p)};
    FpPoint acc = base;
    uint64_t bound = 2 * p + 8;  // covers #E^ns(F_p) in all reduction types
    for (uint64_t m = 1; m <= bound; ++m) {
        if (acc.infinity) {
            // At good reduction the order divides the group order.
            if (!mpz_divisible_ui_p(c.disc.get_mpz_t(), p)) {
                uint64_t N = count_points_mod_p(c, p);
                if (N % m != 0) throw EdsError("order does not divide the group order");
            }
            return m;
        }
        acc = fp_add(fc, acc, base);
    }
    throw EdsError("order search did not terminate");
}

CurveQ parse_curve(const std::string& literal) {
    std::vector<mpz_class> a;
    std::stringstream ss(literal);
    std::string tok;
    while (std::getline(ss, tok, ',')) a.emplace_back(tok);
    if (a.size() != 5) throw ConfigError("curve literal needs 5 comma-separated integers");
    return new_curve(a[0], a[1], a[2], a[3], a[4]);
}

PointQ parse_point(const std::string& literal) {
    if (literal == "O" || literal == "inf" || literal == "infinity")
        return PointQ::make_infinity();
    std::stringstream ss(literal);
    std::string xs, ys;
    if (!std::getline(ss, xs, ',') || !std::getline(ss, ys, ','))
        throw ConfigError("point literal needs two comma-separated rationals");
    mpq_class x(xs), y(ys);
    x.canonicalize();
    y.canonicalize();
    return PointQ::make_affine(x, y);
}

}  // namespace eds
