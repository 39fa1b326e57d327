#include "eds/real_mp.hpp"

#include "eds/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace eds {

MpReal::MpReal(mpfr_prec_t bits) {
    mpfr_init2(v_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
    mpfr_set_zero(v_, 1);
}

MpReal::MpReal(const MpReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

MpReal& MpReal::operator=(const MpReal& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

MpReal::MpReal(MpReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

MpReal& MpReal::operator=(MpReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
}

MpReal::~MpReal() { mpfr_clear(v_); }

MpReal MpReal::of(double v, mpfr_prec_t bits) {
    MpReal r(bits);
    mpfr_set_d(r.v_, v, MPFR_RNDN);
    return r;
}

MpReal MpReal::of(long v, mpfr_prec_t bits) {
    MpReal r(bits);
    mpfr_set_si(r.v_, v, MPFR_RNDN);
    return r;
}

MpReal MpReal::of(const mpq_class& v, mpfr_prec_t bits) {
    MpReal r(bits);
    mpfr_set_q(r.v_, v.get_mpq_t(), MPFR_RNDN);
    return r;
}

std::string MpReal::str(size_t digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
    std::string out(s ? s : "");
    mpfr_free_str(s);
    return out;
}

namespace {
mpfr_prec_t join(const MpReal& a, const MpReal& b) {
    return std::max(a.precision(), b.precision());
}
}  // namespace

MpReal MpReal::operator-() const {
    MpReal r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

MpReal operator+(const MpReal& a, const MpReal& b) {
    MpReal r(join(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

MpReal operator-(const MpReal& a, const MpReal& b) {
    MpReal r(join(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

MpReal operator*(const MpReal& a, const MpReal& b) {
    MpReal r(join(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

MpReal operator/(const MpReal& a, const MpReal& b) {
    MpReal r(join(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

bool operator<(const MpReal& a, const MpReal& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
bool operator>(const MpReal& a, const MpReal& b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }

MpReal abs(const MpReal& v) {
    MpReal r(v.precision());
    mpfr_abs(r.raw(), v.raw(), MPFR_RNDN);
    return r;
}

MpReal frac01(const MpReal& v) {
    MpReal f(v.precision()), r(v.precision());
    mpfr_floor(f.raw(), v.raw());
    mpfr_sub(r.raw(), v.raw(), f.raw(), MPFR_RNDN);
    return r;
}

long floor_long(const MpReal& v) { return mpfr_get_si(v.raw(), MPFR_RNDD); }

MpReal dist_to_integer(const MpReal& v) {
    MpReal n(v.precision()), r(v.precision());
    mpfr_round(n.raw(), v.raw());
    mpfr_sub(r.raw(), v.raw(), n.raw(), MPFR_RNDN);
    mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

namespace {

MpReal sqrt_mp(const MpReal& v) {
    MpReal r(v.precision());
    mpfr_sqrt(r.raw(), v.raw(), MPFR_RNDN);
    return r;
}

MpReal div_ui(const MpReal& v, unsigned long d) {
    MpReal r(v.precision());
    mpfr_div_ui(r.raw(), v.raw(), d, MPFR_RNDN);
    return r;
}

MpReal hypot_mp(const MpReal& a, const MpReal& b) {
    MpReal r(join(a, b));
    mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

// 2^e as an MpReal (for convergence thresholds).
MpReal pow2(long e, mpfr_prec_t p) {
    MpReal r(p);
    mpfr_set_ui_2exp(r.raw(), 1, e, MPFR_RNDN);
    return r;
}

// Shared tail of the Carlson duplication: the degree-5 symmetric series in
// E2 = e2(X,Y,Z), E3 = e3(X,Y,Z) divided by sqrt(A).
MpReal rf_series(const MpReal& e2, const MpReal& e3, const MpReal& A) {
    mpfr_prec_t p = A.precision();
    MpReal s = MpReal::of(1L, p) - div_ui(e2, 10) + div_ui(e3, 14) +
               div_ui(e2 * e2, 24) - div_ui(MpReal::of(3L, p) * e2 * e3, 44);
    return s / sqrt_mp(A);
}

// Carlson symmetric integral R_F(a, b, c), all arguments real >= 0 with at
// most one of them zero, by the standard duplication iteration.
MpReal rf_real(MpReal a, MpReal b, MpReal c) {
    mpfr_prec_t p = std::max(join(a, b), c.precision());
    MpReal A = div_ui(a + b + c, 3);
    const MpReal da = A - a, db = A - b, dc = A - c;
    MpReal spread = std::max({abs(da), abs(db), abs(dc)}, [](const MpReal& x, const MpReal& y) {
        return x < y;
    });
    const MpReal thresh = pow2(-(static_cast<long>(p) + 10) / 6 - 1, p);
    MpReal scale = MpReal::of(1L, p);  // 4^m
    long iters = 0;
    while (spread > thresh * scale * abs(A)) {
        if (++iters > static_cast<long>(p) + 64)
            throw PrecisionLoss("elliptic integral iteration failed to converge");
        MpReal sa = sqrt_mp(a), sb = sqrt_mp(b), sc = sqrt_mp(c);
        MpReal lam = sa * sb + sb * sc + sc * sa;
        a = div_ui(a + lam, 4);
        b = div_ui(b + lam, 4);
        c = div_ui(c + lam, 4);
        A = div_ui(A + lam, 4);
        mpfr_mul_2ui(scale.raw(), scale.raw(), 2, MPFR_RNDN);
    }
    MpReal denom = scale * A;
    MpReal X = da / denom, Y = db / denom, Z = dc / denom;
    MpReal e2 = X * Y - Z * Z;  // = e2(X,Y,Z) since X+Y+Z = 0
    MpReal e3 = X * Y * Z;
    return rf_series(e2, e3, A);
}

// R_F(a, w, conj(w)) for real a >= 0 and w = wre + i*wim with wre >= 0.
// The lambda of each duplication step is real, so the state stays of the
// same shape and the result is real.
MpReal rf_conj(MpReal a, MpReal wre, MpReal wim) {
    mpfr_prec_t p = std::max(join(a, wre), wim.precision());
    mpfr_abs(wim.raw(), wim.raw(), MPFR_RNDN);
    MpReal A = div_ui(a + wre + wre, 3);
    const MpReal da = A - a;
    const MpReal dwre = A - wre, dwim = -wim;
    MpReal spread = std::max({abs(da), hypot_mp(dwre, dwim)},
                             [](const MpReal& x, const MpReal& y) { return x < y; });
    const MpReal thresh = pow2(-(static_cast<long>(p) + 10) / 6 - 1, p);
    MpReal scale = MpReal::of(1L, p);  // 4^m
    long iters = 0;
    while (spread > thresh * scale * abs(A)) {
        if (++iters > static_cast<long>(p) + 64)
            throw PrecisionLoss("elliptic integral iteration failed to converge");
        MpReal sa = sqrt_mp(a);
        MpReal rw = hypot_mp(wre, wim);
        MpReal sre = sqrt_mp(div_ui(rw + wre, 2));  // Re(sqrt(w)), principal
        // sqrt(w) * conj(sqrt(w)) = |w| and the cross terms pair up real.
        MpReal lam = (sa * sre + sa * sre) + rw;
        a = div_ui(a + lam, 4);
        wre = div_ui(wre + lam, 4);
        wim = div_ui(wim, 4);
        A = div_ui(A + lam, 4);
        mpfr_mul_2ui(scale.raw(), scale.raw(), 2, MPFR_RNDN);
    }
    MpReal denom = scale * A;
    MpReal X = da / denom;
    MpReal yre = dwre / denom, yim = dwim / denom;
    MpReal ynorm = yre * yre + yim * yim;  // Y * conj(Y)
    // With X + Y + Z = 0 and Z = conj(Y): e2 = |Y|^2 - X^2, e3 = X |Y|^2.
    MpReal e2 = ynorm - X * X;
    MpReal e3 = X * ynorm;
    return rf_series(e2, e3, A);
}

// Roots of the completed-square cubic x^3 + (b2/4) x^2 + (b4/2) x + b6/4.
// Exactly one real root when disc(E) < 0, three when disc(E) > 0; r1 is
// always the largest real root.
struct CubicRoots {
    MpReal r1;
    bool complex_pair = false;
    MpReal re2, im2;  // complex case: r2,r3 = re2 +- i*im2 (im2 > 0)
    MpReal r2, r3;    // real case: r1 > r2 >= r3
};

CubicRoots cubic_roots(const CurveQ& c, mpfr_prec_t p) {
    MpReal B2 = MpReal::of(mpq_class(c.b2, 4), p);
    MpReal B4 = MpReal::of(mpq_class(c.b4, 2), p);
    MpReal B6 = MpReal::of(mpq_class(c.b6, 4), p);

    auto f = [&](const MpReal& x) { return ((x + B2) * x + B4) * x + B6; };
    auto fp = [&](const MpReal& x) {
        return (MpReal::of(3L, p) * x + B2 + B2) * x + B4;
    };

    // Newton from above the Cauchy bound: on [r1, inf) the cubic is positive,
    // increasing and convex, so the iteration decreases monotonically to r1.
    MpReal x = MpReal::of(1L, p) + abs(B2) + abs(B4) + abs(B6);
    for (int i = 0; i < 64 + static_cast<int>(p); ++i) {
        MpReal nxt = x - f(x) / fp(x);
        if (!(nxt < x)) break;
        x = nxt;
    }

    CubicRoots out{MpReal(p), false, MpReal(p), MpReal(p), MpReal(p), MpReal(p)};
    out.r1 = x;
    MpReal c1 = B2 + x;            // deflation: x^2 + c1 x + c0
    MpReal c0 = B4 + c1 * x;
    MpReal disc2 = c1 * c1 - MpReal::of(4L, p) * c0;
    if (c.disc > 0) {
        if (disc2.sign() < 0) throw PrecisionLoss("real cubic roots did not separate");
        MpReal s = sqrt_mp(disc2);
        out.r2 = div_ui(s - c1, 2);
        out.r3 = div_ui(-(c1 + s), 2);
    } else {
        if (disc2.sign() >= 0)
            throw PrecisionLoss("complex root pair did not separate");
        out.complex_pair = true;
        out.re2 = div_ui(-c1, 2);
        out.im2 = div_ui(sqrt_mp(-disc2), 2);
    }
    return out;
}

// Normalized incomplete integral z(x0) = R_F(x0-r1, x0-r2, x0-r3) for
// x0 >= r1; strictly decreasing in x0, z(r1) = Omega/2, z(inf) = 0.
MpReal z_of_x(const CubicRoots& rts, const MpReal& x0, mpfr_prec_t p) {
    MpReal a = x0 - rts.r1;
    if (a.sign() < 0) a = MpReal(p);  // x0 = r1 up to rounding
    if (rts.complex_pair) return rf_conj(a, x0 - rts.re2, rts.im2);
    return rf_real(a, x0 - rts.r2, x0 - rts.r3);
}

}  // namespace

RealLog real_period_and_log(const CurveQ& c, const PointQ& P, unsigned digits) {
    if (digits < 8) throw ConfigError("precision below 8 digits is not supported");
    const mpfr_prec_t p =
        static_cast<mpfr_prec_t>(static_cast<double>(digits) * 3.3219280948873626) + 64;

    CubicRoots rts = cubic_roots(c, p);
    MpReal omega = rts.complex_pair
                       ? rf_conj(MpReal(p), rts.r1 - rts.re2, rts.im2)
                       : rf_real(MpReal(p), rts.r1 - rts.r2, rts.r1 - rts.r3);
    mpfr_mul_2ui(omega.raw(), omega.raw(), 1, MPFR_RNDN);

    // Log of P itself on the identity component, of 2P otherwise.
    PointQ Q = P;
    if (!P.infinity && !is_on_identity_component(c, P)) Q = add(c, P, P);
    if (Q.infinity) return {std::move(omega), MpReal(p)};

    MpReal x0 = MpReal::of(Q.x, p);
    MpReal z = z_of_x(rts, x0, p);

    mpq_class psi2 = 2 * Q.y + mpq_class(c.a1) * Q.x + mpq_class(c.a3);
    MpReal t = sgn(psi2) > 0 ? MpReal::of(1L, p) - z / omega : z / omega;

    // Invert the logarithm by bisection (z is monotone on [r1, inf)) and
    // require the round trip to land back on the exact x-coordinate.
    MpReal lo = rts.r1;
    MpReal hi = rts.r1 + MpReal::of(1L, p);
    int doublings = 0;
    while (z_of_x(rts, hi, p) > z) {
        hi = rts.r1 + (hi - rts.r1) + (hi - rts.r1);
        if (++doublings > 80) throw PrecisionLoss("log inversion bracket failed");
    }
    for (mpfr_prec_t i = 0; i + 8 < p; ++i) {
        MpReal mid = div_ui(lo + hi, 2);
        if (z_of_x(rts, mid, p) > z)
            lo = mid;
        else
            hi = mid;
    }
    MpReal xrec = div_ui(lo + hi, 2);
    MpReal tol(p);
    {
        MpReal ten = MpReal::of(10L, p);
        mpfr_pow_si(tol.raw(), ten.raw(), 3 - static_cast<long>(digits), MPFR_RNDN);
    }
    if (abs(xrec - x0) > tol)
        throw PrecisionLoss("elliptic log round trip missed the x-coordinate");

    return {std::move(omega), std::move(t)};
}

}  // namespace eds
