#pragma once

#include "eds/curve.hpp"

#include <cstdarg>  // before mpfr.h so the formatted-output API is declared
#include <cstdio>
#include <mpfr.h>

#include <string>

namespace eds {

// Minimal RAII wrapper around an MPFR real.  Arithmetic results carry the
// larger precision of the operands; rounding is always to nearest.
class MpReal {
public:
    explicit MpReal(mpfr_prec_t bits = 192);
    MpReal(const MpReal& o);
    MpReal& operator=(const MpReal& o);
    MpReal(MpReal&& o) noexcept;
    MpReal& operator=(MpReal&& o) noexcept;
    ~MpReal();

    static MpReal of(double v, mpfr_prec_t bits);
    static MpReal of(long v, mpfr_prec_t bits);
    static MpReal of(const mpq_class& v, mpfr_prec_t bits);

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string str(size_t digits = 20) const;
    int sign() const { return mpfr_sgn(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    MpReal operator-() const;
    friend MpReal operator+(const MpReal& a, const MpReal& b);
    friend MpReal operator-(const MpReal& a, const MpReal& b);
    friend MpReal operator*(const MpReal& a, const MpReal& b);
    friend MpReal operator/(const MpReal& a, const MpReal& b);
    friend bool operator<(const MpReal& a, const MpReal& b);
    friend bool operator>(const MpReal& a, const MpReal& b);

private:
    mpfr_t v_;
};

MpReal abs(const MpReal& v);
// v - floor(v), always in [0, 1).
MpReal frac01(const MpReal& v);
// floor(v) as a long (value must fit).
long floor_long(const MpReal& v);
// Distance from v to the nearest integer.
MpReal dist_to_integer(const MpReal& v);

// Real period of the identity component and normalized elliptic logarithm.
struct RealLog {
    MpReal omega;  // period of E(R)^0 under the normalization used throughout
    MpReal t;      // elliptic log of the relevant point, scaled into [0, 1)
};

// Computes (Omega, t) at the requested decimal precision.  The logarithm is
// taken of P itself when P lies on the identity component, and of 2P
// otherwise (even multiples always land on the identity component).  For
// P at infinity (or 2P at infinity) t = 0.  The result is validated by
// inverting the logarithm numerically and comparing the reconstructed
// x-coordinate against the exact one; disagreement beyond 10^(3-digits)
// raises PrecisionLoss.
RealLog real_period_and_log(const CurveQ& c, const PointQ& P, unsigned digits);

}  // namespace eds
