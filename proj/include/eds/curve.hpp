#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace eds {

// Integral Weierstrass model y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
// over Q, with the derived b-invariants and discriminant. Immutable.
struct CurveQ {
    mpz_class a1, a2, a3, a4, a6;
    mpz_class b2, b4, b6, b8;
    mpz_class disc;

    bool operator==(const CurveQ&) const = default;
};

// A rational point: infinity, or an exact affine pair (mpq_class keeps
// numerators/denominators in lowest terms with positive denominators).
struct PointQ {
    bool infinity = true;
    mpq_class x, y;

    static PointQ make_infinity() { return PointQ{}; }
    static PointQ make_affine(const mpq_class& x, const mpq_class& y) {
        PointQ P;
        P.infinity = false;
        P.x = x;
        P.y = y;
        return P;
    }
    bool operator==(const PointQ& o) const {
        if (infinity != o.infinity) return false;
        return infinity || (x == o.x && y == o.y);
    }
};

// Reduction of a point modulo p: projective with coprime coordinates, so a
// point with negative x-valuation reduces to the point at infinity.
struct ReducedPointData {
    uint64_t p = 0;
    bool reduces_to_infinity = false;
    bool nonsingular = true;
};

// Constructs the curve and derived invariants; rejects singular models.
CurveQ new_curve(const mpz_class& a1, const mpz_class& a2, const mpz_class& a3,
                 const mpz_class& a4, const mpz_class& a6);

bool on_curve(const CurveQ& c, const PointQ& P);

PointQ neg(const CurveQ& c, const PointQ& P);
PointQ add(const CurveQ& c, const PointQ& P, const PointQ& Q);
PointQ mul(const CurveQ& c, long n, const PointQ& P);

// psi_n evaluated at an affine point (psi_{-n} = -psi_n, psi_0 = 0).
mpq_class division_poly_eval(const CurveQ& c, long n, const PointQ& P);

// Doubling-limit canonical height 4^{-iters} * (1/2) * log H(x(2^iters P)).
double canonical_height(const CurveQ& c, const PointQ& P, int iters = 8);

// True iff P lies on the connected component of the identity in E(R).
// Exact: for disc > 0 the test x >= largest root of the completed-square
// cubic is decided by rational sign evaluations of f, f', f''.
bool is_on_identity_component(const CurveQ& c, const PointQ& P);

// #E(F_p) by enumeration (good reduction required).
uint64_t count_points_mod_p(const CurveQ& c, uint64_t p);

ReducedPointData reduction_data(const CurveQ& c, const PointQ& P, uint64_t p);

// Order of the reduction of P in E(F_p); requires nonsingular reduction.
uint64_t ord_mod_p(const CurveQ& c, const PointQ& P, uint64_t p);

// --- small parsing helpers shared by CLI/config ---
// "a1,a2,a3,a4,a6" (comma-separated integers).
CurveQ parse_curve(const std::string& literal);
// "x_num/x_den,y_num/y_den" (denominators optional) or "O" for infinity.
PointQ parse_point(const std::string& literal);

}  // namespace eds
