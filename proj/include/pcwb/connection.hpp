#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcwb/ratfunc.hpp"

namespace pcwb::connection {

using exactmath::FieldElem;
using exactmath::GroundField;
using exactmath::PlaceId;
using exactmath::Poly;
using exactmath::RatFunc;
using exactmath::TruncSeries;
using exactmath::Valuation;

enum class CurveKind { p1_minus_012inf, affine_elliptic, a1_minus_fourth_roots };

// Curve descriptor.  p1_minus_012inf and a1_minus_fourth_roots use the
// derivation d/dx; affine_elliptic (y^2 = x^3 - x) uses
// D = (2y/(3x^2-1)) d/dx + d/dy, regular where 3x^2 - 1 is invertible.
struct CurveDesc {
    CurveKind kind;
    std::string variable = "x";
    bool is_elliptic() const { return kind == CurveKind::affine_elliptic; }
};

std::string curve_tag(CurveKind k);
CurveKind curve_from_tag(const std::string& tag);

// Function a(x) + b(x)*y on the curve; b == 0 on the rational curves.
struct CurveFn {
    RatFunc a, b;
    CurveFn() = default;
    explicit CurveFn(RatFunc a_, RatFunc b_ = RatFunc()) : a(std::move(a_)), b(std::move(b_)) {}
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    bool has_y_part() const { return !b.is_zero(); }
};

CurveFn cf_add(const CurveFn& u, const CurveFn& v);
CurveFn cf_sub(const CurveFn& u, const CurveFn& v);
CurveFn cf_neg(const CurveFn& u);
// multiplication uses y^2 = x^3 - x
CurveFn cf_mul(const CurveFn& u, const CurveFn& v);
CurveFn cf_inverse(const CurveFn& u);
bool cf_eq(const CurveFn& u, const CurveFn& v);
// the curve derivation applied to a function (d/dx for rational curves)
CurveFn cf_derivation(const CurveFn& u, const CurveDesc& curve);

template <class T>
using Matrix = std::vector<std::vector<T>>;

// Connection on a curve, sign convention nabla(D) y = D(y) - A y.
struct Connection {
    CurveDesc curve;
    GroundField field = GroundField::rationals();
    int rank = 1;
    Matrix<CurveFn> A;  // rank x rank
    std::string name;

    void validate() const;
    bool matrix_is_zero() const;
};

// p-curvature at a finite unramified place; entries over the reduced
// function field (F_q(x), plus a y-part on the elliptic curve).
struct PCurvature {
    unsigned long p;
    PlaceId place;
    int rank;
    Matrix<CurveFn> matrix;  // over the residue field
    bool is_zero;
};

// psi_p = -(nabla(D))^p, computed column-by-column by p-fold iteration
// v <- D(v) - A v on constant basis vectors over the residue field.
PCurvature p_curvature(const Connection& conn, const PlaceId& place);

struct DivisibilityResult {
    bool vanishes_mod_place;
    Valuation witness;  // min entry gauss valuation
};

// Vanishing mod a (possibly ramified) place certified by strict
// positivity of entry Gauss valuations.
DivisibilityResult divisibility_check(const Connection& conn, const PlaceId& place);

// A point of the curve: x over the rational curves, (x, y) on the
// elliptic curve (local coordinate there is y).
struct CurvePoint {
    FieldElem x;
    std::optional<FieldElem> y;
    static CurvePoint at_x(FieldElem v) { return {std::move(v), std::nullopt}; }
    static CurvePoint on_curve(FieldElem xv, FieldElem yv) { return {std::move(xv), std::move(yv)}; }
};

// Formal horizontal section: D(y) - A y = 0 to order N, y(center) = initial.
std::vector<TruncSeries> horizontal_series(const Connection& conn, const CurvePoint& center,
                                           const std::vector<FieldElem>& initial,
                                           std::size_t order);

// x as a series in the local coordinate y at (0,0) on y^2 = x^3 - x:
// x(y)^3 - x(y) = y^2 mod y^(N+1), x = -y^2 + O(y^6).
TruncSeries elliptic_local_coordinate(std::size_t order);
// general center (x0, y0) with 3 x0^2 - 1 invertible, via Newton
TruncSeries elliptic_local_coordinate_at(const FieldElem& x0, const FieldElem& y0,
                                         std::size_t order);

// D(y) - A y as series, for testing the ODE residual.
std::vector<TruncSeries> ode_residual(const Connection& conn, const CurvePoint& center,
                                      const std::vector<TruncSeries>& y);

struct RadiusEstimate {
    PlaceId place;
    Valuation slope;     // min of val(a_n)/n over the tail window; +inf for polynomials
    double radius_log;   // slope * log p (base e), +inf for polynomials
    std::size_t order;
    mpq_class threshold; // -1/(p(p-1))
    bool pass;           // slope >= threshold
    double margin;       // slope - threshold (+inf when slope infinite)
};

// Conservative liminf proxy over the window [N/2, N]; pass/fail against
// the all-p radius threshold p^(-1/(p(p-1))).
RadiusEstimate radius_estimate(const TruncSeries& series, const PlaceId& place);

// A |-> g^-1 A g - g^-1 D(g); throws on singular g.
Connection gauge_transform(const Connection& conn, const Matrix<CurveFn>& g);

// matrix helpers over CurveFn
Matrix<CurveFn> mat_mul(const Matrix<CurveFn>& x, const Matrix<CurveFn>& y);
Matrix<CurveFn> mat_inverse(const Matrix<CurveFn>& g);

} // namespace pcwb::connection
