#include "pcwb/connection.hpp"

#include <cmath>
#include <limits>

namespace pcwb::connection {

using exactmath::gauss_valuation;
using exactmath::reduce_at_place;
using exactmath::residue_field;
using exactmath::series_expand;
using exactmath::ratfunc_on_series;
using exactmath::SplitType;
using exactmath::valuation;

namespace {

const GroundField Q = GroundField::rationals();

Poly poly_x(const GroundField& f) { return Poly::monomial(FieldElem::one(f), 1); }

// y^2 = h(x) = x^3 - x
Poly curve_h(const GroundField& f) {
    return Poly({FieldElem::zero(f), -FieldElem::one(f), FieldElem::zero(f), FieldElem::one(f)});
}

// 3x^2 - 1, the regular locus of the derivation
Poly curve_s(const GroundField& f) {
    return Poly({-FieldElem::one(f), FieldElem::zero(f), FieldElem(f, 3)});
}

RatFunc rf(const Poly& p) { return RatFunc::from_poly(p); }

} // namespace

std::string curve_tag(CurveKind k) {
    switch (k) {
        case CurveKind::p1_minus_012inf: return "p1";
        case CurveKind::affine_elliptic: return "elliptic";
        case CurveKind::a1_minus_fourth_roots: return "a1m4";
    }
    throw Error("unreachable");
}

CurveKind curve_from_tag(const std::string& tag) {
    if (tag == "p1") return CurveKind::p1_minus_012inf;
    if (tag == "elliptic") return CurveKind::affine_elliptic;
    if (tag == "a1m4") return CurveKind::a1_minus_fourth_roots;
    throw Error("unknown curve tag '" + tag + "'");
}

// ------------------------------------------------------------------
// CurveFn arithmetic

CurveFn cf_add(const CurveFn& u, const CurveFn& v) { return CurveFn(u.a + v.a, u.b + v.b); }
CurveFn cf_sub(const CurveFn& u, const CurveFn& v) { return CurveFn(u.a - v.a, u.b - v.b); }
CurveFn cf_neg(const CurveFn& u) { return CurveFn(-u.a, -u.b); }

CurveFn cf_mul(const CurveFn& u, const CurveFn& v) {
    RatFunc hh = rf(curve_h(Q));
    return CurveFn(u.a * v.a + u.b * v.b * hh, u.a * v.b + u.b * v.a);
}

CurveFn cf_inverse(const CurveFn& u) {
    if (u.is_zero()) throw Error("division by zero curve function");
    if (u.b.is_zero()) return CurveFn(u.a.inverse());
    RatFunc n = u.a * u.a - u.b * u.b * rf(curve_h(Q));
    if (n.is_zero()) throw Error("zero norm; function vanishes on the curve");
    RatFunc ninv = n.inverse();
    return CurveFn(u.a * ninv, -(u.b * ninv));
}

bool cf_eq(const CurveFn& u, const CurveFn& v) { return u.a == v.a && u.b == v.b; }

CurveFn cf_derivation(const CurveFn& u, const CurveDesc& curve) {
    if (!curve.is_elliptic()) {
        if (u.has_y_part()) throw Error("y-part on a rational curve");
        return CurveFn(u.a.derivative());
    }
    // D(a + b y) = (b + 2 h b'/s) + (2 a'/s) y
    RatFunc s = rf(curve_s(Q)), h = rf(curve_h(Q));
    RatFunc two = RatFunc::constant(FieldElem::integer(2));
    return CurveFn(u.b + two * h * u.b.derivative() / s, two * u.a.derivative() / s);
}

// ------------------------------------------------------------------
// Connection

void Connection::validate() const {
    if (rank < 1) throw Error("connection rank must be >= 1");
    if (A.size() != static_cast<std::size_t>(rank)) throw Error("matrix row count != rank");
    for (const auto& row : A) {
        if (row.size() != static_cast<std::size_t>(rank)) throw Error("matrix not square");
        for (const auto& e : row)
            if (!curve.is_elliptic() && e.has_y_part())
                throw Error("y-part entry on a rational curve");
    }
}

bool Connection::matrix_is_zero() const {
    for (const auto& row : A)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

// ------------------------------------------------------------------
// reduction mod a place

namespace {

FieldElem scale_p_pow(const FieldElem& e, unsigned long p, long m) {
    mpq_class f(1);
    mpz_class pz(p), num(1);
    mpz_pow_ui(num.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(m < 0 ? -m : m));
    if (m >= 0) f = mpq_class(num);
    else f = mpq_class(1) / mpq_class(num);
    return FieldElem(e.field(), e.a() * f, e.b() * f);
}

long content_val_int(const Poly& p, const PlaceId& pl) {
    Valuation v = exactmath::poly_content_valuation(p, pl);
    if (v.is_infinite()) throw Error("internal: content of zero polynomial");
    if (v.value().get_den() != 1) throw Error("internal: non-integral content at unramified place");
    return static_cast<long>(v.value().get_num().get_si());
}

Poly reduce_poly_scaled(const Poly& p, const PlaceId& pl, long scale_exp) {
    std::vector<FieldElem> out;
    out.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs())
        out.push_back(reduce_at_place(scale_p_pow(c, pl.p(), scale_exp), pl));
    return Poly(std::move(out));
}

// reduce f into the residue function field; requires gauss valuation >= 0
RatFunc reduce_ratfunc_mod(const RatFunc& f, const PlaceId& pl) {
    if (f.is_zero()) return RatFunc();
    long vd = content_val_int(f.den(), pl);
    long vn = content_val_int(f.num(), pl);
    if (vn - vd < 0) throw Error("negative gauss valuation");
    Poly num = reduce_poly_scaled(f.num(), pl, -vd);
    Poly den = reduce_poly_scaled(f.den(), pl, -vd);
    if (den.is_zero()) throw Error("internal: denominator reduced to zero");
    return RatFunc(num, den);
}

Valuation entry_gauss_valuation(const CurveFn& e, const PlaceId& pl) {
    return Valuation::min(gauss_valuation(e.a, pl), gauss_valuation(e.b, pl));
}

Poly poly_lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) throw Error("lcm with zero polynomial");
    Poly g = Poly::gcd_monic(a, b);
    return (a * b.divexact(g)).monic();
}

// a(x) + b(x) y with polynomial parts
struct PP {
    Poly a, b;
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
};

PP pp_add(const PP& u, const PP& v) { return {u.a + v.a, u.b + v.b}; }
PP pp_sub(const PP& u, const PP& v) { return {u.a - v.a, u.b - v.b}; }
PP pp_mul(const PP& u, const PP& v, const Poly& h) {
    return {u.a * v.a + u.b * v.b * h, u.a * v.b + u.b * v.a};
}
PP pp_mul_poly(const PP& u, const Poly& q) { return {u.a * q, u.b * q}; }
PP pp_times_y(const PP& u, const Poly& h) { return {u.b * h, u.a}; }
PP pp_scaled(const PP& u, long k) { return {u.a.scaled_int(k), u.b.scaled_int(k)}; }

} // namespace

PCurvature p_curvature(const Connection& conn, const PlaceId& place) {
    conn.validate();
    if (place.is_archimedean()) throw Error("p_curvature needs a finite place");
    if (!(place.field() == conn.field))
        throw Error("place of " + place.field().str() + " for a connection over " +
                    conn.field.str());
    if (place.split_type() == SplitType::ramified)
        throw pcwb::RamifiedPlaceError(
            "p-curvature undefined at the ramified place over " + std::to_string(place.p()) +
            "; use divisibility_check");
    const unsigned long p = place.p();
    const int n = conn.rank;

    // good-reduction precondition, naming the offending entry
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Valuation gv = entry_gauss_valuation(conn.A[i][j], place);
            if (gv < Valuation(0))
                throw pcwb::BadReductionError(
                    i, j,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") has gauss valuation " + gv.str() + " < 0 at " + place.str());
        }

    GroundField k = residue_field(place);
    Matrix<CurveFn> Ak(n, std::vector<CurveFn>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Ak[i][j] = CurveFn(reduce_ratfunc_mod(conn.A[i][j].a, place),
                               reduce_ratfunc_mod(conn.A[i][j].b, place));

    const bool elliptic = conn.curve.is_elliptic();
    const Poly one_k = Poly::constant(FieldElem::one(k));
    const Poly h = elliptic ? curve_h(k) : Poly();
    const Poly s = elliptic ? curve_s(k) : Poly();

    // common denominator base D0 = lcm of reduced entry denominators
    Poly D0 = one_k;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!Ak[i][j].a.is_zero()) D0 = poly_lcm(D0, Ak[i][j].a.den());
            if (!Ak[i][j].b.is_zero()) D0 = poly_lcm(D0, Ak[i][j].b.den());
        }
    const Poly D0p = D0.derivative();

    // A * D0 as polynomial (pair) matrix
    std::vector<std::vector<PP>> AD0(n, std::vector<PP>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const CurveFn& e = Ak[i][j];
            PP v;
            if (!e.a.is_zero()) v.a = e.a.num() * D0.divexact(e.a.den());
            if (!e.b.is_zero()) v.b = e.b.num() * D0.divexact(e.b.den());
            AD0[i][j] = v;
        }

    // iterate v <- D(v) - A v on each basis vector; v_k = m_k / D0^k on the
    // rational curves and m_k / (s^(2k) D0^k) on the elliptic curve.
    std::vector<std::vector<PP>> cols(n);
    for (int j0 = 0; j0 < n; ++j0) {
        std::vector<PP> m(n);
        m[j0].a = one_k;
        for (unsigned long it = 0; it < p; ++it) {
            const long kc = static_cast<long>(it);
            std::vector<PP> next(n);
            for (int i = 0; i < n; ++i) {
                PP acc;
                if (!elliptic) {
                    // n' D0 - k n D0' - sum_j (A D0)[i][j] n[j]
                    acc.a = m[i].a.derivative() * D0 - m[i].a.scaled_int(kc) * D0p;
                    for (int j = 0; j < n; ++j) {
                        if (AD0[i][j].is_zero() || m[j].is_zero()) continue;
                        acc.a = acc.a - AD0[i][j].a * m[j].a;
                    }
                } else {
                    // Dsc(m) s D0 - 24 k x y m D0 - 2 k y m D0' s - (A D0) m s^2
                    PP dsc{m[i].b * s + (m[i].b.derivative() * h).scaled_int(2),
                           m[i].a.derivative().scaled_int(2)};
                    acc = pp_mul_poly(dsc, s * D0);
                    PP ym = pp_times_y(m[i], h);
                    acc = pp_sub(acc, pp_mul_poly(ym, (poly_x(k) * D0).scaled_int(24 * kc)));
                    acc = pp_sub(acc, pp_mul_poly(ym, (D0p * s).scaled_int(2 * kc)));
                    Poly s2 = s * s;
                    for (int j = 0; j < n; ++j) {
                        if (AD0[i][j].is_zero() || m[j].is_zero()) continue;
                        acc = pp_sub(acc, pp_mul_poly(pp_mul(AD0[i][j], m[j], h), s2));
                    }
                }
                next[i] = std::move(acc);
            }
            m = std::move(next);
        }
        cols[j0] = std::move(m);
    }

    PCurvature out{p, place, n, Matrix<CurveFn>(n, std::vector<CurveFn>(n)), true};
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (!cols[j][i].is_zero()) out.is_zero = false;
    if (!out.is_zero) {
        Poly den = D0.pow(p);
        if (elliptic) den = den * s.pow(2 * p);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const PP& m = cols[j][i];
                RatFunc ea = m.a.is_zero() ? RatFunc() : RatFunc(-m.a, den);
                RatFunc eb = m.b.is_zero() ? RatFunc() : RatFunc(-m.b, den);
                out.matrix[i][j] = CurveFn(std::move(ea), std::move(eb));
            }
    }
    return out;
}

DivisibilityResult divisibility_check(const Connection& conn, const PlaceId& place) {
    conn.validate();
    if (place.is_archimedean()) throw Error("divisibility_check needs a finite place");
    Valuation w = Valuation::infinity();
    for (const auto& row : conn.A)
        for (const auto& e : row) w = Valuation::min(w, entry_gauss_valuation(e, place));
    return {Valuation(0) < w, w};
}

// ------------------------------------------------------------------
// local coordinate on y^2 = x^3 - x

namespace {

using Series = std::vector<FieldElem>;  // plain coefficient vectors in u

Series ser_mul(const Series& x, const Series& y, std::size_t N, const FieldElem& zero) {
    Series out(N + 1, zero);
    for (std::size_t i = 0; i <= N && i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; i + j <= N && j < y.size(); ++j)
            out[i + j] = out[i + j] + x[i] * y[j];
    }
    return out;
}

Series ser_sub(const Series& x, const Series& y, std::size_t N, const FieldElem& zero) {
    Series out(N + 1, zero);
    for (std::size_t i = 0; i <= N; ++i) {
        FieldElem xv = i < x.size() ? x[i] : zero;
        FieldElem yv = i < y.size() ? y[i] : zero;
        out[i] = xv - yv;
    }
    return out;
}

Series ser_recip(const Series& d, std::size_t N, const FieldElem& zero) {
    if (d.empty() || d[0].is_zero()) throw Error("series reciprocal with zero constant term");
    Series out(N + 1, zero);
    FieldElem inv0 = d[0].inverse();
    out[0] = inv0;
    for (std::size_t m = 1; m <= N; ++m) {
        FieldElem s = zero;
        for (std::size_t k = 1; k <= m && k < d.size(); ++k) s = s + d[k] * out[m - k];
        out[m] = -(inv0 * s);
    }
    return out;
}

} // namespace

TruncSeries elliptic_local_coordinate_at(const FieldElem& x0, const FieldElem& y0,
                                         std::size_t order) {
    const GroundField f = x0.field();
    const FieldElem zero = FieldElem::zero(f), one = FieldElem::one(f);
    if (!(y0 * y0 == x0 * x0 * x0 - x0)) throw Error("center is not on y^2 = x^3 - x");
    FieldElem s0 = FieldElem(f, 3) * x0 * x0 - one;
    if (s0.is_zero()) throw Error("derivation is singular at the center (3x^2 - 1 = 0)");

    const std::size_t N = order;
    // rhs = (y0 + u)^2
    Series rhs(N + 1, zero);
    rhs[0] = y0 * y0;
    if (N >= 1) rhs[1] = y0.scaled(2);
    if (N >= 2) rhs[2] = one;

    // Newton for g(X) = X^3 - X - rhs, g'(X) = 3X^2 - 1
    Series X(N + 1, zero);
    X[0] = x0;
    std::size_t steps = 2;
    while ((std::size_t{1} << steps) <= N + 1) ++steps;
    for (std::size_t it = 0; it <= steps; ++it) {
        Series X2 = ser_mul(X, X, N, zero);
        Series X3 = ser_mul(X2, X, N, zero);
        Series g = ser_sub(ser_sub(X3, X, N, zero), rhs, N, zero);
        Series gp(N + 1, zero);
        for (std::size_t i = 0; i <= N; ++i) gp[i] = X2[i].scaled(3);
        gp[0] = gp[0] - one;
        Series corr = ser_mul(g, ser_recip(gp, N, zero), N, zero);
        X = ser_sub(X, corr, N, zero);
    }
    // exactness check: X^3 - X = rhs mod u^(N+1)
    Series X2 = ser_mul(X, X, N, zero);
    Series X3 = ser_mul(X2, X, N, zero);
    Series g = ser_sub(ser_sub(X3, X, N, zero), rhs, N, zero);
    for (const auto& c : g)
        if (!c.is_zero()) throw Error("internal: local coordinate Newton did not converge");
    return TruncSeries(y0, std::move(X));
}

TruncSeries elliptic_local_coordinate(std::size_t order) {
    if (order < 2) throw Error("local coordinate needs order >= 2");
    const GroundField f = GroundField::rationals();
    return elliptic_local_coordinate_at(FieldElem::zero(f), FieldElem::zero(f), order);
}

// ------------------------------------------------------------------
// horizontal sections

namespace {

// entry series A[i][j] to the requested order, in the local coordinate
Matrix<Series> entry_series(const Connection& conn, const CurvePoint& center,
                            std::size_t ord) {
    const int n = conn.rank;
    Matrix<Series> out(n, std::vector<Series>(n));
    if (!conn.curve.is_elliptic()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out[i][j] = series_expand(conn.A[i][j].a, center.x, ord).coeffs();
        return out;
    }
    if (!center.y) throw Error("elliptic center needs both coordinates");
    TruncSeries xs = elliptic_local_coordinate_at(center.x, *center.y, ord);
    const FieldElem zero = center.x.zero_like();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            TruncSeries a = ratfunc_on_series(conn.A[i][j].a, xs);
            Series acc = a.coeffs();
            if (!conn.A[i][j].b.is_zero()) {
                TruncSeries b = ratfunc_on_series(conn.A[i][j].b, xs);
                Series yser(ord + 1, zero);
                yser[0] = *center.y;
                if (ord >= 1) yser[1] = center.x.one_like();
                Series by = ser_mul(b.coeffs(), yser, ord, zero);
                for (std::size_t t = 0; t <= ord; ++t) acc[t] = acc[t] + by[t];
            }
            out[i][j] = std::move(acc);
        }
    return out;
}

FieldElem series_center(const Connection& conn, const CurvePoint& c) {
    return conn.curve.is_elliptic() ? *c.y : c.x;
}

} // namespace

std::vector<TruncSeries> horizontal_series(const Connection& conn, const CurvePoint& center,
                                           const std::vector<FieldElem>& initial,
                                           std::size_t order) {
    conn.validate();
    if (initial.size() != static_cast<std::size_t>(conn.rank))
        throw Error("initial vector size != rank");
    const int n = conn.rank;
    const std::size_t N = order;
    Matrix<Series> As = entry_series(conn, center, N == 0 ? 0 : N - 1);
    const FieldElem zero = center.x.zero_like();

    std::vector<Series> y(n, Series(N + 1, zero));
    for (int i = 0; i < n; ++i) y[i][0] = initial[i];
    for (std::size_t m = 0; m + 1 <= N; ++m) {
        FieldElem div = FieldElem::integer(static_cast<long>(m) + 1);
        for (int i = 0; i < n; ++i) {
            FieldElem acc = zero;
            for (int j = 0; j < n; ++j) {
                const Series& aij = As[i][j];
                for (std::size_t k = 0; k <= m && k < aij.size(); ++k)
                    acc = acc + aij[k] * y[j][m - k];
            }
            y[i][m + 1] = acc / div;
        }
    }
    std::vector<TruncSeries> out;
    out.reserve(n);
    FieldElem c = series_center(conn, center);
    for (int i = 0; i < n; ++i) out.emplace_back(c, std::move(y[i]));
    return out;
}

std::vector<TruncSeries> ode_residual(const Connection& conn, const CurvePoint& center,
                                      const std::vector<TruncSeries>& y) {
    conn.validate();
    const int n = conn.rank;
    if (y.size() != static_cast<std::size_t>(n)) throw Error("solution size != rank");
    const std::size_t N = y[0].order();
    if (N == 0) throw Error("need order >= 1 for a residual");
    Matrix<Series> As = entry_series(conn, center, N - 1);
    const FieldElem zero = center.x.zero_like();
    std::vector<TruncSeries> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        Series r(N, zero);
        for (std::size_t m = 0; m + 1 <= N; ++m)
            r[m] = y[i][m + 1].scaled(static_cast<long>(m) + 1);
        for (int j = 0; j < n; ++j) {
            const Series& aij = As[i][j];
            for (std::size_t m = 0; m + 1 <= N; ++m) {
                FieldElem acc = zero;
                for (std::size_t k = 0; k <= m && k < aij.size(); ++k)
                    acc = acc + aij[k] * y[j][m - k];
                r[m] = r[m] - acc;
            }
        }
        out.emplace_back(series_center(conn, center), std::move(r));
    }
    return out;
}

// ------------------------------------------------------------------
// radius estimation

RadiusEstimate radius_estimate(const TruncSeries& series, const PlaceId& place) {
    const std::size_t N = series.order();
    if (N < 32) throw Error("radius_estimate needs order >= 32");
    if (place.is_archimedean()) throw Error("radius_estimate needs a finite place");
    const unsigned long p = place.p();
    mpq_class threshold = mpq_class(-1) / (mpq_class(p) * (mpq_class(p) - 1));

    bool any = false;
    mpq_class slope;
    for (std::size_t m = N / 2; m <= N; ++m) {
        const FieldElem& c = series[m];
        if (c.is_zero()) continue;
        Valuation v = valuation(c, place);
        mpq_class s = v.value() / mpq_class(m);
        if (!any || s < slope) slope = s;
        any = true;
    }
    RadiusEstimate out{place,
                       any ? Valuation(slope) : Valuation::infinity(),
                       0.0,
                       N,
                       threshold,
                       true,
                       std::numeric_limits<double>::infinity()};
    if (any) {
        out.radius_log = mpq_class(slope).get_d() * std::log(static_cast<double>(p));
        out.pass = slope >= threshold;
        out.margin = mpq_class(slope - threshold).get_d();
    } else {
        out.radius_log = std::numeric_limits<double>::infinity();
    }
    return out;
}

// ------------------------------------------------------------------
// gauge transforms

Matrix<CurveFn> mat_mul(const Matrix<CurveFn>& x, const Matrix<CurveFn>& y) {
    const std::size_t n = x.size();
    Matrix<CurveFn> out(n, std::vector<CurveFn>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            CurveFn acc;
            for (std::size_t k = 0; k < n; ++k)
                acc = cf_add(acc, cf_mul(x[i][k], y[k][j]));
            out[i][j] = acc;
        }
    return out;
}

Matrix<CurveFn> mat_inverse(const Matrix<CurveFn>& g) {
    const std::size_t n = g.size();
    Matrix<CurveFn> a = g;
    Matrix<CurveFn> inv(n, std::vector<CurveFn>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = CurveFn(RatFunc::constant(FieldElem::integer(1)));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw Error("singular gauge matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        CurveFn d = cf_inverse(a[col][col]);
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] = cf_mul(a[col][j], d);
            inv[col][j] = cf_mul(inv[col][j], d);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            CurveFn f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] = cf_sub(a[r][j], cf_mul(f, a[col][j]));
                inv[r][j] = cf_sub(inv[r][j], cf_mul(f, inv[col][j]));
            }
        }
    }
    return inv;
}

Connection gauge_transform(const Connection& conn, const Matrix<CurveFn>& g) {
    conn.validate();
    if (g.size() != static_cast<std::size_t>(conn.rank)) throw Error("gauge matrix size != rank");
    Matrix<CurveFn> ginv = mat_inverse(g);
    const std::size_t n = g.size();
    Matrix<CurveFn> Ag = mat_mul(conn.A, g);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            Ag[i][j] = cf_sub(Ag[i][j], cf_derivation(g[i][j], conn.curve));
    Connection out = conn;
    out.A = mat_mul(ginv, Ag);
    return out;
}

} // namespace pcwb::connection
