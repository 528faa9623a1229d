#pragma once

#include <string>
#include <utility>

#include "pcwb/poly.hpp"

namespace pcwb::exactmath {

// Rational function num/den in canonical form: gcd(num, den) = 1, den
// monic and never the zero polynomial.
template <class K>
class RatFuncT {
public:
    RatFuncT() = default;  // zero (den treated as 1)
    RatFuncT(PolyT<K> num, PolyT<K> den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error("rational function with zero denominator");
        canonicalize();
    }
    static RatFuncT from_poly(PolyT<K> p) {
        RatFuncT r;
        r.num_ = std::move(p);
        if (!r.num_.is_zero()) r.den_ = PolyT<K>::constant(r.num_.lead().one_like());
        return r;
    }
    static RatFuncT constant(K v) { return from_poly(PolyT<K>::constant(std::move(v))); }

    const PolyT<K>& num() const { return num_; }
    // materialized denominator (den() == 1 for the default-constructed zero)
    PolyT<K> den() const {
        if (!den_.is_zero()) return den_;
        return PolyT<K>::constant(witness().one_like());
    }
    bool den_is_one() const { return den_.is_zero() || den_.deg() == 0; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.deg() == 0 && den_is_one() && num_[0].is_one(); }
    bool is_poly() const { return den_is_one(); }

    RatFuncT zero_like() const { return RatFuncT(); }
    RatFuncT one_like() const { return constant(witness().one_like()); }

    RatFuncT operator-() const {
        RatFuncT r(*this);
        r.num_ = -r.num_;
        return r;
    }

    RatFuncT operator+(const RatFuncT& o) const {
        return RatFuncT(num_ * o.den() + o.num_ * den(), den() * o.den());
    }
    RatFuncT operator-(const RatFuncT& o) const { return *this + (-o); }
    RatFuncT operator*(const RatFuncT& o) const {
        if (is_zero() || o.is_zero()) return RatFuncT();
        return RatFuncT(num_ * o.num_, den() * o.den());
    }
    RatFuncT operator/(const RatFuncT& o) const { return *this * o.inverse(); }

    RatFuncT inverse() const {
        if (is_zero()) throw Error("division by zero rational function");
        return RatFuncT(den(), num_);
    }

    RatFuncT scaled(long k) const {
        RatFuncT r(*this);
        r.num_ = r.num_.scaled_int(k);
        if (r.num_.is_zero()) return RatFuncT();
        return r;
    }

    RatFuncT pow(unsigned long e) const {
        if (e == 0) return one_like();
        if (is_zero()) return RatFuncT();
        return RatFuncT(num_.pow(e), den().pow(e));
    }

    // d/dx by the quotient rule
    RatFuncT derivative() const {
        if (is_zero() || (num_.deg() == 0 && den_is_one())) return RatFuncT();
        PolyT<K> d = den();
        return RatFuncT(num_.derivative() * d - num_ * d.derivative(), d * d);
    }

    K eval(const K& x) const {
        if (is_zero()) return x.zero_like();
        K dv = den().eval(x);
        if (dv.is_zero()) throw PoleError(pole_order_at(x), "evaluation at a pole");
        return num_.eval(x) / dv;
    }

    // order of the pole at x (0 if regular); canonical form means num and
    // den never vanish together.
    long pole_order_at(const K& x) const {
        if (is_zero()) return 0;
        PolyT<K> d = den().shifted(x);  // den(x + u), pole order = u-valuation
        long ord = 0;
        while (ord <= d.deg() && d[ord].is_zero()) ++ord;
        return ord;
    }

    bool operator==(const RatFuncT& o) const {
        return num_ == o.num_ && den() == o.den();
    }
    bool operator!=(const RatFuncT& o) const { return !(*this == o); }

private:
    K witness() const {
        if (!den_.is_zero()) return den_.lead();
        if (!num_.is_zero()) return num_.lead();
        return K();  // bottoms out at the default coefficient (0 in Q)
    }
    void canonicalize() {
        if (num_.is_zero()) {
            den_ = PolyT<K>::constant(den_.lead().one_like());
            return;
        }
        PolyT<K> g = PolyT<K>::gcd_monic(num_, den_);
        if (g.deg() > 0) {
            num_ = num_.divexact(g);
            den_ = den_.divexact(g);
        }
        K s = den_.lead().inverse();
        den_ = den_.scaled(s);
        num_ = num_.scaled(s);
    }
    PolyT<K> num_, den_;
};

using RatFunc = RatFuncT<FieldElem>;

// ------------------------------------------------------------------
// Truncated power series around a center, exact coefficients a_0..a_N.
template <class K>
class TruncSeriesT {
public:
    TruncSeriesT(K center, std::vector<K> coeffs)
        : center_(std::move(center)), a_(std::move(coeffs)) {
        if (a_.empty()) throw Error("series needs at least the constant term");
    }
    static TruncSeriesT zero(const K& center, std::size_t order) {
        return TruncSeriesT(center, std::vector<K>(order + 1, center.zero_like()));
    }

    const K& center() const { return center_; }
    std::size_t order() const { return a_.size() - 1; }
    const std::vector<K>& coeffs() const { return a_; }
    const K& operator[](std::size_t i) const {
        if (i >= a_.size()) throw Error("coefficient beyond truncation order");
        return a_[i];
    }
    K& at(std::size_t i) {
        if (i >= a_.size()) throw Error("coefficient beyond truncation order");
        return a_[i];
    }

    TruncSeriesT truncated(std::size_t order) const {
        if (order >= a_.size()) return *this;
        return TruncSeriesT(center_, std::vector<K>(a_.begin(), a_.begin() + order + 1));
    }

    TruncSeriesT operator-() const {
        TruncSeriesT r(*this);
        for (auto& x : r.a_) x = -x;
        return r;
    }

    TruncSeriesT operator+(const TruncSeriesT& o) const {
        check_center(o);
        std::size_t n = std::min(a_.size(), o.a_.size());
        std::vector<K> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = a_[i] + o.a_[i];
        return TruncSeriesT(center_, std::move(out));
    }
    TruncSeriesT operator-(const TruncSeriesT& o) const { return *this + (-o); }

    TruncSeriesT operator*(const TruncSeriesT& o) const {
        check_center(o);
        std::size_t n = std::min(a_.size(), o.a_.size());
        std::vector<K> out(n, center_.zero_like());
        for (std::size_t i = 0; i < n; ++i) {
            if (a_[i].is_zero()) continue;
            for (std::size_t j = 0; i + j < n; ++j)
                out[i + j] = out[i + j] + a_[i] * o.a_[j];
        }
        return TruncSeriesT(center_, std::move(out));
    }

    TruncSeriesT scaled(const K& s) const {
        TruncSeriesT r(*this);
        for (auto& x : r.a_) x = x * s;
        return r;
    }

    // reciprocal, requires invertible constant term; same order
    TruncSeriesT reciprocal() const {
        if (a_[0].is_zero()) throw Error("series reciprocal with zero constant term");
        K inv0 = a_[0].inverse();
        std::vector<K> out(a_.size(), center_.zero_like());
        out[0] = inv0;
        for (std::size_t n = 1; n < a_.size(); ++n) {
            K s = center_.zero_like();
            for (std::size_t k = 1; k <= n; ++k) s = s + a_[k] * out[n - k];
            out[n] = -(inv0 * s);
        }
        return TruncSeriesT(center_, std::move(out));
    }

    TruncSeriesT derivative() const {
        if (a_.size() == 1) return TruncSeriesT(center_, {center_.zero_like()});
        std::vector<K> out(a_.size() - 1);
        for (std::size_t i = 1; i < a_.size(); ++i) out[i - 1] = a_[i].scaled(static_cast<long>(i));
        return TruncSeriesT(center_, std::move(out));
    }

    bool is_zero() const {
        for (const auto& x : a_) if (!x.is_zero()) return false;
        return true;
    }

    bool operator==(const TruncSeriesT& o) const {
        if (!(center_ == o.center_) || a_.size() != o.a_.size()) return false;
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (!(a_[i] == o.a_[i])) return false;
        return true;
    }

private:
    void check_center(const TruncSeriesT& o) const {
        if (!(center_ == o.center_)) throw Error("series centers differ");
    }
    K center_;
    std::vector<K> a_;
};

using TruncSeries = TruncSeriesT<FieldElem>;

// ------------------------------------------------------------------
// Expansion of f around `center` to the given order: (den expanded) *
// (result) = (num expanded) mod (x - center)^(order+1).
template <class K>
TruncSeriesT<K> series_expand(const RatFuncT<K>& f, const K& center, std::size_t order) {
    if (f.is_zero()) return TruncSeriesT<K>::zero(center, order);
    PolyT<K> num = f.num().shifted(center);
    PolyT<K> den = f.den().shifted(center);
    if (den[0].is_zero()) {
        long ord = 0;
        while (ord <= den.deg() && den[ord].is_zero()) ++ord;
        throw PoleError(ord, "series expansion at a pole of order " + std::to_string(ord));
    }
    const K zero = center.zero_like();
    K inv0 = den[0].inverse();
    std::vector<K> out(order + 1, zero);
    for (std::size_t n = 0; n <= order; ++n) {
        K acc = num.coeff_or_zero(n, zero);
        std::size_t kmax = std::min<std::size_t>(n, static_cast<std::size_t>(den.deg()));
        for (std::size_t k = 1; k <= kmax; ++k)
            acc = acc - den[k] * out[n - k];
        out[n] = acc * inv0;
    }
    return TruncSeriesT<K>(center, std::move(out));
}

// f(x(u)) as a series in u, for a series x with den(x(0)) invertible.
template <class K>
TruncSeriesT<K> ratfunc_on_series(const RatFuncT<K>& f, const TruncSeriesT<K>& xs) {
    const K zero = xs.center().zero_like();
    auto poly_on_series = [&](const PolyT<K>& p) {
        TruncSeriesT<K> acc = TruncSeriesT<K>::zero(xs.center(), xs.order());
        if (p.is_zero()) return acc;
        acc.at(0) = p.lead();
        for (long i = p.deg(); i-- > 0;) {
            acc = acc * xs;
            acc.at(0) = acc[0] + p[static_cast<std::size_t>(i)];
        }
        return acc;
    };
    if (f.is_zero()) return TruncSeriesT<K>::zero(xs.center(), xs.order());
    TruncSeriesT<K> n = poly_on_series(f.num());
    TruncSeriesT<K> d = poly_on_series(f.den());
    if (d[0].is_zero()) throw PoleError(0, "composition hits a pole");
    return n * d.reciprocal();
}

// ------------------------------------------------------------------
// Gauss valuation of f at a finite place: min coefficient valuation of
// num minus min coefficient valuation of den.
inline Valuation poly_content_valuation(const Poly& p, const PlaceId& place) {
    Valuation m = Valuation::infinity();
    for (const auto& c : p.coeffs()) m = Valuation::min(m, valuation(c, place));
    return m;
}

inline Valuation gauss_valuation(const RatFunc& f, const PlaceId& place) {
    if (place.is_archimedean()) throw Error("gauss_valuation needs a finite place");
    if (f.is_zero()) return Valuation::infinity();
    Valuation vn = poly_content_valuation(f.num(), place);
    Valuation vd = poly_content_valuation(f.den(), place);
    return Valuation(vn.value() - vd.value());
}

} // namespace pcwb::exactmath
