#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "pcwb/errors.hpp"
#include "pcwb/field.hpp"

namespace pcwb::exactmath {

// Dense univariate polynomial over a field-like coefficient type K.
// Coefficients ascending; no trailing zeros (zero polynomial = empty).
// K must provide +, -, *, /, unary -, is_zero(), ==, zero_like(),
// one_like(), inverse(), scaled(long).
template <class K>
class PolyT {
public:
    PolyT() = default;
    explicit PolyT(std::vector<K> coeffs) : c_(std::move(coeffs)) { normalize(); }
    static PolyT constant(K v) {
        PolyT r;
        if (!v.is_zero()) r.c_.push_back(std::move(v));
        return r;
    }
    static PolyT monomial(K v, std::size_t k) {
        PolyT r;
        if (v.is_zero()) return r;
        r.c_.assign(k, v.zero_like());
        r.c_.push_back(std::move(v));
        return r;
    }

    bool is_zero() const { return c_.empty(); }
    // degree; -1 for the zero polynomial
    long deg() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<K>& coeffs() const { return c_; }
    const K& operator[](std::size_t i) const { return c_[i]; }
    K coeff_or_zero(std::size_t i, const K& witness) const {
        return i < c_.size() ? c_[i] : witness.zero_like();
    }
    const K& lead() const {
        if (c_.empty()) throw Error("lead() of zero polynomial");
        return c_.back();
    }

    PolyT operator-() const {
        PolyT r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    PolyT operator+(const PolyT& o) const {
        std::vector<K> out(std::max(c_.size(), o.c_.size()));
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i < c_.size() && i < o.c_.size()) out[i] = c_[i] + o.c_[i];
            else if (i < c_.size()) out[i] = c_[i];
            else out[i] = o.c_[i];
        }
        return PolyT(std::move(out));
    }

    PolyT operator-(const PolyT& o) const { return *this + (-o); }

    PolyT operator*(const PolyT& o) const {
        if (is_zero() || o.is_zero()) return PolyT();
        std::vector<K> out(c_.size() + o.c_.size() - 1, c_[0].zero_like());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                out[i + j] = out[i + j] + c_[i] * o.c_[j];
        }
        return PolyT(std::move(out));
    }

    PolyT scaled(const K& s) const {
        if (s.is_zero()) return PolyT();
        PolyT r(*this);
        for (auto& x : r.c_) x = x * s;
        r.normalize();
        return r;
    }

    PolyT scaled_int(long k) const {
        PolyT r(*this);
        for (auto& x : r.c_) x = x.scaled(k);
        r.normalize();
        return r;
    }

    PolyT derivative() const {
        if (c_.size() <= 1) return PolyT();
        std::vector<K> out(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            out[i - 1] = c_[i].scaled(static_cast<long>(i));
        return PolyT(std::move(out));
    }

    K eval(const K& x) const {
        if (c_.empty()) return x.zero_like();
        K acc = c_.back();
        for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // Taylor shift: p(x) -> p(x + t), by Horner on (x + t).
    PolyT shifted(const K& t) const {
        if (c_.empty()) return PolyT();
        PolyT acc = PolyT::constant(c_.back());
        PolyT lin({t, t.one_like()});  // t + x
        for (std::size_t i = c_.size() - 1; i-- > 0;)
            acc = acc * lin + PolyT::constant(c_[i]);
        return acc;
    }

    PolyT pow(unsigned long e) const {
        if (e == 0) {
            if (c_.empty()) throw Error("0^0 polynomial");
            return PolyT::constant(c_[0].one_like());
        }
        if (c_.empty()) return PolyT();
        PolyT acc = PolyT::constant(c_[0].one_like());
        PolyT base(*this);
        while (e) {
            if (e & 1) acc = acc * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return acc;
    }

    static std::pair<PolyT, PolyT> divrem(const PolyT& a, const PolyT& b) {
        if (b.is_zero()) throw Error("polynomial division by zero");
        if (a.deg() < b.deg()) return {PolyT(), a};
        K lead_inv = b.lead().inverse();
        std::vector<K> rem = a.c_;
        std::vector<K> quo(a.c_.size() - b.c_.size() + 1, b.lead().zero_like());
        for (long i = a.deg(); i >= b.deg(); --i) {
            K q = rem[i] * lead_inv;
            if (q.is_zero()) continue;
            quo[i - b.deg()] = q;
            for (long j = 0; j <= b.deg(); ++j)
                rem[i - b.deg() + j] = rem[i - b.deg() + j] - q * b.c_[j];
        }
        return {PolyT(std::move(quo)), PolyT(std::move(rem))};
    }

    PolyT divexact(const PolyT& b) const {
        auto [q, r] = divrem(*this, b);
        if (!r.is_zero()) throw Error("inexact polynomial division");
        return q;
    }

    PolyT monic() const {
        if (is_zero()) return *this;
        return scaled(lead().inverse());
    }

    static PolyT gcd_monic(PolyT a, PolyT b) {
        while (!b.is_zero()) {
            auto [q, r] = divrem(a, b);
            (void)q;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // g = gcd, and u, v with u*a + v*b = g (g monic).
    static void ext_gcd(const PolyT& a, const PolyT& b, PolyT& g, PolyT& u, PolyT& v);

    bool operator==(const PolyT& o) const {
        if (c_.size() != o.c_.size()) return false;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!(c_[i] == o.c_[i])) return false;
        return true;
    }
    bool operator!=(const PolyT& o) const { return !(*this == o); }

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<K> c_;
};

template <class K>
void PolyT<K>::ext_gcd(const PolyT& a, const PolyT& b, PolyT& g, PolyT& u, PolyT& v) {
    if (a.is_zero() && b.is_zero()) throw Error("ext_gcd(0, 0)");
    const K one = (a.is_zero() ? b : a).lead().one_like();
    PolyT r0 = a, r1 = b;
    PolyT u0 = PolyT::constant(one), u1;
    PolyT v0, v1 = PolyT::constant(one);
    while (!r1.is_zero()) {
        auto [q, r] = divrem(r0, r1);
        PolyT u2 = u0 - q * u1;
        PolyT v2 = v0 - q * v1;
        r0 = std::move(r1); r1 = std::move(r);
        u0 = std::move(u1); u1 = std::move(u2);
        v0 = std::move(v1); v1 = std::move(v2);
    }
    K s = r0.lead().inverse();
    g = r0.scaled(s);
    u = u0.scaled(s);
    v = v0.scaled(s);
}

using Poly = PolyT<FieldElem>;

} // namespace pcwb::exactmath
