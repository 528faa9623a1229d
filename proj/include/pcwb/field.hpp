#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcwb/errors.hpp"

namespace pcwb::exactmath {

enum class FieldKind { rationals, quadratic, prime_field };

// Ground field descriptor: Q, Q(sqrt(d)) with d squarefree != 0,1, or
// F_p / F_{p^2}.  For deg-2 prime fields the extension is F_p[s]/(s^2 - d)
// with d a non-residue mod p.
class GroundField {
public:
    static GroundField rationals();
    static GroundField quadratic(long d);
    static GroundField prime(unsigned long p);
    static GroundField prime_ext(unsigned long p, long d);

    FieldKind kind() const { return kind_; }
    long d() const { return d_; }
    unsigned long p() const { return p_; }
    int deg() const { return deg_; }

    bool is_rationals() const { return kind_ == FieldKind::rationals; }
    bool is_quadratic() const { return kind_ == FieldKind::quadratic; }
    bool is_prime_field() const { return kind_ == FieldKind::prime_field; }
    // characteristic zero?
    bool char_zero() const { return kind_ != FieldKind::prime_field; }

    bool operator==(const GroundField&) const = default;

    std::string str() const;

private:
    GroundField(FieldKind k, long d, unsigned long p, int deg)
        : kind_(k), d_(d), p_(p), deg_(deg) {}
    FieldKind kind_;
    long d_ = 0;
    unsigned long p_ = 0;
    int deg_ = 1;
};

// Element a + b*sqrt(d) of the ground field.  b == 0 over Q; for prime
// fields a, b hold canonical residues in [0, p).
class FieldElem {
public:
    FieldElem() : f_(GroundField::rationals()) {}  // 0 in Q
    FieldElem(const GroundField& f, mpq_class a, mpq_class b = 0);

    static FieldElem rational(mpq_class v) { return FieldElem(GroundField::rationals(), std::move(v)); }
    static FieldElem integer(long v) { return rational(mpq_class(v)); }
    static FieldElem zero(const GroundField& f) { return FieldElem(f, 0); }
    static FieldElem one(const GroundField& f) { return FieldElem(f, 1); }
    // sqrt(d) generator (or s over F_{p^2}); error over Q / F_p.
    static FieldElem sqrt_gen(const GroundField& f);

    const GroundField& field() const { return f_; }
    const mpq_class& a() const { return a_; }
    const mpq_class& b() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_one() const { return a_ == 1 && b_ == 0; }
    bool is_rational_value() const { return b_ == 0; }

    FieldElem zero_like() const { return zero(f_); }
    FieldElem one_like() const { return one(f_); }

    FieldElem operator-() const;
    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    FieldElem inverse() const;
    FieldElem scaled(long k) const;  // multiply by a plain integer

    FieldElem conjugate() const;  // a - b*sqrt(d); identity over Q / F_p
    mpq_class norm() const;       // a^2 - d*b^2 (a^2 over Q)

    bool operator==(const FieldElem& o) const;
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

    std::string str() const;

private:
    void reduce_mod_p();
    GroundField f_;
    mpq_class a_, b_;
};

std::ostream& operator<<(std::ostream& os, const FieldElem& e);

// ------------------------------------------------------------------
// Places

enum class SplitType { rational, split, inert, ramified };

// Additive valuation value: an exact rational or +infinity.
class Valuation {
public:
    Valuation() : inf_(true) {}
    Valuation(mpq_class v) : inf_(false), v_(std::move(v)) { v_.canonicalize(); }  // NOLINT(google-explicit-constructor)
    static Valuation infinity() { return Valuation(); }

    bool is_infinite() const { return inf_; }
    const mpq_class& value() const;  // error if infinite
    double approx() const;

    Valuation operator+(const Valuation& o) const;
    bool operator==(const Valuation& o) const;
    bool operator<(const Valuation& o) const;   // +inf greater than everything
    bool operator<=(const Valuation& o) const { return *this < o || *this == o; }
    static Valuation min(const Valuation& x, const Valuation& y) { return x < y ? x : y; }

    std::string str() const;

private:
    bool inf_;
    mpq_class v_;
};

// A place of the ground field: finite (over a rational prime p, with a
// splitting tag) or archimedean (embedding index).
class PlaceId {
public:
    // which_root selects between the two places over a split prime.
    static PlaceId finite(const GroundField& f, unsigned long p, int which_root = 0);
    static PlaceId archimedean(const GroundField& f, int embedding = 0);
    static std::vector<PlaceId> places_above(const GroundField& f, unsigned long p);

    bool is_archimedean() const { return arch_; }
    int embedding() const { return embedding_; }
    unsigned long p() const { return p_; }
    SplitType split_type() const { return type_; }
    // chosen root of d: residue mod p for odd split p, mod 8 for p = 2.
    const mpz_class& root() const { return root_; }
    const GroundField& field() const { return field_; }

    int ramification_index() const { return type_ == SplitType::ramified ? 2 : 1; }
    int residue_degree() const { return type_ == SplitType::inert ? 2 : 1; }
    // local degree [K_w : Q_p]
    int local_degree() const { return ramification_index() * residue_degree(); }

    std::string str() const;

private:
    PlaceId(const GroundField& f) : field_(f) {}
    GroundField field_;
    bool arch_ = false;
    int embedding_ = 0;
    unsigned long p_ = 0;
    SplitType type_ = SplitType::rational;
    mpz_class root_ = 0;
};

// Unnormalized additive valuation w with w(p) = 1; w(e) in (1/e_w)Z,
// w(0) = +infinity.  Errors on archimedean places.
Valuation valuation(const FieldElem& e, const PlaceId& place);

// Reduce e into the residue field of an unramified finite place
// (F_p for rational/split, F_{p^2} for inert).  Requires w(e) >= 0.
FieldElem reduce_at_place(const FieldElem& e, const PlaceId& place);
GroundField residue_field(const PlaceId& place);

// val_p of an exact rational (helper shared across modules).
Valuation val_p_rational(const mpq_class& q, unsigned long p);

// Square root of a mod p (p odd prime, a a residue); nullopt if non-residue.
std::optional<mpz_class> sqrt_mod_p(const mpz_class& a, unsigned long p);

bool is_prime_ulong(unsigned long n);
bool is_squarefree(long d);

} // namespace pcwb::exactmath
