#include "pcwb/field.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace pcwb::exactmath {

// ------------------------------------------------------------------
// GroundField

bool is_prime_ulong(unsigned long n) {
    if (n < 2) return false;
    mpz_class z(n);
    return mpz_probab_prime_p(z.get_mpz_t(), 32) != 0;
}

bool is_squarefree(long d) {
    if (d == 0) return false;
    unsigned long n = static_cast<unsigned long>(d < 0 ? -d : d);
    for (unsigned long q = 2; q * q <= n; ++q) {
        if (n % (q * q) == 0) return false;
    }
    return true;
}

GroundField GroundField::rationals() {
    return GroundField(FieldKind::rationals, 0, 0, 1);
}

GroundField GroundField::quadratic(long d) {
    if (d == 0 || d == 1 || !is_squarefree(d))
        throw Error("quadratic field requires squarefree d != 0, 1; got d = " + std::to_string(d));
    return GroundField(FieldKind::quadratic, d, 0, 1);
}

GroundField GroundField::prime(unsigned long p) {
    if (!is_prime_ulong(p)) throw Error("not a prime: " + std::to_string(p));
    return GroundField(FieldKind::prime_field, 0, p, 1);
}

GroundField GroundField::prime_ext(unsigned long p, long d) {
    if (!is_prime_ulong(p)) throw Error("not a prime: " + std::to_string(p));
    if (p == 2) throw Error("F_4 via s^2 - d needs odd p");
    mpz_class dm = mpz_class(d) % mpz_class(p);
    if (dm < 0) dm += p;
    mpz_class pz(p);
    if (dm == 0 || mpz_legendre(dm.get_mpz_t(), pz.get_mpz_t()) != -1)
        throw Error("prime_ext requires a non-residue d mod p");
    return GroundField(FieldKind::prime_field, d, p, 2);
}

std::string GroundField::str() const {
    switch (kind_) {
        case FieldKind::rationals: return "Q";
        case FieldKind::quadratic: return "Q(sqrt(" + std::to_string(d_) + "))";
        case FieldKind::prime_field:
            return deg_ == 1 ? "F_" + std::to_string(p_)
                             : "F_" + std::to_string(p_) + "^2";
    }
    return "?";
}

// ------------------------------------------------------------------
// FieldElem

namespace {

mpq_class mod_residue(const mpq_class& q, unsigned long p) {
    // q with p-unit denominator -> canonical residue in [0, p)
    mpz_class pz(p);
    mpz_class den = q.get_den();
    mpz_class g = gcd(den, pz);
    if (g != 1) throw Error("denominator not invertible mod " + std::to_string(p));
    mpz_class dinv;
    if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw Error("no inverse mod p");
    mpz_class r = (q.get_num() % pz) * dinv % pz;
    if (r < 0) r += pz;
    return mpq_class(r);
}

// Promote operands into a common field.  Q embeds into Q(sqrt d); Q
// reduces into F_p / F_{p^2} (error when a denominator meets p).
void promote(FieldElem& x, FieldElem& y) {
    if (x.field() == y.field()) return;
    const bool xr = x.field().is_rationals(), yr = y.field().is_rationals();
    if (!xr && !yr)
        throw Error("mixed fields: " + x.field().str() + " vs " + y.field().str());
    FieldElem& rat = xr ? x : y;
    const GroundField& target = (xr ? y : x).field();
    rat = FieldElem(target, rat.a());
}

} // namespace

FieldElem::FieldElem(const GroundField& f, mpq_class a, mpq_class b)
    : f_(f), a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
    if (f_.is_rationals() && b_ != 0) throw Error("sqrtd component over Q");
    if (f_.is_prime_field()) {
        if (f_.deg() == 1 && b_ != 0) throw Error("degree-2 component over F_p");
        reduce_mod_p();
    }
}

void FieldElem::reduce_mod_p() {
    a_ = mod_residue(a_, f_.p());
    b_ = mod_residue(b_, f_.p());
}

FieldElem FieldElem::sqrt_gen(const GroundField& f) {
    if (f.is_rationals() || (f.is_prime_field() && f.deg() == 1))
        throw Error("field " + f.str() + " has no sqrtd generator");
    return FieldElem(f, 0, 1);
}

FieldElem FieldElem::operator-() const {
    FieldElem r(*this);
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    if (f_.is_prime_field()) r.reduce_mod_p();
    return r;
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    FieldElem x(*this), y(o);
    promote(x, y);
    FieldElem r(x);
    r.a_ = x.a_ + y.a_;
    r.b_ = x.b_ + y.b_;
    if (r.f_.is_prime_field()) r.reduce_mod_p();
    return r;
}

FieldElem FieldElem::operator-(const FieldElem& o) const { return *this + (-o); }

FieldElem FieldElem::operator*(const FieldElem& o) const {
    FieldElem x(*this), y(o);
    promote(x, y);
    FieldElem r(x);
    if (x.f_.is_rationals() || (x.f_.is_prime_field() && x.f_.deg() == 1)) {
        r.a_ = x.a_ * y.a_;
        r.b_ = 0;
    } else {
        // (a1 + b1 s)(a2 + b2 s), s^2 = d
        r.a_ = x.a_ * y.a_ + mpq_class(x.f_.d()) * x.b_ * y.b_;
        r.b_ = x.a_ * y.b_ + x.b_ * y.a_;
    }
    if (r.f_.is_prime_field()) r.reduce_mod_p();
    return r;
}

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw Error("division by zero in " + f_.str());
    if (f_.is_prime_field()) {
        mpz_class pz(f_.p()), inv;
        auto inv_mod_p = [&](const mpq_class& x) {
            if (mpz_invert(inv.get_mpz_t(), x.get_num().get_mpz_t(), pz.get_mpz_t()) == 0)
                throw Error("no inverse mod p");
            return mpq_class(inv);
        };
        if (b_ == 0) return FieldElem(f_, inv_mod_p(a_));
        // (a + b s)^-1 = (a - b s) / (a^2 - d b^2)
        mpq_class n = a_ * a_ - mpq_class(f_.d()) * b_ * b_;
        mpz_class nz = n.get_num() % pz;
        if (nz < 0) nz += pz;
        if (nz == 0) throw Error("zero norm in " + f_.str());
        mpq_class ninv = inv_mod_p(mpq_class(nz));
        return FieldElem(f_, a_ * ninv, -b_ * ninv);
    }
    if (b_ == 0) {
        FieldElem r(*this);
        r.a_ = 1 / a_;
        return r;
    }
    // (a + b sqrt d)^-1 = (a - b sqrt d)/(a^2 - d b^2)
    mpq_class n = norm();
    if (n == 0) throw Error("zero norm in " + f_.str());
    return FieldElem(f_, a_ / n, -b_ / n);
}

FieldElem FieldElem::operator/(const FieldElem& o) const { return *this * o.inverse(); }

FieldElem FieldElem::scaled(long k) const {
    FieldElem r(*this);
    r.a_ *= k;
    r.b_ *= k;
    if (f_.is_prime_field()) r.reduce_mod_p();
    return r;
}

FieldElem FieldElem::conjugate() const {
    FieldElem r(*this);
    r.b_ = -r.b_;
    if (f_.is_prime_field()) r.reduce_mod_p();
    return r;
}

mpq_class FieldElem::norm() const {
    if (f_.is_prime_field()) throw Error("norm() expects characteristic zero");
    if (f_.is_rationals()) return a_;
    return a_ * a_ - mpq_class(f_.d()) * b_ * b_;
}

bool FieldElem::operator==(const FieldElem& o) const {
    if (f_ == o.f_) return a_ == o.a_ && b_ == o.b_;
    FieldElem x(*this), y(o);
    promote(x, y);
    return x.a_ == y.a_ && x.b_ == y.b_;
}

std::string FieldElem::str() const {
    std::ostringstream os;
    if (b_ == 0) {
        os << a_;
    } else {
        os << "(" << a_;
        if (b_ > 0) os << "+" << b_;
        else os << "-" << -mpq_class(b_);
        os << "*sqrtd)";
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const FieldElem& e) { return os << e.str(); }

// ------------------------------------------------------------------
// Valuation

const mpq_class& Valuation::value() const {
    if (inf_) throw Error("valuation is +infinity");
    return v_;
}

double Valuation::approx() const {
    return inf_ ? std::numeric_limits<double>::infinity() : v_.get_d();
}

Valuation Valuation::operator+(const Valuation& o) const {
    if (inf_ || o.inf_) return infinity();
    return Valuation(v_ + o.v_);
}

bool Valuation::operator==(const Valuation& o) const {
    if (inf_ != o.inf_) return false;
    return inf_ || v_ == o.v_;
}

bool Valuation::operator<(const Valuation& o) const {
    if (inf_) return false;
    if (o.inf_) return true;
    return v_ < o.v_;
}

std::string Valuation::str() const {
    return inf_ ? "+inf" : v_.get_str();
}

// ------------------------------------------------------------------
// PlaceId

PlaceId PlaceId::finite(const GroundField& f, unsigned long p, int which_root) {
    if (!is_prime_ulong(p)) throw Error("place requires a prime, got " + std::to_string(p));
    if (f.is_prime_field()) throw Error("places are defined over Q and quadratic fields only");
    PlaceId pl(f);
    pl.p_ = p;
    if (f.is_rationals()) {
        pl.type_ = SplitType::rational;
        return pl;
    }
    const long d = f.d();
    mpz_class pz(p), dm = mpz_class(d) % pz;
    if (dm < 0) dm += pz;
    if (p == 2) {
        long m8 = ((d % 8) + 8) % 8;
        if (m8 == 1) {
            pl.type_ = SplitType::split;
            // 2-adic roots of d are +-r; tag r mod 8 (pairs {1,7} or {3,5}).
            long m16 = ((d % 16) + 16) % 16;
            long tag = (m16 == 1) ? 1 : 3;
            pl.root_ = which_root == 0 ? tag : 8 - tag;
        } else if (m8 == 5) {
            pl.type_ = SplitType::inert;
        } else {
            pl.type_ = SplitType::ramified;
        }
        return pl;
    }
    if (dm == 0) {
        pl.type_ = SplitType::ramified;
        return pl;
    }
    int leg = mpz_legendre(dm.get_mpz_t(), pz.get_mpz_t());
    if (leg == 1) {
        pl.type_ = SplitType::split;
        auto r = sqrt_mod_p(dm, p);
        if (!r) throw Error("internal: residue without square root");
        mpz_class r0 = *r, r1 = pz - *r;
        if (r0 > r1) std::swap(r0, r1);
        pl.root_ = which_root == 0 ? r0 : r1;
    } else {
        pl.type_ = SplitType::inert;
    }
    return pl;
}

PlaceId PlaceId::archimedean(const GroundField& f, int embedding) {
    PlaceId pl(f);
    pl.arch_ = true;
    pl.embedding_ = embedding;
    return pl;
}

std::vector<PlaceId> PlaceId::places_above(const GroundField& f, unsigned long p) {
    std::vector<PlaceId> out;
    out.push_back(finite(f, p, 0));
    if (out.back().split_type() == SplitType::split) out.push_back(finite(f, p, 1));
    return out;
}

std::string PlaceId::str() const {
    if (arch_) return "arch#" + std::to_string(embedding_);
    std::string s = "p=" + std::to_string(p_);
    switch (type_) {
        case SplitType::rational: break;
        case SplitType::split: s += " split(root " + root_.get_str() + ")"; break;
        case SplitType::inert: s += " inert"; break;
        case SplitType::ramified: s += " ramified"; break;
    }
    return s;
}

// ------------------------------------------------------------------
// sqrt mod p (Tonelli--Shanks)

std::optional<mpz_class> sqrt_mod_p(const mpz_class& a0, unsigned long p) {
    mpz_class pz(p), a = a0 % pz;
    if (a < 0) a += pz;
    if (a == 0) return mpz_class(0);
    if (p == 2) return a;  // 1
    if (mpz_legendre(a.get_mpz_t(), pz.get_mpz_t()) != 1) return std::nullopt;
    if (p % 4 == 3) {
        mpz_class e = (pz + 1) / 4, r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), pz.get_mpz_t());
        return r;
    }
    // p = 1 mod 4: Tonelli--Shanks
    mpz_class q = pz - 1;
    unsigned long s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    mpz_class z = 2;
    while (mpz_legendre(z.get_mpz_t(), pz.get_mpz_t()) != -1) ++z;
    mpz_class c, t, r, e = (q + 1) / 2;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t());
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), pz.get_mpz_t());
    unsigned long m = s;
    while (t != 1) {
        mpz_class tt = t;
        unsigned long i = 0;
        while (tt != 1) { tt = tt * tt % pz; ++i; }
        mpz_class b = c;
        for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % pz;
        r = r * b % pz;
        c = b * b % pz;
        t = t * c % pz;
        m = i;
    }
    return r;
}

// ------------------------------------------------------------------
// valuation

Valuation val_p_rational(const mpq_class& q, unsigned long p) {
    if (q == 0) return Valuation::infinity();
    mpz_class pz(p), tmp;
    unsigned long vn = mpz_remove(tmp.get_mpz_t(), q.get_num().get_mpz_t(), pz.get_mpz_t());
    unsigned long vd = mpz_remove(tmp.get_mpz_t(), q.get_den().get_mpz_t(), pz.get_mpz_t());
    return Valuation(mpq_class(static_cast<long>(vn) - static_cast<long>(vd)));
}

namespace {

// Lift the chosen square root of d to a root mod p^k.
mpz_class lift_sqrt(const PlaceId& pl, unsigned long k) {
    const mpz_class d(pl.field().d());
    const mpz_class pz(pl.p());
    mpz_class target;
    mpz_pow_ui(target.get_mpz_t(), pz.get_mpz_t(), k);
    if (pl.p() != 2) {
        // Newton doubling: r <- r - (r^2 - d)/(2r), precision p^j -> p^(2j)
        mpz_class r = pl.root();
        mpz_class mod = pz;
        while (mod < target) {
            mpz_class mod2 = mod * mod;
            mpz_class denom = 2 * r, inv;
            if (mpz_invert(inv.get_mpz_t(), denom.get_mpz_t(), mod2.get_mpz_t()) == 0)
                throw Error("internal: Hensel lift failed");
            r = (r - (r * r - d) * inv) % mod2;
            if (r < 0) r += mod2;
            mod = mod2;
        }
        return r % target;
    }
    // p = 2, d = 1 mod 8: bitwise lift starting from the tagged root mod 16.
    long tag = static_cast<long>(pl.root().get_si());
    mpz_class r = -1;
    for (long cand = 1; cand < 16; cand += 2) {
        if (((cand * cand - d) % 16) == 0 && ((cand - tag) % 8) == 0) { r = cand; break; }
    }
    if (r < 0) throw Error("internal: no 2-adic root with tag");
    mpz_class mod = 16;
    while (mod < target) {
        mpz_class next = mod * 2;
        if (((r * r - d) % next) != 0) r += mod / 2;
        mod = next;
    }
    return r % target;
}

} // namespace

Valuation valuation(const FieldElem& e, const PlaceId& place) {
    if (place.is_archimedean())
        throw Error("valuation at an archimedean place; use absolute values");
    if (e.is_zero()) return Valuation::infinity();
    const unsigned long p = place.p();
    if (e.field().is_prime_field())
        throw Error("valuation of a prime-field element");
    if (e.field().is_rationals() || e.b() == 0)
        return val_p_rational(e.a(), p);
    if (!(e.field() == place.field()))
        throw Error("place belongs to " + place.field().str() + ", element to " + e.field().str());

    // e = (A + B sqrt d)/c with A, B, c integers.
    mpz_class c = lcm(e.a().get_den(), e.b().get_den());
    mpz_class A = e.a().get_num() * (c / e.a().get_den());
    mpz_class B = e.b().get_num() * (c / e.b().get_den());
    Valuation vc = val_p_rational(mpq_class(c), p);
    mpz_class N = A * A - mpz_class(e.field().d()) * B * B;
    mpz_class pz(p), tmp;
    unsigned long vN = mpz_remove(tmp.get_mpz_t(), N.get_mpz_t(), pz.get_mpz_t());

    switch (place.split_type()) {
        case SplitType::inert:
            if (vN % 2 != 0) throw Error("internal: odd norm valuation at inert place");
            return Valuation(mpq_class(vN / 2) - vc.value());
        case SplitType::ramified:
            return Valuation(mpq_class(vN, 2) - vc.value());
        case SplitType::split: {
            mpz_class rhat = lift_sqrt(place, vN + 1);
            mpz_class target;
            mpz_pow_ui(target.get_mpz_t(), pz.get_mpz_t(), vN + 1);
            mpz_class img = (A + B * rhat) % target;
            if (img < 0) img += target;
            if (img == 0) throw Error("internal: split valuation exceeded norm bound");
            unsigned long v = mpz_remove(tmp.get_mpz_t(), img.get_mpz_t(), pz.get_mpz_t());
            return Valuation(mpq_class(v) - vc.value());
        }
        case SplitType::rational:
            throw Error("internal: rational place for quadratic element");
    }
    throw Error("unreachable");
}

// ------------------------------------------------------------------
// residue reduction

GroundField residue_field(const PlaceId& place) {
    switch (place.split_type()) {
        case SplitType::rational:
        case SplitType::split:
            return GroundField::prime(place.p());
        case SplitType::inert:
            return GroundField::prime_ext(place.p(), place.field().d());
        case SplitType::ramified:
            throw RamifiedPlaceError(
                "residue reduction at a ramified place is not supported; "
                "use the divisibility check");
    }
    throw Error("unreachable");
}

FieldElem reduce_at_place(const FieldElem& e, const PlaceId& place) {
    GroundField k = residue_field(place);
    const unsigned long p = place.p();
    if (e.field().is_rationals() || e.b() == 0)
        return FieldElem(k, mod_residue(e.a(), p));
    switch (place.split_type()) {
        case SplitType::split: {
            mpq_class r(lift_sqrt(place, 1));
            return FieldElem(k, mod_residue(e.a() + e.b() * r, p));
        }
        case SplitType::inert:
            return FieldElem(k, mod_residue(e.a(), p), mod_residue(e.b(), p));
        default:
            throw Error("unreachable");
    }
}

} // namespace pcwb::exactmath
