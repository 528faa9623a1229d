#include "pcwb/parser.hpp"

#include <cctype>
#include <sstream>

namespace pcwb::exactmath {

namespace {

struct Token {
    enum Kind { uint_lit, ident, plus, minus, star, slash, caret, lparen, rparen, end };
    Kind kind;
    std::size_t offset;
    std::string text;  // uint_lit / ident payload
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
        tok_.offset = i_;
        if (i_ >= s_.size()) {
            tok_.kind = Token::end;
            return;
        }
        unsigned char c = static_cast<unsigned char>(s_[i_]);
        if (c >= 0x80) throw ParseError(i_, "non-ASCII byte in expression");
        switch (c) {
            case '+': tok_.kind = Token::plus; ++i_; return;
            case '-': tok_.kind = Token::minus; ++i_; return;
            case '*': tok_.kind = Token::star; ++i_; return;
            case '/': tok_.kind = Token::slash; ++i_; return;
            case '^': tok_.kind = Token::caret; ++i_; return;
            case '(': tok_.kind = Token::lparen; ++i_; return;
            case ')': tok_.kind = Token::rparen; ++i_; return;
            default: break;
        }
        if (std::isdigit(c)) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            tok_.kind = Token::uint_lit;
            tok_.text = s_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            tok_.kind = Token::ident;
            tok_.text = s_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        throw ParseError(i_, std::string("unexpected character '") + s_[i_] + "'");
    }
    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& text, const GroundField& field, const std::string& variable)
        : lex_(text), field_(field), var_(variable) {}

    RatFunc run() {
        RatFunc e = expr();
        const Token& t = lex_.peek();
        if (t.kind != Token::end) throw ParseError(t.offset, "trailing input");
        return e;
    }

private:
    RatFunc expr() {
        RatFunc acc = term();
        for (;;) {
            Token::Kind k = lex_.peek().kind;
            if (k == Token::plus) {
                lex_.take();
                acc = acc + term();
            } else if (k == Token::minus) {
                lex_.take();
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    RatFunc term() {
        RatFunc acc = factor();
        for (;;) {
            Token::Kind k = lex_.peek().kind;
            if (k == Token::star) {
                lex_.take();
                acc = acc * factor();
            } else if (k == Token::slash) {
                Token t = lex_.take();
                RatFunc rhs = factor();
                if (rhs.is_zero())
                    throw ParseError(t.offset, "division by zero polynomial");
                acc = acc / rhs;
            } else {
                return acc;
            }
        }
    }

    RatFunc factor() {
        RatFunc b = base();
        if (lex_.peek().kind == Token::caret) {
            lex_.take();
            Token t = lex_.peek();
            if (t.kind != Token::uint_lit)
                throw ParseError(t.offset, "exponent must be a nonnegative integer");
            lex_.take();
            unsigned long e = std::stoul(t.text);
            return b.pow(e);
        }
        return b;
    }

    RatFunc base() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Token::uint_lit: {
                lex_.take();
                mpz_class z(t.text);
                return RatFunc::constant(FieldElem(field_, mpq_class(z)));
            }
            case Token::ident: {
                lex_.take();
                if (t.text == "sqrtd") {
                    if (field_.is_rationals() ||
                        (field_.is_prime_field() && field_.deg() == 1))
                        throw ParseError(t.offset, "'sqrtd' used over " + field_.str());
                    return RatFunc::constant(FieldElem::sqrt_gen(field_));
                }
                if (t.text != var_)
                    throw ParseError(t.offset, "unknown identifier '" + t.text + "'");
                return RatFunc::from_poly(Poly::monomial(FieldElem::one(field_), 1));
            }
            case Token::lparen: {
                lex_.take();
                RatFunc e = expr();
                Token r = lex_.peek();
                if (r.kind != Token::rparen) throw ParseError(r.offset, "expected ')'");
                lex_.take();
                return e;
            }
            case Token::minus: {
                lex_.take();
                return -base();
            }
            default:
                throw ParseError(t.offset, "expected expression");
        }
    }

    Lexer lex_;
    GroundField field_;
    std::string var_;
};

std::string print_rational(const mpq_class& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// magnitude string for a coefficient together with a printable sign;
// quadratic / deg-2 values with b != 0 are parenthesized with signs inside.
struct CoeffPrint {
    bool negative;
    std::string magnitude;  // never begins with '-'
    bool is_one;
};

CoeffPrint print_coeff(const FieldElem& c) {
    if (c.b() == 0) {
        mpq_class q = c.a();
        bool neg = q < 0;
        if (neg) q = -q;
        return {neg, print_rational(q), q == 1};
    }
    std::ostringstream os;
    os << "(";
    bool lead = true;
    if (c.a() != 0) {
        os << print_rational(c.a());
        lead = false;
    }
    mpq_class b = c.b();
    if (!lead) os << (b < 0 ? "-" : "+");
    else if (b < 0) os << "-";
    mpq_class ab = abs(b);
    if (ab != 1) os << print_rational(ab) << "*";
    os << "sqrtd)";
    return {false, os.str(), false};
}

} // namespace

RatFunc parse_ratfunc(const std::string& text, const GroundField& field,
                      const std::string& variable) {
    return Parser(text, field, variable).run();
}

std::string print_poly(const Poly& p, const std::string& variable) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long i = p.deg(); i >= 0; --i) {
        const FieldElem& c = p[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        CoeffPrint cp = print_coeff(c);
        // A leading unary minus must bind to a literal, never to the
        // variable: "-x^2" would reparse as (-x)^2.
        bool unary = first && cp.negative;
        if (first) {
            if (cp.negative) os << "-";
            first = false;
        } else {
            os << (cp.negative ? " - " : " + ");
        }
        if (i == 0) {
            os << cp.magnitude;
        } else {
            if (!cp.is_one || unary) os << cp.magnitude << "*";
            os << variable;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::string print_ratfunc(const RatFunc& f, const std::string& variable) {
    if (f.is_zero()) return "0";
    if (f.is_poly()) return print_poly(f.num(), variable);
    return "(" + print_poly(f.num(), variable) + ")/(" + print_poly(f.den(), variable) + ")";
}

} // namespace pcwb::exactmath
