#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "realdescent/exact.hpp"

namespace realdescent {
namespace detail {

struct Token {
    enum Kind { Int, Dec, Imag, ImagDec, Sqrt, Ident, Op, End } kind;
    std::string text; // digits / decimal literal / identifier
    char op = 0;
};

inline std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto peek_decimal = [&](std::size_t j) {
        bool dot = false;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) {
            if (s[j] == '.') dot = true;
            ++j;
        }
        if (j < s.size() && (s[j] == 'e' || s[j] == 'E') &&
            j + 1 < s.size() && (std::isdigit(static_cast<unsigned char>(s[j + 1])) || s[j + 1] == '+' || s[j + 1] == '-')) {
            dot = true;
            j += 2;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
        return std::pair<std::size_t, bool>(j, dot);
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            auto [j, dot] = peek_decimal(i);
            std::string num = s.substr(i, j - i);
            i = j;
            if (i < s.size() && s[i] == 'i' &&
                (i + 1 == s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 1])))) {
                out.push_back({dot ? Token::ImagDec : Token::Imag, num});
                ++i;
            } else {
                out.push_back({dot ? Token::Dec : Token::Int, num});
            }
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
            std::string w = s.substr(i, j - i);
            i = j;
            if (w.size() > 4 && w.rfind("sqrt", 0) == 0) {
                out.push_back({Token::Sqrt, w.substr(4)});
            } else {
                out.push_back({Token::Ident, w});
            }
            continue;
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '(' || c == ')') {
            out.push_back({Token::Op, std::string(1, c), c});
            ++i;
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "' in expression");
    }
    out.push_back({Token::End, ""});
    return out;
}

/// Recursive-descent evaluator shared by the exact and numeric paths.
/// V must provide: from_int(str), from_decimal(str), sqrt_int(long),
/// imaginary_unit(), ident(name), plus +,-,*,/ and unary -.
template <typename V>
class Evaluator {
public:
    Evaluator(const std::vector<Token>& toks, V& vals) : t_(toks), vals_(vals) {}

    auto run() {
        auto v = expr();
        if (t_[p_].kind != Token::End) throw ParseError("trailing input in expression");
        return v;
    }

private:
    using Val = decltype(std::declval<V>().imaginary_unit());

    bool is_op(char c) const { return t_[p_].kind == Token::Op && t_[p_].op == c; }

    Val expr() {
        Val v = term();
        while (is_op('+') || is_op('-')) {
            char c = t_[p_++].op;
            Val w = term();
            v = (c == '+') ? v + w : v - w;
        }
        return v;
    }

    Val term() {
        Val v = unary();
        while (true) {
            if (is_op('*') || is_op('/')) {
                char c = t_[p_++].op;
                Val w = unary();
                v = (c == '*') ? v * w : v / w;
            } else if (starts_atom()) {
                v = v * unary(); // implicit multiplication, e.g. "sqrt3(1+1i)"
            } else {
                break;
            }
        }
        return v;
    }

    Val unary() {
        if (is_op('-')) { ++p_; return -unary(); }
        if (is_op('+')) { ++p_; return unary(); }
        return atom();
    }

    bool starts_atom() const {
        const Token& t = t_[p_];
        return t.kind == Token::Sqrt || t.kind == Token::Ident || t.kind == Token::Imag ||
               t.kind == Token::ImagDec || (t.kind == Token::Op && t.op == '(');
    }

    Val atom() {
        const Token& t = t_[p_];
        switch (t.kind) {
            case Token::Int: ++p_; return vals_.from_int(t.text);
            case Token::Dec: ++p_; return vals_.from_decimal(t.text);
            case Token::Imag: ++p_; return vals_.from_int(t.text) * vals_.imaginary_unit();
            case Token::ImagDec: ++p_; return vals_.from_decimal(t.text) * vals_.imaginary_unit();
            case Token::Sqrt: {
                ++p_;
                long n = std::stol(t.text);
                return vals_.sqrt_int(n);
            }
            case Token::Ident: ++p_; return vals_.ident(t.text);
            case Token::Op:
                if (t.op == '(') {
                    ++p_;
                    Val v = expr();
                    if (!is_op(')')) throw ParseError("missing ')'");
                    ++p_;
                    return v;
                }
                break;
            default: break;
        }
        throw ParseError("unexpected token '" + t.text + "' in expression");
    }

    const std::vector<Token>& t_;
    V& vals_;
    std::size_t p_ = 0;
};

struct ExactValues {
    ExactComplex from_int(const std::string& s) {
        return ExactComplex(Rational(mpz_class(s)));
    }
    ExactComplex from_decimal(const std::string&) {
        throw ParseError("decimal literals are not exact; use p/q");
    }
    ExactComplex sqrt_int(long n) {
        if (n <= 0) throw ParseError("sqrt radicand must be positive");
        long s = 1;
        for (long p = 2; p * p <= n; ++p)
            while (n % (p * p) == 0) { n /= p * p; s *= p; }
        if (n == 1) return ExactComplex(Rational(s));
        return ExactComplex(RealAlgebraic::root_multiple(n, Rational(s)), RealAlgebraic(0L));
    }
    ExactComplex imaginary_unit() { return ExactComplex::i_unit(); }
    ExactComplex ident(const std::string& name) {
        if (name == "i") return ExactComplex::i_unit();
        if (name == "rho") {
            // e^{2 pi i/3} = -1/2 + (sqrt3/2) i
            return ExactComplex(RealAlgebraic(make_rational(-1, 2)),
                                RealAlgebraic::root_multiple(3, make_rational(1, 2)));
        }
        throw ParseError("unknown identifier '" + name + "' in exact expression");
    }
};

struct NumericValues {
    mpfr_prec_t prec;
    const std::map<std::string, BigComplex>* bindings;

    BigComplex from_int(const std::string& s) {
        return BigComplex(BigFloat::from_string(s, prec), BigFloat(prec));
    }
    BigComplex from_decimal(const std::string& s) { return from_int(s); }
    BigComplex sqrt_int(long n) {
        if (n <= 0) throw ParseError("sqrt radicand must be positive");
        return BigComplex(BigFloat(n, prec).sqrt(), BigFloat(prec));
    }
    BigComplex imaginary_unit() { return BigComplex::i_unit(prec); }
    BigComplex ident(const std::string& name) {
        if (name == "i") return imaginary_unit();
        if (name == "pi") return BigComplex(BigFloat::pi(prec), BigFloat(prec));
        if (name == "rho") {
            BigFloat half(prec);
            mpfr_set_d(half.raw(), -0.5, MPFR_RNDN);
            return BigComplex(half, BigFloat(3, prec).sqrt() / 2);
        }
        if (bindings) {
            auto it = bindings->find(name);
            if (it != bindings->end()) return it->second;
        }
        throw ParseError("unknown identifier '" + name + "'");
    }
};

} // namespace detail

/// Parse shorthand like "sqrt3*(1+1i)", "1/2 + sqrt5*1i" into canonical form.
inline ExactComplex parse_exact(const std::string& s) {
    auto toks = detail::lex(s);
    detail::ExactValues vals;
    return detail::Evaluator(toks, vals).run();
}

/// Numeric expression over BigComplex; identifiers resolved via `bindings`
/// (plus builtin i, pi, rho). Accepts decimal literals.
inline BigComplex parse_numeric(const std::string& s, mpfr_prec_t prec,
                                const std::map<std::string, BigComplex>& bindings = {}) {
    auto toks = detail::lex(s);
    detail::NumericValues vals{prec, &bindings};
    return detail::Evaluator(toks, vals).run();
}

inline nlohmann::json exact_to_json(const ExactComplex& z) {
    nlohmann::json j;
    j["field"] = z.field().generators();
    auto coords = [](const RealAlgebraic& x) {
        std::vector<std::string> out;
        for (const auto& q : x.coords()) out.push_back(q.get_str());
        return nlohmann::json::array({out});
    };
    j["re"] = coords(z.re());
    j["im"] = coords(z.im());
    return j;
}

inline ExactComplex exact_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_exact(j.get<std::string>());
    if (!j.contains("field") || !j.contains("re") || !j.contains("im"))
        throw ParseError("exact value needs field/re/im");
    std::vector<long> gens = j["field"].get<std::vector<long>>();
    RealField f(gens);
    auto coords = [&](const nlohmann::json& a) {
        nlohmann::json row = a;
        if (row.is_array() && row.size() == 1 && row[0].is_array()) row = row[0];
        if (!row.is_array() || row.size() != f.dim())
            throw ParseError("coordinate row has wrong length");
        std::vector<Rational> c;
        for (const auto& e : row) {
            if (e.is_string()) {
                Rational q(e.get<std::string>());
                q.canonicalize();
                c.push_back(q);
            } else {
                c.push_back(Rational(e.get<long>()));
            }
        }
        return RealAlgebraic(f, std::move(c));
    };
    return ExactComplex(coords(j["re"]), coords(j["im"]));
}

} // namespace realdescent
