#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "realdescent/descent.hpp"
#include "realdescent/parse.hpp"

namespace realdescent {

// ---------------------------------------------------------------------------
// Formal products of simple commutative group factors
// ---------------------------------------------------------------------------

struct SimpleFactor {
    enum class Kind { Ga, Gm, STorus, Elliptic };
    Kind kind = Kind::Ga;
    std::optional<ExactComplex> tau; // Elliptic only, normalized into H

    static SimpleFactor ga() { return {Kind::Ga, std::nullopt}; }
    static SimpleFactor gm() { return {Kind::Gm, std::nullopt}; }
    static SimpleFactor storus() { return {Kind::STorus, std::nullopt}; }
    static SimpleFactor elliptic(const ExactComplex& t) {
        return {Kind::Elliptic, normalize_to_upper(t)};
    }

    bool is_linear() const { return kind != Kind::Elliptic; }

    std::string str() const {
        switch (kind) {
            case Kind::Ga: return "Ga";
            case Kind::Gm: return "Gm";
            case Kind::STorus: return "S";
            case Kind::Elliptic: return "E(tau=" + tau->str() + ")";
        }
        return "?";
    }
};

/// Non-split linear extension of an elliptic base: by Ga with t != 0, or by
/// Gm with non-torsion omega. Split and isotrivial wrappers are rejected at
/// construction; write the product instead.
struct ExtensionWrapper {
    enum class Kind { ExtGa, ExtGm };
    Kind kind;
    SimpleFactor base; // always Elliptic

    std::string str() const {
        return (kind == Kind::ExtGa ? "ExtGa(" : "ExtGm(") + base.str() +
               (kind == Kind::ExtGa ? ",t=1)" : ",omega=nontorsion)");
    }
};

using GroupFactor = std::variant<SimpleFactor, ExtensionWrapper>;

struct GroupObject {
    std::vector<GroupFactor> factors;

    static GroupObject product(std::vector<GroupFactor> fs) { return GroupObject{std::move(fs)}; }

    GroupObject& push(const SimpleFactor& f) {
        factors.push_back(f);
        return *this;
    }
    GroupObject& push_ext_ga(const ExactComplex& tau, const Rational& t) {
        if (t == 0) throw DomainError("ExtGa with t = 0 is the split product; write it as one");
        factors.push_back(ExtensionWrapper{ExtensionWrapper::Kind::ExtGa, SimpleFactor::elliptic(tau)});
        return *this;
    }
    GroupObject& push_ext_gm(const ExactComplex& tau, bool omega_torsion) {
        if (omega_torsion)
            throw DomainError("ExtGm with torsion omega is isotrivial and excluded");
        factors.push_back(ExtensionWrapper{ExtensionWrapper::Kind::ExtGm, SimpleFactor::elliptic(tau)});
        return *this;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) s += " x ";
            s += std::visit([](const auto& f) { return f.str(); }, factors[i]);
        }
        return s.empty() ? "1" : s;
    }
};

// ---------------------------------------------------------------------------
// Conjugation and the delta-calculus
// ---------------------------------------------------------------------------

inline SimpleFactor conj_factor(const SimpleFactor& f) {
    if (f.kind != SimpleFactor::Kind::Elliptic) return f;
    return SimpleFactor::elliptic(conjugate_curve_tau(*f.tau));
}

inline GroupObject conj_object(const GroupObject& g) {
    GroupObject out;
    for (const auto& f : g.factors) {
        if (std::holds_alternative<SimpleFactor>(f)) {
            out.factors.push_back(conj_factor(std::get<SimpleFactor>(f)));
        } else {
            ExtensionWrapper w = std::get<ExtensionWrapper>(f);
            w.base = conj_factor(w.base);
            out.factors.push_back(w);
        }
    }
    return out;
}

/// Number of simple factors of the maximal plurisimple quotient: every bare
/// factor counts one, every non-split extension wrapper counts one (its
/// linear fiber is the universal kernel).
inline std::size_t delta_invariant(const GroupObject& g) { return g.factors.size(); }

/// Replaces each extension wrapper by its elliptic base. Idempotent.
inline GroupObject max_plurisimple_quotient(const GroupObject& g) {
    GroupObject out;
    for (const auto& f : g.factors) {
        if (std::holds_alternative<SimpleFactor>(f))
            out.factors.push_back(std::get<SimpleFactor>(f));
        else
            out.factors.push_back(std::get<ExtensionWrapper>(f).base);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hom ranks
// ---------------------------------------------------------------------------

struct HomRank {
    std::size_t rank = 0;
    enum class Note { Zero, Scalars, CMOrder, Characters } note = Note::Zero;
};

/**
 * Rank of Hom(A, B) for simple factors: no maps between linear and elliptic
 * factors in either direction, no maps between Ga and the torus factors,
 * characters among Gm/S (S is treated as Gm after complexification), and
 * the isogeny module rank between elliptic factors.
 */
inline HomRank hom_rank(const SimpleFactor& a, const SimpleFactor& b) {
    using K = SimpleFactor::Kind;
    if (a.is_linear() != b.is_linear()) return {0, HomRank::Note::Zero};
    if (a.kind == K::Elliptic) {
        std::size_t r = hom_module(*a.tau, *b.tau).rank();
        if (r == 0) return {0, HomRank::Note::Zero};
        return {r, r == 2 ? HomRank::Note::CMOrder : HomRank::Note::Scalars};
    }
    bool a_torus = a.kind != K::Ga, b_torus = b.kind != K::Ga;
    if (a_torus != b_torus) return {0, HomRank::Note::Zero};
    if (!a_torus) return {1, HomRank::Note::Scalars};
    return {1, HomRank::Note::Characters};
}

namespace detail {

// Zero test for Hom between group factors including extension wrappers.
// For non-split, non-isotrivial wrappers the exact sequences collapse to:
// maps into a wrapper land in its fiber; maps out of a wrapper to a linear
// factor vanish, to an elliptic factor factor through the base; between
// wrappers a nonzero map needs matching fiber kind and isogenous bases.
inline bool hom_is_zero(const GroupFactor& a, const GroupFactor& b) {
    const bool aw = std::holds_alternative<ExtensionWrapper>(a);
    const bool bw = std::holds_alternative<ExtensionWrapper>(b);
    if (!aw && !bw)
        return hom_rank(std::get<SimpleFactor>(a), std::get<SimpleFactor>(b)).rank == 0;
    if (!aw) {
        const auto& w = std::get<ExtensionWrapper>(b);
        SimpleFactor fiber = w.kind == ExtensionWrapper::Kind::ExtGa ? SimpleFactor::ga()
                                                                     : SimpleFactor::gm();
        return hom_rank(std::get<SimpleFactor>(a), fiber).rank == 0;
    }
    if (!bw) {
        const auto& w = std::get<ExtensionWrapper>(a);
        const auto& t = std::get<SimpleFactor>(b);
        if (t.is_linear()) return true;
        return hom_rank(w.base, t).rank == 0;
    }
    const auto& wa = std::get<ExtensionWrapper>(a);
    const auto& wb = std::get<ExtensionWrapper>(b);
    if (wa.kind != wb.kind) return true;
    return hom_rank(wa.base, wb.base).rank == 0;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Inherited-descent hypothesis checks
// ---------------------------------------------------------------------------

enum class HypothesisCheck { StrongOK, WeakOK, Fails };

/**
 * For G with kernel the sub-product selected by kernel_indices and
 * U = G/kernel: StrongOK iff Hom(L, u) = 0 for every kernel factor L and
 * every factor u of the conjugate of U; WeakOK iff Hom(u, M) = 0 for every
 * such u and every quotient factor M of the kernel (quotients of a formal
 * product are its sub-multisets, so factorwise checks suffice).
 */
inline HypothesisCheck inherited_hypothesis_check(const GroupObject& g,
                                                  const std::vector<std::size_t>& kernel_indices) {
    std::vector<bool> in_kernel(g.factors.size(), false);
    for (std::size_t i : kernel_indices) {
        if (i >= g.factors.size()) throw DomainError("kernel index out of range");
        if (in_kernel[i]) throw DomainError("duplicate kernel index");
        in_kernel[i] = true;
    }
    if (kernel_indices.size() == g.factors.size())
        throw DomainError("kernel must be a proper sub-product");

    GroupObject quotient;
    std::vector<GroupFactor> kernel;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (in_kernel[i]) kernel.push_back(g.factors[i]);
        else quotient.factors.push_back(g.factors[i]);
    }
    GroupObject uh = conj_object(quotient);

    bool strong = true, weak = true;
    for (const auto& l : kernel) {
        for (const auto& u : uh.factors) {
            if (!detail::hom_is_zero(l, u)) strong = false;
            if (!detail::hom_is_zero(u, l)) weak = false;
        }
    }
    if (strong) return HypothesisCheck::StrongOK;
    if (weak) return HypothesisCheck::WeakOK;
    return HypothesisCheck::Fails;
}

// ---------------------------------------------------------------------------
// Weil restriction of formal objects
// ---------------------------------------------------------------------------

/// Restriction profile on simple factors: Gm and elliptic factors only.
inline RestrictionProfile weil_restriction_profile(const SimpleFactor& f) {
    switch (f.kind) {
        case SimpleFactor::Kind::Gm: return restriction_profile_gm();
        case SimpleFactor::Kind::Elliptic: return restriction_profile_elliptic(*f.tau);
        default:
            throw DomainError("restriction profile defined for Gm and elliptic factors only");
    }
}

struct FactorRestriction {
    std::string factor;
    RestrictionProfile profile;
};

/// Factor-wise restriction report; the restriction of a product is the
/// product of the restrictions.
inline std::vector<FactorRestriction> weil_restrict_object(const GroupObject& g) {
    std::vector<FactorRestriction> out;
    for (const auto& f : g.factors) {
        FactorRestriction fr;
        fr.factor = std::visit([](const auto& x) { return x.str(); }, f);
        if (std::holds_alternative<SimpleFactor>(f)) {
            const auto& s = std::get<SimpleFactor>(f);
            switch (s.kind) {
                case SimpleFactor::Kind::Ga:
                    fr.profile = {false, "Ga x Ga", "Mat2(Q)-module of rank 4"};
                    break;
                case SimpleFactor::Kind::STorus:
                    throw DomainError("S is a descent target label, not a factor over C");
                default:
                    fr.profile = weil_restriction_profile(s);
            }
        } else {
            const auto& w = std::get<ExtensionWrapper>(f);
            RestrictionProfile base = weil_restriction_profile(w.base);
            std::string fiber = w.kind == ExtensionWrapper::Kind::ExtGa ? "Ga x Ga" : "Gm x S";
            fr.profile.simple = false;
            fr.profile.structure = "extension of [" + base.structure + "] by " + fiber;
            fr.profile.endomorphisms = "";
        }
        out.push_back(std::move(fr));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Object literal syntax: "E(tau=i) x Gm x ExtGa(E(tau=i),t=1)"
// ---------------------------------------------------------------------------

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

// split on top-level occurrences of sep (never inside parentheses)
inline std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// factor separator: a standalone top-level 'x' (whitespace-delimited), so
// the 'x' inside ExtGa/ExtGm never splits
inline std::vector<std::string> split_factors(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        bool standalone = c == 'x' && depth == 0 &&
                          (i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]))) &&
                          (i + 1 == s.size() || std::isspace(static_cast<unsigned char>(s[i + 1])));
        if (standalone) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline SimpleFactor parse_elliptic(const std::string& s) {
    std::string t = strip(s);
    if (t.rfind("E(", 0) != 0 || t.back() != ')')
        throw ParseError("expected E(tau=...): got '" + s + "'");
    std::string inner = t.substr(2, t.size() - 3);
    std::string key = "tau=";
    if (inner.rfind(key, 0) != 0) throw ParseError("expected tau= inside E(...)");
    return SimpleFactor::elliptic(parse_exact(inner.substr(key.size())));
}

} // namespace detail

inline GroupObject parse_group_object(const std::string& text) {
    GroupObject g;
    for (const std::string& raw : detail::split_factors(text)) {
        std::string f = detail::strip(raw);
        if (f.empty()) throw ParseError("empty factor in object literal");
        if (f == "Ga") { g.push(SimpleFactor::ga()); continue; }
        if (f == "Gm") { g.push(SimpleFactor::gm()); continue; }
        if (f == "S") { g.push(SimpleFactor::storus()); continue; }
        if (f.rfind("E(", 0) == 0) { g.push(detail::parse_elliptic(f)); continue; }
        if (f.rfind("ExtGa(", 0) == 0 || f.rfind("ExtGm(", 0) == 0) {
            bool is_ga = f.rfind("ExtGa(", 0) == 0;
            if (f.back() != ')') throw ParseError("unterminated wrapper in '" + f + "'");
            std::string inner = f.substr(6, f.size() - 7);
            auto parts = detail::split_top(inner, ',');
            if (parts.size() != 2) throw ParseError("wrapper needs base and parameter");
            SimpleFactor base = detail::parse_elliptic(parts[0]);
            std::string param = detail::strip(parts[1]);
            if (is_ga) {
                if (param.rfind("t=", 0) != 0) throw ParseError("ExtGa needs t=...");
                ExactComplex t = parse_exact(param.substr(2));
                if (t.is_zero())
                    throw DomainError("ExtGa with t = 0 is the split product; write it as one");
                g.factors.push_back(ExtensionWrapper{ExtensionWrapper::Kind::ExtGa, base});
            } else {
                if (param.rfind("omega=", 0) != 0) throw ParseError("ExtGm needs omega=...");
                std::string om = detail::strip(param.substr(6));
                if (om == "torsion")
                    throw DomainError("ExtGm with torsion omega is isotrivial and excluded");
                if (om != "nontorsion")
                    throw ParseError("omega must be 'torsion' or 'nontorsion'");
                g.factors.push_back(ExtensionWrapper{ExtensionWrapper::Kind::ExtGm, base});
            }
            continue;
        }
        throw ParseError("unknown factor '" + f + "'");
    }
    return g;
}

} // namespace realdescent
