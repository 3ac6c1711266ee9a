// descentlab: lattice reports, descent verdicts, extension kernels and
// integer-relation probes. JSON in, JSON out; --output table for flat text.
//
// Exit codes: 0 ok, 1 usage/parse, 2 domain error, 3 precision error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "realdescent/descent.hpp"
#include "realdescent/extensions.hpp"
#include "realdescent/groupcat.hpp"
#include "realdescent/parse.hpp"
#include "realdescent/relations.hpp"
#include "realdescent/weierstrass.hpp"

using namespace realdescent;
using nlohmann::json;

namespace {

struct CommonOpts {
    int prec = 50;
    int guard = 20;
    std::string output = "json";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    const char* env = std::getenv("DESCENTLAB_PREC");
    if (env) o.prec = std::atoi(env);
    cmd->add_option("--prec", o.prec, "working precision in decimal digits");
    cmd->add_option("--guard", o.guard, "guard digits");
    cmd->add_option("--output", o.output, "json or table")
        ->check(CLI::IsMember({"json", "table"}));
}

json precision_echo(const PrecisionContext& ctx) {
    return json{{"decimal_digits", ctx.decimal_digits()}, {"guard_digits", ctx.guard_digits()}};
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

void emit(const json& j, const CommonOpts& o) {
    if (o.output == "table") flatten(j, "", std::cout);
    else std::cout << j.dump(2) << "\n";
}

std::string num(const BigFloat& x, int digits) { return x.str(digits); }

json complex_json(const BigComplex& z, int digits) {
    return json{{"re", num(z.re(), digits)}, {"im", num(z.im(), digits)}};
}

// Lattice from --tau or --lambda1/--lambda2; exact when the expressions
// parse exactly, numeric otherwise.
Lattice lattice_from_flags(const std::string& tau, const std::string& l1, const std::string& l2,
                           const PrecisionContext& ctx) {
    if (!tau.empty()) {
        try {
            return Lattice::from_tau_exact(parse_exact(tau));
        } catch (const ParseError&) {
            return Lattice::from_tau_numeric(parse_numeric(tau, ctx.prec_bits()));
        }
    }
    if (l1.empty() || l2.empty())
        throw ParseError("need --tau or both --lambda1 and --lambda2");
    try {
        return Lattice::from_exact(parse_exact(l1), parse_exact(l2));
    } catch (const ParseError&) {
        return Lattice::from_numeric(parse_numeric(l1, ctx.prec_bits()),
                                     parse_numeric(l2, ctx.prec_bits()));
    }
}

// Lattice file schema: {"tau": <exact-or-float>, "prec": 50} or
// {"lambda1": ..., "lambda2": ...}; precision in the file is a default only.
Lattice lattice_from_json_file(const std::string& path, int& prec, const PrecisionContext& ctx) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j = json::parse(in);
    if (j.contains("prec")) prec = j["prec"].get<int>();
    auto as_text = [](const json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    if (j.contains("tau")) return lattice_from_flags(as_text(j["tau"]), "", "", ctx);
    if (j.contains("lambda1") && j.contains("lambda2"))
        return lattice_from_flags("", as_text(j["lambda1"]), as_text(j["lambda2"]), ctx);
    throw ParseError("lattice file needs tau or lambda1/lambda2");
}

json torus_verdict_json(const TorusVerdict& v) {
    json j;
    j["verdict"] = v.verdict == Verdict::Descends ? "descends"
                   : v.verdict == Verdict::WeakOnly ? "weak"
                                                    : "none";
    j["r_real"] = v.r_real;
    j["r_imag"] = v.r_imag;
    j["s"] = v.s;
    j["dim_g"] = v.dim_g;
    json target = json::array();
    for (std::size_t k = 0; k < v.target_gm; ++k) target.push_back("Gm");
    for (std::size_t k = 0; k < v.target_s; ++k) target.push_back("S");
    j["target"] = target;
    j["isogeny_class_only"] = true;
    return j;
}

json elliptic_verdict_json(const EllipticVerdict& v) {
    json j;
    j["verdict"] = v.definable ? "descends" : "none";
    j["definable"] = v.definable;
    json w;
    if (std::holds_alternative<RationalRealPart>(v.witness)) {
        w["type"] = "RationalRealPart";
        w["value"] = std::get<RationalRealPart>(v.witness).value.get_str();
    } else if (std::holds_alternative<CMWitness>(v.witness)) {
        w["type"] = "CM";
        w["discriminant"] = std::get<CMWitness>(v.witness).discriminant.get_str();
    } else if (std::holds_alternative<NormWitness>(v.witness)) {
        const auto& nw = std::get<NormWitness>(v.witness);
        w["type"] = "NormWitness";
        w["d1"] = nw.d1.get_str();
        w["d2"] = nw.d2.get_str();
        w["norm"] = nw.norm.get_str();
    } else {
        w["type"] = "NoWitness";
    }
    j["witness"] = w;
    if (v.cm_discriminant) j["cm_discriminant"] = v.cm_discriminant->get_str();
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"exact and high-precision descent laboratory"};
    app.require_subcommand(1);

    // ---- lattice info -------------------------------------------------
    auto* lattice_cmd = app.add_subcommand("lattice", "lattice computations");
    lattice_cmd->require_subcommand(1);
    auto* info = lattice_cmd->add_subcommand("info", "invariants g2, g3, j, quasi-periods");
    CommonOpts info_o;
    std::string info_tau, info_l1, info_l2, info_file;
    info->add_option("--tau", info_tau, "tau for Z + tau Z (exact or numeric)");
    info->add_option("--lambda1", info_l1, "first basis vector");
    info->add_option("--lambda2", info_l2, "second basis vector");
    info->add_option("--file", info_file, "lattice JSON: {\"tau\":..., \"prec\":50}");
    add_common(info, info_o);
    info->callback([&] {
        PrecisionContext probe_ctx(info_o.prec, info_o.guard);
        Lattice L = info_file.empty()
                        ? lattice_from_flags(info_tau, info_l1, info_l2, probe_ctx)
                        : lattice_from_json_file(info_file, info_o.prec, probe_ctx);
        PrecisionContext ctx(info_o.prec, info_o.guard);
        WeierstrassEngine eng(L, ctx);
        auto inv = eng.invariants();
        int digits = info_o.prec;
        json j;
        j["g2"] = complex_json(inv.g2, digits);
        j["g3"] = complex_json(inv.g3, digits);
        j["discriminant"] = complex_json(inv.discriminant, digits);
        j["j"] = complex_json(inv.j, digits);
        j["eta1"] = complex_json(inv.eta1, digits);
        j["eta2"] = complex_json(inv.eta2, digits);
        j["legendre_residual"] = num(eng.legendre_residual(), 12);
        j["precision"] = precision_echo(ctx);
        emit(j, info_o);
    });

    // ---- descent ------------------------------------------------------
    auto* descent_cmd = app.add_subcommand("descent", "descent verdicts");
    descent_cmd->require_subcommand(1);

    auto* torus = descent_cmd->add_subcommand("torus", "rank verdict for exponential tuples");
    CommonOpts torus_o;
    std::vector<std::string> torus_b;
    torus->add_option("--b", torus_b, "exponent (repeatable, or comma-separated)")->required();
    add_common(torus, torus_o);
    torus->callback([&] {
        TorusSpec spec;
        for (const auto& chunk : torus_b) {
            std::stringstream ss(chunk);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) spec.exponents.push_back(parse_exact(item));
        }
        json j = torus_verdict_json(torus_verdict(spec));
        emit(j, torus_o);
    });

    auto* ell = descent_cmd->add_subcommand("elliptic", "real-model criterion for E_tau");
    CommonOpts ell_o;
    std::string ell_tau;
    ell->add_option("--tau", ell_tau, "exact tau")->required();
    add_common(ell, ell_o);
    ell->callback([&] {
        json j = elliptic_verdict_json(elliptic_real_model(parse_exact(ell_tau)));
        emit(j, ell_o);
    });

    auto* hom = descent_cmd->add_subcommand("hom", "isogeny module between E_tau and E_tau2");
    CommonOpts hom_o;
    std::string hom_tau, hom_tau2;
    long hom_bound = 32;
    hom->add_option("--tau", hom_tau, "exact tau")->required();
    hom->add_option("--tau2", hom_tau2, "exact tau2 (default: conjugate curve)");
    hom->add_option("--mindeg-bound", hom_bound, "combination bound for rank-2 min degree");
    add_common(hom, hom_o);
    hom->callback([&] {
        ExactComplex t1 = normalize_to_upper(parse_exact(hom_tau));
        ExactComplex t2 = hom_tau2.empty() ? conjugate_curve_tau(t1)
                                           : normalize_to_upper(parse_exact(hom_tau2));
        IsogenyModule mod = hom_module(t1, t2, hom_bound);
        json j;
        j["rank"] = mod.rank();
        json gens = json::array();
        for (const auto& g : mod.generators)
            gens.push_back({g[0].get_str(), g[1].get_str(), g[2].get_str(), g[3].get_str()});
        j["generators"] = gens;
        if (mod.min_degree) j["min_degree"] = mod.min_degree->get_str();
        emit(j, hom_o);
    });

    // ---- ext kernel -----------------------------------------------------
    auto* ext_cmd = app.add_subcommand("ext", "extensions of elliptic curves");
    ext_cmd->require_subcommand(1);
    auto* kern = ext_cmd->add_subcommand("kernel", "exponential-kernel generators and residuals");
    CommonOpts kern_o;
    std::string kern_kind, kern_param, kern_tau;
    kern->add_option("--kind", kern_kind, "ga or gm")->required()->check(CLI::IsMember({"ga", "gm"}));
    kern->add_option("--param", kern_param, "t (ga) or omega (gm)")->required();
    kern->add_option("--tau", kern_tau, "lattice tau")->required();
    add_common(kern, kern_o);
    kern->callback([&] {
        PrecisionContext ctx(kern_o.prec, kern_o.guard);
        Lattice L = lattice_from_flags(kern_tau, "", "", ctx);
        mpfr_prec_t p = ctx.prec_bits();
        BigComplex param = parse_numeric(kern_param, p);
        auto spec = kern_kind == "ga" ? ExtensionSpec::ga(param, L) : ExtensionSpec::gm(param, L);
        auto gens = kernel_generators(spec, ctx);
        // deterministic sample point away from poles and from omega
        BigComplex z2 = BigFloat(0.37, p) * L.lambda1(p) + BigFloat(0.29, p) * L.lambda2(p);
        BigComplex z1(BigFloat(0.23, p), BigFloat(0.31, p));
        BigFloat residual = periodicity_residual(spec, z1, z2, ctx);
        json j;
        j["kind"] = kern_kind;
        json g = json::array();
        for (const auto& [x, lam] : gens)
            g.push_back({{"z1", complex_json(x, kern_o.prec)}, {"z2", complex_json(lam, kern_o.prec)}});
        j["generators"] = g;
        j["periodicity_residual"] = num(residual, 12);
        j["precision"] = precision_echo(ctx);
        emit(j, kern_o);
    });

    // ---- relations ------------------------------------------------------
    auto* rel_cmd = app.add_subcommand("relations", "integer-relation probes");
    rel_cmd->require_subcommand(1);

    auto* find = rel_cmd->add_subcommand("find", "find one relation among values");
    CommonOpts find_o;
    std::string find_file, find_tau;
    long find_H = 100;
    find->add_option("--file", find_file, "JSON list of decimal strings or expressions")->required();
    find->add_option("--maxcoeff", find_H, "coefficient bound H");
    find->add_option("--tau", find_tau, "lattice binding for lambda1/lambda2/eta1/eta2");
    add_common(find, find_o);
    find->callback([&] {
        PrecisionContext ctx(find_o.prec, find_o.guard);
        mpfr_prec_t p = ctx.prec_bits();
        std::ifstream in(find_file);
        if (!in) throw ParseError("cannot open " + find_file);
        json values_json = json::parse(in);
        std::map<std::string, BigComplex> bindings;
        if (!find_tau.empty()) {
            Lattice L = lattice_from_flags(find_tau, "", "", ctx);
            WeierstrassEngine eng(L, ctx);
            bindings.emplace("lambda1", L.lambda1(p));
            bindings.emplace("lambda2", L.lambda2(p));
            bindings.emplace("eta1", eng.eta1());
            bindings.emplace("eta2", eng.eta2());
        }
        RelationQuery q;
        q.ctx = ctx;
        q.max_coeff = find_H;
        for (const auto& v : values_json)
            q.values.push_back(parse_numeric(v.get<std::string>(), p, bindings));
        RelationResult r = find_integer_relation(q);
        json j;
        if (r.found) {
            j["status"] = "found";
            json c = json::array();
            for (const auto& z : r.coefficients) c.push_back(z.get_str());
            j["coefficients"] = c;
            j["residual"] = num(r.residual, 12);
        } else {
            j["status"] = "none_up_to";
        }
        j["max_coeff"] = r.max_coeff;
        j["precision"] = precision_echo(ctx);
        emit(j, find_o);
    });

    auto* masser = rel_cmd->add_subcommand("masser", "period/quasi-period dimension probe");
    CommonOpts masser_o;
    std::string masser_tau, masser_l1, masser_l2;
    long masser_H = 100;
    bool masser_norm = false;
    masser->add_option("--tau", masser_tau, "lattice tau");
    masser->add_option("--lambda1", masser_l1, "first basis vector");
    masser->add_option("--lambda2", masser_l2, "second basis vector");
    masser->add_option("--maxcoeff", masser_H, "coefficient bound H");
    masser->add_flag("--normalize-g2", masser_norm,
                     "rescale the lattice so that g2 = 4 before probing");
    add_common(masser, masser_o);
    masser->callback([&] {
        PrecisionContext ctx(masser_o.prec, masser_o.guard);
        Lattice L = lattice_from_flags(masser_tau, masser_l1, masser_l2, ctx);
        if (masser_norm) {
            mpfr_prec_t p = ctx.prec_bits();
            auto inv = invariants(L, ctx);
            BigComplex scale = (inv.g2 / BigComplex(4, p)).root(4);
            L = Lattice::from_numeric(scale * L.lambda1(p), scale * L.lambda2(p));
        }
        MasserReport rep = masser_probe(L, ctx, masser_H);
        json j;
        auto rels = [](const std::vector<ZVec>& rs) {
            json out = json::array();
            for (const auto& r : rs) {
                json row = json::array();
                for (const auto& z : r) row.push_back(z.get_str());
                out.push_back(row);
            }
            return out;
        };
        j["relations_full"] = rels(rep.relations_full);
        j["relations_periods"] = rels(rep.relations_periods);
        j["dim_full"] = rep.dim_full;
        j["dim_periods"] = rep.dim_periods;
        j["masser_consistent"] = rep.masser_consistent;
        j["status"] = rep.relations_periods.empty() ? "none_up_to" : "found";
        j["max_coeff"] = rep.max_coeff;
        j["precision"] = precision_echo(ctx);
        emit(j, masser_o);
    });

    // ---- weil -----------------------------------------------------------
    auto* weil_cmd = app.add_subcommand("weil", "restriction of scalars");
    weil_cmd->require_subcommand(1);
    auto* restrict_cmd = weil_cmd->add_subcommand("restrict", "factor-wise restriction profile");
    CommonOpts weil_o;
    std::string weil_obj;
    restrict_cmd->add_option("--object", weil_obj, "object literal, e.g. \"E(tau=i) x Gm\"")
        ->required();
    add_common(restrict_cmd, weil_o);
    restrict_cmd->callback([&] {
        GroupObject g = parse_group_object(weil_obj);
        json j;
        json factors = json::array();
        for (const auto& fr : weil_restrict_object(g)) {
            json f;
            f["factor"] = fr.factor;
            f["simple"] = fr.profile.simple;
            f["restriction"] = fr.profile.structure;
            if (!fr.profile.endomorphisms.empty()) f["endomorphisms"] = fr.profile.endomorphisms;
            factors.push_back(f);
        }
        j["factors"] = factors;
        emit(j, weil_o);
    });

    // ---- groupcat ---------------------------------------------------------
    auto* grp_cmd = app.add_subcommand("groupcat", "formal group-category calculus");
    grp_cmd->require_subcommand(1);

    auto* delta = grp_cmd->add_subcommand("delta", "delta invariant");
    CommonOpts delta_o;
    std::string delta_obj;
    delta->add_option("--object", delta_obj)->required();
    add_common(delta, delta_o);
    delta->callback([&] {
        emit(json{{"delta", delta_invariant(parse_group_object(delta_obj))}}, delta_o);
    });

    auto* quot = grp_cmd->add_subcommand("quotient", "maximal plurisimple quotient");
    CommonOpts quot_o;
    std::string quot_obj;
    quot->add_option("--object", quot_obj)->required();
    add_common(quot, quot_o);
    quot->callback([&] {
        emit(json{{"quotient", max_plurisimple_quotient(parse_group_object(quot_obj)).str()}},
             quot_o);
    });

    auto* conj = grp_cmd->add_subcommand("conj", "conjugate object");
    CommonOpts conj_o;
    std::string conj_obj;
    conj->add_option("--object", conj_obj)->required();
    add_common(conj, conj_o);
    conj->callback([&] {
        emit(json{{"conjugate", conj_object(parse_group_object(conj_obj)).str()}}, conj_o);
    });

    auto* check = grp_cmd->add_subcommand("check", "inherited-descent hypothesis check");
    CommonOpts check_o;
    std::string check_obj, check_kernel;
    check->add_option("--object", check_obj)->required();
    check->add_option("--kernel", check_kernel, "comma-separated factor indices")->required();
    add_common(check, check_o);
    check->callback([&] {
        std::vector<std::size_t> idx;
        std::stringstream ss(check_kernel);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) idx.push_back(static_cast<std::size_t>(std::stoul(item)));
        auto r = inherited_hypothesis_check(parse_group_object(check_obj), idx);
        std::string s = r == HypothesisCheck::StrongOK ? "strong_ok"
                        : r == HypothesisCheck::WeakOK ? "weak_ok"
                                                       : "fails";
        emit(json{{"result", s}}, check_o);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
