#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oim/group.hpp"
#include "oim/matrix.hpp"
#include "oim/symbols.hpp"

namespace oim {

enum class RelationFamily {
    EH,
    TT,
    ET,
    HT,
    TQ,
    QQ,
    TorsionH1,
    TorsionQ2,
};

inline std::string relation_family_name(RelationFamily f) {
    switch (f) {
        case RelationFamily::EH: return "EH";
        case RelationFamily::TT: return "TT";
        case RelationFamily::ET: return "ET";
        case RelationFamily::HT: return "HT";
        case RelationFamily::TQ: return "TQ";
        case RelationFamily::QQ: return "QQ";
        case RelationFamily::TorsionH1: return "TORSION-H1";
        case RelationFamily::TorsionQ2: return "TORSION-Q2";
    }
    return "?";
}

struct Provenance {
    RelationFamily family;
    int a; // superscript parameter; 0 where the family has none
    int m;
};

struct RelationInstance {
    FormalSum sum;
    std::vector<Provenance> provenance; // all (family, a, m) producing this sum
};

namespace detail {

// Instantiates one family formula over the extended alphabet; terms are
// canonicalized as they are added.
inline FormalSum family_sum(RelationFamily f, int a, int m) {
    FormalSum s;
    auto E = [&](int sup, int deg) { return Symbol{Family::E, sup, deg}; };
    auto H = [&](int sup, int deg) { return Symbol{Family::H, sup, deg}; };
    auto T = [&](int sup, int deg) { return Symbol{Family::T, sup, deg}; };
    auto Q = [&](int sup, int deg) { return Symbol{Family::Q, sup, deg}; };
    switch (f) {
        case RelationFamily::EH: // 0 = E^a_m - H^a_m
            s.add(1, E(a, m));
            s.add(-1, H(a, m));
            break;
        case RelationFamily::TT: // 0 = T^a_m - T^{3-a}_m
            s.add(1, T(a, m));
            s.add(-1, T(3 - a, m));
            break;
        case RelationFamily::ET: // 0 = T^a_m - T^{a+1}_m - E^a_{m-1} + E^a_m
            s.add(1, T(a, m));
            s.add(-1, T(a + 1, m));
            s.add(-1, E(a, m - 1));
            s.add(1, E(a, m));
            break;
        case RelationFamily::HT: // 0 = -T^{a+1}_m + T^a_m - H^a_{m-1} + H^a_m
            s.add(-1, T(a + 1, m));
            s.add(1, T(a, m));
            s.add(-1, H(a, m - 1));
            s.add(1, H(a, m));
            break;
        case RelationFamily::TQ: // 0 = Q^a_m - Q^{a+1}_m - T^a_{m-1} + T^a_m
            s.add(1, Q(a, m));
            s.add(-1, Q(a + 1, m));
            s.add(-1, T(a, m - 1));
            s.add(1, T(a, m));
            break;
        case RelationFamily::QQ: // Q^2_m = Q^2_{m-1}
            s.add(1, Q(2, m));
            s.add(-1, Q(2, m - 1));
            break;
        case RelationFamily::TorsionH1: // 2 H^1_m = 0
            s.add(2, H(1, m));
            break;
        case RelationFamily::TorsionQ2: // 2 Q^2_m = 0
            s.add(2, Q(2, m));
            break;
    }
    return s;
}

inline void push_instance(std::vector<RelationInstance>& out,
                          std::map<std::map<Symbol, mpz_class>, std::size_t>& seen,
                          const DegreeWindow& w, FormalSum sum, Provenance prov) {
    if (sum.empty() || !w.contains(sum)) return;
    auto it = seen.find(sum.terms);
    if (it != seen.end()) {
        out[it->second].provenance.push_back(prov);
        return;
    }
    seen.emplace(sum.terms, out.size());
    out.push_back(RelationInstance{std::move(sum), {prov}});
}

} // namespace detail

// Every instantiation of the six raw families plus the 2-torsion constraints,
// over extended superscript ranges, admitted when all canonicalized symbols
// lie in the window.
inline std::vector<RelationInstance> raw_relation_instances(
    const DegreeWindow& w, bool include_qq = true) {
    std::vector<RelationInstance> out;
    std::map<std::map<Symbol, mpz_class>, std::size_t> seen;
    int lo = -w.M - 2, hi = w.M + 2; // relation degrees never reach further
    auto emit = [&](RelationFamily f, int a, int m) {
        detail::push_instance(out, seen, w, detail::family_sum(f, a, m), Provenance{f, a, m});
    };
    for (int m = lo; m <= hi; ++m) {
        for (int a = 0; a <= 2; ++a) emit(RelationFamily::EH, a, m);
        for (int a = 0; a <= 3; ++a) emit(RelationFamily::TT, a, m);
        for (int a = 0; a <= 2; ++a) emit(RelationFamily::ET, a, m);
        for (int a = 0; a <= 2; ++a) emit(RelationFamily::HT, a, m);
        for (int a = 0; a <= 3; ++a) emit(RelationFamily::TQ, a, m);
        if (include_qq) emit(RelationFamily::QQ, 0, m);
        emit(RelationFamily::TorsionH1, 0, m);
        emit(RelationFamily::TorsionQ2, 0, m);
    }
    return out;
}

// The simplified relation set, including the 2-torsion content of the
// periodic H^1 / Q^2 clauses.
inline std::vector<RelationInstance> simplified_relation_instances(const DegreeWindow& w) {
    std::vector<RelationInstance> out;
    std::map<std::map<Symbol, mpz_class>, std::size_t> seen;
    int lo = -w.M - 2, hi = w.M + 2;
    auto emit = [&](RelationFamily tag, int a, int m,
                    std::vector<std::pair<int, Symbol>> terms) {
        FormalSum s;
        for (const auto& [c, sym] : terms) s.add(c, sym);
        detail::push_instance(out, seen, w, std::move(s), Provenance{tag, a, m});
    };
    auto E = [](int sup, int deg) { return Symbol{Family::E, sup, deg}; };
    auto H = [](int sup, int deg) { return Symbol{Family::H, sup, deg}; };
    auto T = [](int sup, int deg) { return Symbol{Family::T, sup, deg}; };
    auto Q = [](int sup, int deg) { return Symbol{Family::Q, sup, deg}; };
    for (int m = lo; m <= hi; ++m) {
        // E^2_m = -E^0_m = H^2_m,  E^1_m = H^1_m
        emit(RelationFamily::EH, 2, m, {{1, E(2, m)}, {-1, H(2, m)}});
        emit(RelationFamily::EH, 0, m, {{1, E(0, m)}, {1, H(2, m)}});
        emit(RelationFamily::EH, 1, m, {{1, E(1, m)}, {-1, H(1, m)}});
        // T^0_m = T^3_m,  T^1_m = T^2_m
        emit(RelationFamily::TT, 0, m, {{1, T(0, m)}, {-1, T(3, m)}});
        emit(RelationFamily::TT, 1, m, {{1, T(1, m)}, {-1, T(2, m)}});
        // H^1_m = H^1_{m-1} in B
        emit(RelationFamily::HT, 1, m, {{1, H(1, m)}, {-1, H(1, m - 1)}});
        emit(RelationFamily::TorsionH1, 0, m, {{2, H(1, m)}});
        // Q^2_m = Q^2_{m-1} in B
        emit(RelationFamily::QQ, 0, m, {{1, Q(2, m)}, {-1, Q(2, m - 1)}});
        emit(RelationFamily::TorsionQ2, 0, m, {{2, Q(2, m)}});
        // H^2_m - H^2_{m-1} = T^3_m - T^2_m
        emit(RelationFamily::HT, 2, m,
             {{1, H(2, m)}, {-1, H(2, m - 1)}, {-1, T(3, m)}, {1, T(2, m)}});
        // Q^4_m - Q^3_m = T^3_m - T^3_{m-1},  Q^3_m - Q^2_m = T^2_m - T^2_{m-1}
        emit(RelationFamily::TQ, 3, m,
             {{1, Q(4, m)}, {-1, Q(3, m)}, {-1, T(3, m)}, {1, T(3, m - 1)}});
        emit(RelationFamily::TQ, 2, m,
             {{1, Q(3, m)}, {-1, Q(2, m)}, {-1, T(2, m)}, {1, T(2, m - 1)}});
    }
    return out;
}

// Relation matrix: one row per instance, columns indexed by the sorted
// in-window symbol list.
inline IntMatrix relation_matrix(const std::vector<RelationInstance>& instances,
                                 const std::vector<Symbol>& columns) {
    std::map<Symbol, std::size_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i) index.emplace(columns[i], i);
    IntMatrix m(instances.size(), columns.size());
    for (std::size_t r = 0; r < instances.size(); ++r)
        for (const auto& [s, c] : instances[r].sum.terms) m(r, index.at(s)) = c;
    return m;
}

// True iff the raw and simplified instance sets span the same subgroup of
// the free module on in-window symbols.
inline bool spans_equivalent(const DegreeWindow& w, bool include_qq = true) {
    std::vector<Symbol> cols = enumerate_symbols(w);
    return row_spans_equal(relation_matrix(raw_relation_instances(w, include_qq), cols),
                           relation_matrix(simplified_relation_instances(w), cols));
}

struct UniversalGroupResult {
    GroupSpec group;
    std::vector<Symbol> symbols; // column order
    std::map<Symbol, GroupElement> symbol_image;
    std::vector<Symbol> named_generators; // T^2_m, T^3_m (in window), H^2_0, H^1_0, Q^2_0
};

inline std::vector<Symbol> named_generator_symbols(const DegreeWindow& w) {
    std::vector<Symbol> out;
    for (int m = -w.M; m <= w.M; ++m) out.push_back(Symbol{Family::T, 2, m});
    for (int m = -w.M; m <= w.M; ++m) out.push_back(Symbol{Family::T, 3, m});
    out.push_back(Symbol{Family::H, 2, 0});
    out.push_back(Symbol{Family::H, 1, 0});
    out.push_back(Symbol{Family::Q, 2, 0});
    return out;
}

// Quotient of the free abelian group on in-window symbols by the raw
// relation instances.
inline UniversalGroupResult universal_group(const DegreeWindow& w) {
    UniversalGroupResult res;
    res.symbols = enumerate_symbols(w);
    std::vector<RelationInstance> rel = raw_relation_instances(w);
    QuotientResult q = presentation_quotient(res.symbols.size(), relation_matrix(rel, res.symbols));
    res.group = q.group;
    for (std::size_t i = 0; i < res.symbols.size(); ++i)
        res.symbol_image.emplace(res.symbols[i], q.gen_images[i]);
    res.named_generators = named_generator_symbols(w);
    return res;
}

// g_U on a single symbol as an integer combination of the named generators
// {t^2_k, t^3_k, h^2_0, h^1_0, q^2_0}, via the closed formulas.
inline FormalSum eval_gU_closed(const Symbol& s, const DegreeWindow& w) {
    if (!is_canonical(s)) throw std::invalid_argument("eval_gU_closed: non-canonical symbol");
    if (!w.contains(s))
        throw std::invalid_argument("eval_gU_closed: symbol out of window: " + symbol_to_string(s));
    auto H = [](int sup, int deg) { return Symbol{Family::H, sup, deg}; };
    auto T = [](int sup, int deg) { return Symbol{Family::T, sup, deg}; };
    auto Q = [](int sup, int deg) { return Symbol{Family::Q, sup, deg}; };
    int m = s.degree;
    FormalSum r;
    auto h2 = [&](int deg) {
        FormalSum v;
        v.add(1, H(2, 0));
        for (int k = 1; k <= deg; ++k) {
            v.add(1, T(3, k));
            v.add(-1, T(2, k));
        }
        for (int k = deg + 1; k <= 0; ++k) {
            v.add(-1, T(3, k));
            v.add(1, T(2, k));
        }
        return v;
    };
    switch (s.family) {
        case Family::E:
            if (s.super == 1)
                r.add(1, H(1, 0)); // E^1_m = H^1_m = H^1_0
            else
                r.add_sum(s.super == 0 ? -1 : 1, h2(m)); // E^0_m = -H^2_m, E^2_m = H^2_m
            break;
        case Family::H:
            if (s.super == 1)
                r.add(1, H(1, 0));
            else
                r = h2(m);
            break;
        case Family::T:
            // T^0 = T^3, T^1 = T^2; T^2, T^3 are generators
            r.add(1, T(s.super == 0 ? 3 : (s.super == 1 ? 2 : s.super), m));
            break;
        case Family::Q:
            r.add(1, Q(2, 0));
            if (s.super >= 3) { // Q^3_m = Q^2_m + T^2_m - T^2_{m-1}
                r.add(1, T(2, m));
                r.add(-1, T(2, m - 1));
            }
            if (s.super == 4) { // Q^4_m = Q^3_m + T^3_m - T^3_{m-1}
                r.add(1, T(3, m));
                r.add(-1, T(3, m - 1));
            }
            break;
    }
    return r;
}

// Zero test in the presentation Z^X + <h^1_0, q^2_0 | 2h^1_0 = 2q^2_0 = 0>:
// free named-generator coefficients must vanish, torsion ones must be even.
inline bool gU_sum_is_zero(const FormalSum& v) {
    for (const auto& [s, c] : v.terms) {
        bool torsion = (s.family == Family::H && s.super == 1) ||
                       (s.family == Family::Q && s.super == 2);
        if (torsion ? (c % 2 != 0) : (c != 0)) return false;
    }
    return true;
}

struct CrosscheckReport {
    std::size_t symbols_checked = 0;
    std::size_t instances_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Two independent computations of g_U must agree: the quotient projection
// (via SNF) and the closed formulas, on every in-window symbol; and every
// raw relation instance must evaluate to zero under the closed formulas.
inline CrosscheckReport crosscheck_gU(
    const DegreeWindow& w,
    const std::function<FormalSum(const Symbol&, const DegreeWindow&)>& eval = eval_gU_closed) {
    CrosscheckReport rep;
    UniversalGroupResult ug = universal_group(w);
    for (const Symbol& s : ug.symbols) {
        FormalSum closed = eval(s, w);
        GroupElement via_closed = ug.group.zero();
        for (const auto& [g, c] : closed.terms)
            via_closed = ug.group.add(via_closed, ug.group.smul(c, ug.symbol_image.at(g)));
        if (via_closed != ug.symbol_image.at(s))
            rep.violations.push_back("symbol " + symbol_to_string(s) +
                                     ": closed formula disagrees with quotient projection");
        ++rep.symbols_checked;
    }
    for (const RelationInstance& inst : raw_relation_instances(w)) {
        FormalSum acc;
        for (const auto& [s, c] : inst.sum.terms) acc.add_sum(c, eval(s, w));
        if (!gU_sum_is_zero(acc)) {
            const Provenance& p = inst.provenance.front();
            rep.violations.push_back("instance " + relation_family_name(p.family) + " a=" +
                                     std::to_string(p.a) + " m=" + std::to_string(p.m) +
                                     " does not vanish under closed formulas");
        }
        ++rep.instances_checked;
    }
    return rep;
}

// A total function on in-window C_n with values in a coefficient group.
struct InvariantTable {
    std::size_t n;
    GroupSpec coeff;
    std::map<Configuration, GroupElement> values;
};

// All order-one tables phi . g_U for phi in Hom(G_U^(w), G). Bijective with
// the Hom set.
inline std::vector<InvariantTable> delta1_tables(const GroupSpec& g, const DegreeWindow& w) {
    if (!g.is_finite()) throw std::invalid_argument("delta1_tables: coefficient group must be finite");
    UniversalGroupResult ug = universal_group(w);
    std::vector<InvariantTable> out;
    for (const Homomorphism& phi : enumerate_homs(ug.group, g)) {
        InvariantTable t{1, g, {}};
        for (const Symbol& s : ug.symbols)
            t.values.emplace(make_configuration({s}), phi.apply(ug.symbol_image.at(s)));
        out.push_back(std::move(t));
    }
    return out;
}

// The all-Q indicator used by the section-e membership check: 1 iff every
// symbol in the configuration is of type Q.
inline int section_e_g(const Configuration& c) {
    for (const Symbol& s : c.symbols)
        if (s.family != Family::Q) return 0;
    return 1;
}

// Raw single-symbol relation instances crossed with all contexts of size n-1.
inline std::vector<std::pair<RelationInstance, Configuration>> deltaN_relation_instances(
    std::size_t n, const DegreeWindow& w) {
    std::vector<RelationInstance> rel = raw_relation_instances(w);
    std::vector<std::pair<RelationInstance, Configuration>> out;
    if (n == 1) {
        for (const auto& r : rel) out.emplace_back(r, Configuration{});
        return out;
    }
    for (const Configuration& ctx : enumerate_configurations(n - 1, w))
        for (const auto& r : rel) out.emplace_back(r, ctx);
    return out;
}

struct MembershipReport {
    std::size_t instances_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Evaluates every relation instance over the given contexts; empty violation
// list iff f lies in Delta_n(G) restricted to the window.
inline MembershipReport check_membership(
    const std::function<std::optional<GroupElement>(const Configuration&)>& f, const GroupSpec& g,
    const DegreeWindow& w, const std::vector<Configuration>& contexts) {
    MembershipReport rep;
    std::vector<RelationInstance> rel = raw_relation_instances(w);
    for (const Configuration& ctx : contexts) {
        for (const RelationInstance& inst : rel) {
            GroupElement acc = g.zero();
            bool missing = false;
            for (const auto& [s, c] : inst.sum.terms) {
                std::vector<Symbol> syms = ctx.symbols;
                syms.push_back(s);
                std::optional<GroupElement> v = f(make_configuration(std::move(syms)));
                if (!v) {
                    missing = true;
                    break;
                }
                acc = g.add(acc, g.smul(c, *v));
            }
            ++rep.instances_checked;
            if (missing) {
                rep.violations.push_back("missing configuration value (context size " +
                                         std::to_string(ctx.size()) + ")");
                continue;
            }
            if (!g.is_zero(acc)) {
                const Provenance& p = inst.provenance.front();
                std::string ctx_str;
                for (const Symbol& s : ctx.symbols) ctx_str += " " + symbol_to_string(s);
                rep.violations.push_back("instance " + relation_family_name(p.family) + " a=" +
                                         std::to_string(p.a) + " m=" + std::to_string(p.m) +
                                         " violated in context [" + ctx_str + " ]");
            }
        }
    }
    return rep;
}

inline MembershipReport check_membership_table(const InvariantTable& t, const DegreeWindow& w,
                                               const std::vector<Configuration>& contexts) {
    return check_membership(
        [&t](const Configuration& c) -> std::optional<GroupElement> {
            auto it = t.values.find(c);
            if (it == t.values.end()) return std::nullopt;
            return it->second;
        },
        t.coeff, w, contexts);
}

// Contexts for order n: all multisets of size n-1 (n = 1 gives the single
// empty context).
inline std::vector<Configuration> full_contexts(std::size_t n, const DegreeWindow& w) {
    if (n == 1) return {Configuration{}};
    return enumerate_configurations(n - 1, w);
}

} // namespace oim
