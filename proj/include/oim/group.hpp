#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "oim/matrix.hpp"

namespace oim {

// Element of a GroupSpec: free coordinates first, then one coordinate per
// torsion factor (reduced into [0, d_i)).
struct GroupElement {
    std::vector<mpz_class> coords;
    bool operator==(const GroupElement&) const = default;
    auto operator<=>(const GroupElement&) const = default;
};

// Finitely generated abelian group in invariant-factor form:
// Z^free_rank + Z/d_1 + ... + Z/d_k  with  d_1 | d_2 | ... , d_i >= 2.
struct GroupSpec {
    std::size_t free_rank = 0;
    std::vector<mpz_class> torsion;

    bool operator==(const GroupSpec&) const = default;

    std::size_t gen_count() const { return free_rank + torsion.size(); }
    bool is_finite() const { return free_rank == 0; }
    bool is_trivial() const { return gen_count() == 0; }

    mpz_class order() const {
        if (!is_finite()) throw std::invalid_argument("order: infinite group");
        mpz_class o = 1;
        for (const auto& d : torsion) o *= d;
        return o;
    }

    GroupElement zero() const { return GroupElement{std::vector<mpz_class>(gen_count())}; }

    GroupElement reduce(GroupElement e) const {
        if (e.coords.size() != gen_count()) throw std::invalid_argument("reduce: coordinate count");
        for (std::size_t i = 0; i < torsion.size(); ++i) {
            mpz_class& c = e.coords[free_rank + i];
            mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), torsion[i].get_mpz_t());
        }
        return e;
    }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        GroupElement e = a;
        for (std::size_t i = 0; i < e.coords.size(); ++i) e.coords[i] += b.coords[i];
        return reduce(std::move(e));
    }

    GroupElement neg(const GroupElement& a) const {
        GroupElement e = a;
        for (auto& c : e.coords) c = -c;
        return reduce(std::move(e));
    }

    GroupElement smul(const mpz_class& k, const GroupElement& a) const {
        GroupElement e = a;
        for (auto& c : e.coords) c *= k;
        return reduce(std::move(e));
    }

    bool is_zero(const GroupElement& a) const {
        GroupElement e = reduce(a);
        return std::all_of(e.coords.begin(), e.coords.end(),
                           [](const mpz_class& c) { return c == 0; });
    }

    // All elements of a finite group, lexicographic in coordinates.
    std::vector<GroupElement> elements() const {
        if (!is_finite()) throw std::invalid_argument("elements: infinite group");
        std::vector<GroupElement> out;
        GroupElement cur = zero();
        for (;;) {
            out.push_back(cur);
            std::size_t i = torsion.size();
            while (i > 0) {
                --i;
                cur.coords[i] += 1;
                if (cur.coords[i] < torsion[i]) break;
                cur.coords[i] = 0;
                if (i == 0) return out;
            }
            if (torsion.empty()) return out;
        }
    }
};

// Normalize a multiset of cyclic orders (>= 2) into an invariant-factor chain.
inline std::vector<mpz_class> invariant_factors_from_cyclic(std::vector<mpz_class> orders) {
    std::map<mpz_class, std::vector<unsigned long>> prime_exps;
    for (mpz_class o : orders) {
        if (o < 2) throw std::invalid_argument("cyclic order < 2");
        mpz_class p = 2;
        while (o > 1) {
            if (mpz_probab_prime_p(p.get_mpz_t(), 30) != 0) {
                unsigned long e = 0;
                while (o % p == 0) {
                    o /= p;
                    ++e;
                }
                if (e > 0) prime_exps[p].push_back(e);
            }
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
            if (p * p > o && o > 1) {
                prime_exps[o].push_back(1);
                break;
            }
        }
    }
    std::size_t len = 0;
    for (auto& [p, exps] : prime_exps) {
        std::sort(exps.begin(), exps.end());
        len = std::max(len, exps.size());
    }
    std::vector<mpz_class> factors(len, 1);
    for (auto& [p, exps] : prime_exps) {
        // right-align so larger exponents land in later (larger) factors
        std::size_t off = len - exps.size();
        for (std::size_t i = 0; i < exps.size(); ++i) {
            mpz_class pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), exps[i]);
            factors[off + i] *= pe;
        }
    }
    std::erase_if(factors, [](const mpz_class& d) { return d == 1; });
    return factors;
}

struct QuotientResult {
    GroupSpec group;
    std::vector<GroupElement> gen_images; // image of each of the n generators
};

// Z^n / rowspan(relations), via SNF.
inline QuotientResult presentation_quotient(std::size_t n, const IntMatrix& relations) {
    if (relations.cols() != n)
        throw std::invalid_argument("presentation_quotient: relation column count != n");
    SnfResult snf = smith_normal_form(relations);
    std::size_t lim = std::min(relations.rows(), n);
    // diagonal entries: units, torsion factors, zeros (in chain order)
    std::vector<std::size_t> torsion_idx, free_idx;
    std::vector<mpz_class> torsion;
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class d = (i < lim) ? snf.d(i, i) : mpz_class(0);
        if (d == 0)
            free_idx.push_back(i);
        else if (d >= 2) {
            torsion_idx.push_back(i);
            torsion.push_back(d);
        }
    }
    QuotientResult res;
    res.group = GroupSpec{free_idx.size(), torsion};
    for (std::size_t g = 0; g < n; ++g) {
        // coordinates of e_g in the new basis: row g of Q
        GroupElement e;
        e.coords.reserve(res.group.gen_count());
        for (std::size_t i : free_idx) e.coords.push_back(snf.q(g, i));
        for (std::size_t i : torsion_idx) e.coords.push_back(snf.q(g, i));
        res.gen_images.push_back(res.group.reduce(std::move(e)));
    }
    return res;
}

// B = {x : 2x = 0}: one Z/2 per even torsion factor.
inline GroupSpec torsion_two_subgroup(const GroupSpec& g) {
    GroupSpec b;
    for (const auto& d : g.torsion)
        if (d % 2 == 0) b.torsion.emplace_back(2);
    return b;
}

struct Homomorphism {
    GroupSpec source;
    GroupSpec target;
    std::vector<GroupElement> images; // one per source generator (free first)

    bool valid() const {
        if (images.size() != source.gen_count()) return false;
        for (std::size_t i = 0; i < source.torsion.size(); ++i)
            if (!target.is_zero(target.smul(source.torsion[i], images[source.free_rank + i])))
                return false;
        return true;
    }

    GroupElement apply(const GroupElement& x) const {
        GroupElement acc = target.zero();
        for (std::size_t i = 0; i < images.size(); ++i)
            acc = target.add(acc, target.smul(x.coords[i], images[i]));
        return acc;
    }
};

// Hom(S, T) by the factor-wise formula: Hom(Z,T) = T, Hom(Z/d,T) = T[d].
inline GroupSpec hom_group(const GroupSpec& s, const GroupSpec& t) {
    std::size_t free_rank = s.free_rank * t.free_rank;
    std::vector<mpz_class> cyclic;
    for (std::size_t i = 0; i < s.free_rank; ++i)
        for (const auto& e : t.torsion) cyclic.push_back(e);
    for (const auto& d : s.torsion)
        for (const auto& e : t.torsion) {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), e.get_mpz_t());
            if (g >= 2) cyclic.push_back(g);
        }
    return GroupSpec{free_rank, invariant_factors_from_cyclic(std::move(cyclic))};
}

inline std::vector<Homomorphism> enumerate_homs(const GroupSpec& s, const GroupSpec& t) {
    if (!t.is_finite()) throw std::invalid_argument("enumerate_homs: target must be finite");
    std::vector<GroupElement> all = t.elements();
    // admissible images per source generator
    std::vector<std::vector<GroupElement>> choices;
    for (std::size_t i = 0; i < s.free_rank; ++i) choices.push_back(all);
    for (const auto& d : s.torsion) {
        std::vector<GroupElement> killed;
        for (const auto& e : all)
            if (t.is_zero(t.smul(d, e))) killed.push_back(e);
        choices.push_back(std::move(killed));
    }
    std::vector<Homomorphism> out;
    std::vector<GroupElement> cur(choices.size(), t.zero());
    std::vector<std::size_t> idx(choices.size(), 0);
    for (;;) {
        for (std::size_t i = 0; i < choices.size(); ++i) cur[i] = choices[i][idx[i]];
        out.push_back(Homomorphism{s, t, cur});
        std::size_t i = choices.size();
        while (i > 0) {
            --i;
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
            if (i == 0) return out;
        }
        if (choices.empty()) return out;
    }
}

} // namespace oim
