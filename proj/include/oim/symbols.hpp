#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oim {

enum class Family : int { E = 0, H = 1, T = 2, Q = 3 };

inline char family_letter(Family f) {
    switch (f) {
        case Family::E: return 'E';
        case Family::H: return 'H';
        case Family::T: return 'T';
        case Family::Q: return 'Q';
    }
    throw std::invalid_argument("bad family");
}

// One CE expression R^a_m. Total order (family, super, degree) is the
// fixed order used for configurations, matrix columns and golden files.
struct Symbol {
    Family family;
    int super;
    int degree;

    auto operator<=>(const Symbol&) const = default;
};

// Canonical alphabet: E^0..E^2, H^1,H^2, T^0..T^3, Q^2..Q^4.
inline bool is_canonical(const Symbol& s) {
    switch (s.family) {
        case Family::E: return s.super >= 0 && s.super <= 2;
        case Family::H: return s.super == 1 || s.super == 2;
        case Family::T: return s.super >= 0 && s.super <= 3;
        case Family::Q: return s.super >= 2 && s.super <= 4;
    }
    return false;
}

// Extended alphabet additionally admits H^0, Q^0, Q^1.
inline bool is_extended(const Symbol& s) {
    switch (s.family) {
        case Family::E: return s.super >= 0 && s.super <= 2;
        case Family::H: return s.super >= 0 && s.super <= 2;
        case Family::T: return s.super >= 0 && s.super <= 3;
        case Family::Q: return s.super >= 0 && s.super <= 4;
    }
    return false;
}

struct SignedSymbol {
    int sign; // +1 or -1
    Symbol symbol;
};

// Identifications H^0 = -H^2, Q^0 = -Q^4, Q^1 = -Q^3.
inline SignedSymbol canonicalize_symbol(const Symbol& s) {
    if (!is_extended(s))
        throw std::invalid_argument("canonicalize_symbol: superscript outside extended alphabet");
    if (s.family == Family::H && s.super == 0) return {-1, Symbol{Family::H, 2, s.degree}};
    if (s.family == Family::Q && s.super <= 1) return {-1, Symbol{Family::Q, 4 - s.super, s.degree}};
    return {+1, s};
}

inline std::string symbol_to_string(const Symbol& s) {
    return std::string(1, family_letter(s.family)) + "^" + std::to_string(s.super) + "_" +
           std::to_string(s.degree);
}

inline Symbol parse_symbol(const std::string& text) {
    auto caret = text.find('^');
    auto under = text.find('_', caret == std::string::npos ? 0 : caret);
    if (text.empty() || caret != 1 || under == std::string::npos)
        throw std::invalid_argument("parse_symbol: expected e.g. \"E^2_-1\", got \"" + text + "\"");
    Family fam;
    switch (text[0]) {
        case 'E': fam = Family::E; break;
        case 'H': fam = Family::H; break;
        case 'T': fam = Family::T; break;
        case 'Q': fam = Family::Q; break;
        default: throw std::invalid_argument("parse_symbol: unknown family in \"" + text + "\"");
    }
    Symbol s{fam, std::stoi(text.substr(2, under - 2)), std::stoi(text.substr(under + 1))};
    if (!is_extended(s)) throw std::invalid_argument("parse_symbol: superscript out of range");
    return s;
}

// Finite integer-linear combination of canonical symbols. No zero
// coefficients are stored.
struct FormalSum {
    std::map<Symbol, mpz_class> terms;

    bool operator==(const FormalSum&) const = default;
    bool operator<(const FormalSum& o) const { return terms < o.terms; }

    bool empty() const { return terms.empty(); }

    mpz_class coeff(const Symbol& s) const {
        auto it = terms.find(s);
        return it == terms.end() ? mpz_class(0) : it->second;
    }

    // Accepts extended symbols; folds identification signs into the coefficient.
    void add(const mpz_class& c, const Symbol& s) {
        SignedSymbol cs = canonicalize_symbol(s);
        mpz_class& slot = terms[cs.symbol];
        slot += c * cs.sign;
        if (slot == 0) terms.erase(cs.symbol);
    }

    void add_sum(const mpz_class& c, const FormalSum& o) {
        for (const auto& [s, k] : o.terms) add(c * k, s);
    }

    FormalSum negated() const {
        FormalSum r;
        for (const auto& [s, k] : terms) r.terms.emplace(s, -k);
        return r;
    }
};

inline FormalSum sum_normalize(const std::vector<std::pair<mpz_class, Symbol>>& pairs) {
    FormalSum r;
    for (const auto& [c, s] : pairs) r.add(c, s);
    return r;
}

// Unordered multiset of canonical symbols, kept sorted.
struct Configuration {
    std::vector<Symbol> symbols;

    bool operator==(const Configuration&) const = default;
    auto operator<=>(const Configuration&) const = default;

    std::size_t size() const { return symbols.size(); }
};

inline Configuration make_configuration(std::vector<Symbol> symbols) {
    if (symbols.empty()) throw std::invalid_argument("make_configuration: empty");
    for (const auto& s : symbols)
        if (!is_canonical(s))
            throw std::invalid_argument("make_configuration: non-canonical symbol " +
                                        symbol_to_string(s));
    std::sort(symbols.begin(), symbols.end());
    return Configuration{std::move(symbols)};
}

// Truncation window: E/H/T degrees in [-M, M], Q degrees in [-M+1, M].
struct DegreeWindow {
    int M;

    explicit DegreeWindow(int m) : M(m) {
        if (m < 1) throw std::invalid_argument("DegreeWindow: M must be >= 1");
    }

    int min_degree(Family f) const { return f == Family::Q ? -M + 1 : -M; }
    int max_degree(Family) const { return M; }

    bool contains(const Symbol& s) const {
        return s.degree >= min_degree(s.family) && s.degree <= max_degree(s.family);
    }

    bool contains(const FormalSum& sum) const {
        return std::all_of(sum.terms.begin(), sum.terms.end(),
                           [this](const auto& t) { return contains(t.first); });
    }
};

inline std::vector<Symbol> enumerate_symbols(const DegreeWindow& w) {
    static const std::vector<std::pair<Family, std::vector<int>>> alphabet = {
        {Family::E, {0, 1, 2}},
        {Family::H, {1, 2}},
        {Family::T, {0, 1, 2, 3}},
        {Family::Q, {2, 3, 4}},
    };
    std::vector<Symbol> out;
    for (const auto& [fam, supers] : alphabet)
        for (int a : supers)
            for (int m = w.min_degree(fam); m <= w.max_degree(fam); ++m)
                out.push_back(Symbol{fam, a, m});
    std::sort(out.begin(), out.end());
    return out;
}

// All size-n multisets of in-window symbols, each exactly once.
inline std::vector<Configuration> enumerate_configurations(std::size_t n, const DegreeWindow& w) {
    if (n < 1) throw std::invalid_argument("enumerate_configurations: n must be >= 1");
    std::vector<Symbol> syms = enumerate_symbols(w);
    std::vector<Configuration> out;
    std::vector<Symbol> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (cur.size() == n) {
            out.push_back(Configuration{cur});
            return;
        }
        for (std::size_t i = start; i < syms.size(); ++i) {
            cur.push_back(syms[i]);
            self(self, i);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace oim
