#pragma once

#include <array>
#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "oim/rng.hpp"
#include "oim/symbols.hpp"

namespace oim {

using Rat = mpq_class;
using Vec2 = std::array<Rat, 2>; // coordinates in the kernel basis (b1, b2)
using Vec3 = std::array<Rat, 3>;
using Vec5 = std::array<Rat, 5>;

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GeneralPositionError : GeometryError {
    using GeometryError::GeometryError;
};

enum class Lemma1ErrorKind { SumNonzero, DependentTriple, NonpositiveMu };

struct Lemma1PreconditionError : GeometryError {
    Lemma1ErrorKind kind;
    Lemma1PreconditionError(Lemma1ErrorKind k, const std::string& msg)
        : GeometryError(msg), kind(k) {}
};

inline Rat dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Rat dot5(const Vec5& a, const Vec5& b) {
    Rat s = 0;
    for (int i = 0; i < 5; ++i) s += a[i] * b[i];
    return s;
}

inline Rat det3(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// Solve [a; b; c] x = r exactly (Cramer); throws on singular system.
inline Vec3 solve3(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& r) {
    Rat d = det3(a, b, c);
    if (d == 0) throw GeometryError("solve3: singular system");
    Vec3 x;
    x[0] = det3({r[0], a[1], a[2]}, {r[1], b[1], b[2]}, {r[2], c[1], c[2]}) / d;
    x[1] = det3({a[0], r[0], a[2]}, {b[0], r[1], b[2]}, {c[0], r[2], c[2]}) / d;
    x[2] = det3({a[0], a[1], r[0]}, {b[0], b[1], r[1]}, {c[0], c[1], r[2]}) / d;
    return x;
}

inline Rat cross2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

// Strict counter-clockwise angular order starting just above direction
// (1, 0); exact, no trigonometry.
inline bool angle_less(const Vec2& a, const Vec2& b) {
    auto half = [](const Vec2& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return cross2(a, b) > 0;
}

// Five oriented planes through the origin in general position; m is the
// degree of the central codim-2 configuration.
struct PlaneQuintuple {
    std::array<Vec3, 5> normals;
    long m = 0;
};

struct KernelBasis {
    Vec5 b1, b2;
};

// Exact basis of the 2-dimensional left kernel of the 5x3 matrix with rows
// u_1..u_5. Requires full general position (every 3 normals independent).
inline KernelBasis left_kernel_U(const PlaneQuintuple& q) {
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            for (int k = j + 1; k < 5; ++k)
                if (det3(q.normals[i], q.normals[j], q.normals[k]) == 0)
                    throw GeneralPositionError("normals " + std::to_string(i + 1) + "," +
                                               std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                               " are linearly dependent");
    // u_i (i = 4, 5) as combinations of u_1, u_2, u_3: solve with columns u_1..u_3
    auto express = [&](const Vec3& u) {
        Vec3 c0 = {q.normals[0][0], q.normals[1][0], q.normals[2][0]};
        Vec3 c1 = {q.normals[0][1], q.normals[1][1], q.normals[2][1]};
        Vec3 c2 = {q.normals[0][2], q.normals[1][2], q.normals[2][2]};
        // rows of the system are the coordinate equations
        return solve3({c0[0], c0[1], c0[2]}, {c1[0], c1[1], c1[2]}, {c2[0], c2[1], c2[2]},
                      {u[0], u[1], u[2]});
    };
    Vec3 c3 = express(q.normals[3]);
    Vec3 c4 = express(q.normals[4]);
    KernelBasis kb;
    kb.b1 = {-c3[0], -c3[1], -c3[2], 1, 0};
    kb.b2 = {-c4[0], -c4[1], -c4[2], 0, 1};
    return kb;
}

// Everything derived from one quintuple that the diagram operations share.
struct QuintupleFrame {
    PlaneQuintuple q;
    KernelBasis basis;
    // lambda_k as a functional on kernel coordinates: f_k(x, y) = fx[k] x + fy[k] y
    std::array<Rat, 5> fx, fy;
    std::array<Vec2, 5> line_dir;      // positive half of l_k (lambda_k > 0)
    std::array<Vec2, 5> perp_dir;      // one half of l_k^perp (the other is its negative)
    std::array<int, 5> perp_p;         // count p at perp_dir[k]

    Rat functional(int k, const Vec2& v) const { return fx[k] * v[0] + fy[k] * v[1]; }

    Vec5 embed(const Vec2& v) const {
        Vec5 out;
        for (int i = 0; i < 5; ++i) out[i] = v[0] * basis.b1[i] + v[1] * basis.b2[i];
        return out;
    }
};

inline QuintupleFrame make_frame(const PlaneQuintuple& q) {
    QuintupleFrame fr;
    fr.q = q;
    fr.basis = left_kernel_U(q);
    for (int k = 0; k < 5; ++k) {
        fr.fx[k] = fr.basis.b1[k];
        fr.fy[k] = fr.basis.b2[k];
        if (fr.fx[k] == 0 && fr.fy[k] == 0)
            throw GeneralPositionError("projection of e_" + std::to_string(k + 1) +
                                       " onto U is zero");
    }
    // Gram matrix of (b1, b2) in the standard 5-space inner product
    Rat g11 = dot5(fr.basis.b1, fr.basis.b1);
    Rat g12 = dot5(fr.basis.b1, fr.basis.b2);
    Rat g22 = dot5(fr.basis.b2, fr.basis.b2);
    Rat det = g11 * g22 - g12 * g12;
    for (int k = 0; k < 5; ++k) {
        // l_k = span(proj_U e_k): solve G c = (b1[k], b2[k]);  f_k(c) > 0 on this half
        fr.line_dir[k] = {(g22 * fr.fx[k] - g12 * fr.fy[k]) / det,
                          (g11 * fr.fy[k] - g12 * fr.fx[k]) / det};
        // l_k^perp = {lambda_k = 0}
        fr.perp_dir[k] = {-fr.fy[k], fr.fx[k]};
        int p = 0;
        for (int j = 0; j < 5; ++j) {
            if (j == k) continue;
            Rat v = fr.functional(j, fr.perp_dir[k]);
            if (v == 0)
                throw GeneralPositionError("lambda_" + std::to_string(j + 1) +
                                           " vanishes on l_" + std::to_string(k + 1) + "^perp");
            if (v > 0) ++p;
        }
        fr.perp_p[k] = p;
    }
    return fr;
}

struct HalfLineProfile {
    int k;    // 1-based line index
    Vec2 dir; // direction of this half of l_k^perp in kernel coordinates
    int p;    // positive lambda_j count, j != k
};

// The ten half-lines of the l_k^perp with their sign counts; the two halves
// of each l_k^perp carry p and 4-p.
inline std::vector<HalfLineProfile> halfline_profiles(const PlaneQuintuple& q) {
    QuintupleFrame fr = make_frame(q);
    std::vector<HalfLineProfile> out;
    for (int k = 0; k < 5; ++k) {
        out.push_back({k + 1, fr.perp_dir[k], fr.perp_p[k]});
        out.push_back({k + 1, {-fr.perp_dir[k][0], -fr.perp_dir[k][1]}, 4 - fr.perp_p[k]});
    }
    return out;
}

struct Crossing {
    int k;            // 1-based line index of l_k
    Vec2 dir;         // half-line direction in kernel coordinates
    long degree;      // m on the lambda_k > 0 half, m-1 on the other
    int p_ccw;        // quadruple-point count on the counter-clockwise side
    int p_cw;         // = 4 - p_ccw
    int coorientation_side; // +1: ccw side positive, -1: cw side, 0: none (2,2)
};

struct PerpHalf {
    int k;
    Vec2 dir;
    int p;
    bool arrow_ccw; // arrow on l_k^perp points to the lambda_k > 0 side
};

struct BifurcationDiagram {
    long m = 0;
    std::vector<Crossing> crossings;   // 10, sorted counter-clockwise
    std::vector<PerpHalf> perp_halves; // 10, sorted counter-clockwise
};

inline BifurcationDiagram bifurcation_diagram(const PlaneQuintuple& q) {
    QuintupleFrame fr = make_frame(q);
    BifurcationDiagram d;
    d.m = q.m;
    for (int k = 0; k < 5; ++k) {
        for (int sign : {+1, -1}) {
            Crossing c;
            c.k = k + 1;
            c.dir = {sign * fr.line_dir[k][0], sign * fr.line_dir[k][1]};
            c.degree = sign > 0 ? q.m : q.m - 1;
            // side counts are copied from the corresponding halves of l_k^perp:
            // the ccw side of this half of l_k contains the perp half w with
            // cross(dir, w) > 0
            Rat cr = cross2(c.dir, fr.perp_dir[k]);
            if (cr == 0) throw GeneralPositionError("degenerate l_k / l_k^perp pair");
            c.p_ccw = cr > 0 ? fr.perp_p[k] : 4 - fr.perp_p[k];
            c.p_cw = 4 - c.p_ccw;
            c.coorientation_side = c.p_ccw > c.p_cw ? +1 : (c.p_ccw < c.p_cw ? -1 : 0);
            d.crossings.push_back(std::move(c));
        }
        for (int sign : {+1, -1}) {
            PerpHalf h;
            h.k = k + 1;
            h.dir = {sign * fr.perp_dir[k][0], sign * fr.perp_dir[k][1]};
            h.p = sign > 0 ? fr.perp_p[k] : 4 - fr.perp_p[k];
            // lambda_k just ccw of this half: evaluate on the rotated direction
            Vec2 ccw = {-h.dir[1], h.dir[0]};
            Rat v = fr.functional(k, ccw);
            if (v == 0) throw GeneralPositionError("degenerate arrow sense");
            h.arrow_ccw = v > 0;
            d.perp_halves.push_back(std::move(h));
        }
    }
    auto lt = [](const auto& a, const auto& b) {
        if (angle_less(a.dir, b.dir)) return true;
        if (angle_less(b.dir, a.dir)) return false;
        throw GeneralPositionError("coincident half-line directions");
    };
    std::sort(d.crossings.begin(), d.crossings.end(), lt);
    std::sort(d.perp_halves.begin(), d.perp_halves.end(), lt);
    return d;
}

// Walk the circle once counter-clockwise; each crossing of l_k enters one
// side and contributes the extended symbol Q^{p_entered} at the half-line's
// degree. Identifications Q^0 = -Q^4, Q^1 = -Q^3 are folded in by the sum;
// the (2,2) crossings keep sign +1.
inline std::pair<FormalSum, bool> qq_relation_check(const BifurcationDiagram& d) {
    FormalSum sum;
    for (const Crossing& c : d.crossings)
        sum.add(1, Symbol{Family::Q, c.p_ccw, static_cast<int>(c.degree)});
    // verdict: modulo the subgroup {2 Q^2_d}, the sum is +-(Q^2_m - Q^2_{m-1})
    bool ok = true;
    bool saw_m = false, saw_m1 = false;
    for (const auto& [s, coeff] : sum.terms) {
        if (s.super != 2) {
            ok = false; // any surviving Q^3 / Q^4 term is a failure
            continue;
        }
        mpz_class r = coeff % 2;
        if (r != 0) {
            if (s.degree == d.m)
                saw_m = true;
            else if (s.degree == d.m - 1)
                saw_m1 = true;
            else
                ok = false;
        }
    }
    return {sum, ok && saw_m && saw_m1};
}

// Bounded cell of four half-spaces {x . v_i <= mu_i}: the four vertices if
// the cell is a simplex, nullopt if degenerate or unbounded.
inline std::optional<std::array<Vec3, 4>> simplex_cell(const std::array<Vec3, 4>& v,
                                                       const std::array<Rat, 4>& mu) {
    std::array<Vec3, 4> verts;
    for (int i = 0; i < 4; ++i) {
        // vertex omitting plane i
        std::array<int, 3> idx;
        int t = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) idx[t++] = j;
        if (det3(v[idx[0]], v[idx[1]], v[idx[2]]) == 0) return std::nullopt;
        verts[i] = solve3(v[idx[0]], v[idx[1]], v[idx[2]], {mu[idx[0]], mu[idx[1]], mu[idx[2]]});
    }
    // affine independence of the four vertices
    Vec3 e1 = {verts[1][0] - verts[0][0], verts[1][1] - verts[0][1], verts[1][2] - verts[0][2]};
    Vec3 e2 = {verts[2][0] - verts[0][0], verts[2][1] - verts[0][1], verts[2][2] - verts[0][2]};
    Vec3 e3 = {verts[3][0] - verts[0][0], verts[3][1] - verts[0][1], verts[3][2] - verts[0][2]};
    if (det3(e1, e2, e3) == 0) return std::nullopt;
    // the cell is the simplex iff each vertex strictly satisfies its omitted
    // inequality; otherwise the intersection is unbounded
    for (int i = 0; i < 4; ++i)
        if (dot3(verts[i], v[i]) >= mu[i]) return std::nullopt;
    return verts;
}

// Independent check of a half-line profile: construct the simplex of the
// four planes x . u_j = lambda_j (j != k) explicitly and count the faces
// with the simplex on their non-preferred side.
inline int face_count_oracle(const PlaneQuintuple& q, int k, const Vec5& sample) {
    if (k < 1 || k > 5) throw std::invalid_argument("face_count_oracle: k out of range");
    Vec3 lin = {0, 0, 0};
    for (int j = 0; j < 5; ++j)
        for (int c = 0; c < 3; ++c) lin[c] += sample[j] * q.normals[j][c];
    if (lin != Vec3{0, 0, 0}) throw GeometryError("face_count_oracle: sample not in U");
    std::array<Vec3, 4> planes;
    std::array<Rat, 4> rhs;
    int t = 0;
    for (int j = 0; j < 5; ++j) {
        if (j == k - 1) continue;
        planes[t] = q.normals[j];
        rhs[t] = sample[j];
        ++t;
    }
    // vertex i = intersection of the three planes other than i; simplex side
    // of plane i is the side where vertex i lies
    std::array<Vec3, 4> verts;
    for (int i = 0; i < 4; ++i) {
        std::array<int, 3> idx;
        int u = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) idx[u++] = j;
        verts[i] = solve3(planes[idx[0]], planes[idx[1]], planes[idx[2]],
                          {rhs[idx[0]], rhs[idx[1]], rhs[idx[2]]});
    }
    Vec3 e1 = {verts[1][0] - verts[0][0], verts[1][1] - verts[0][1], verts[1][2] - verts[0][2]};
    Vec3 e2 = {verts[2][0] - verts[0][0], verts[2][1] - verts[0][1], verts[2][2] - verts[0][2]};
    Vec3 e3 = {verts[3][0] - verts[0][0], verts[3][1] - verts[0][1], verts[3][2] - verts[0][2]};
    if (det3(e1, e2, e3) == 0)
        throw GeometryError("face_count_oracle: degenerate simplex at sample");
    int p = 0;
    for (int i = 0; i < 4; ++i) {
        Rat side = dot3(verts[i], planes[i]) - rhs[i];
        if (side == 0) throw GeometryError("face_count_oracle: vertex on its opposite plane");
        // non-preferred side of plane i is x . u_i < lambda_i
        if (side < 0) ++p;
    }
    return p;
}

// Origin lies in the interior of the simplex cut out by x . v_k = mu_k when
// sum v_k = 0, every 3 of the v_k are independent and all mu_k > 0.
inline bool lemma1_interior_check(const std::array<Vec3, 4>& v, const std::array<Rat, 4>& mu) {
    Vec3 sum = {v[0][0] + v[1][0] + v[2][0] + v[3][0], v[0][1] + v[1][1] + v[2][1] + v[3][1],
                v[0][2] + v[1][2] + v[2][2] + v[3][2]};
    if (sum != Vec3{0, 0, 0})
        throw Lemma1PreconditionError(Lemma1ErrorKind::SumNonzero, "v_1 + ... + v_4 != 0");
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (det3(v[i], v[j], v[k]) == 0)
                    throw Lemma1PreconditionError(Lemma1ErrorKind::DependentTriple,
                                                  "a triple of the v_k is dependent");
    for (int i = 0; i < 4; ++i)
        if (mu[i] <= 0)
            throw Lemma1PreconditionError(Lemma1ErrorKind::NonpositiveMu, "mu_k must be positive");
    auto cell = simplex_cell(v, mu);
    if (!cell) return false;
    // origin strictly inside every half-space (mu > 0 gives this) and inside
    // the vertex hull: barycentric coordinates all positive
    const std::array<Vec3, 4>& verts = *cell;
    Vec3 e1 = {verts[1][0] - verts[0][0], verts[1][1] - verts[0][1], verts[1][2] - verts[0][2]};
    Vec3 e2 = {verts[2][0] - verts[0][0], verts[2][1] - verts[0][1], verts[2][2] - verts[0][2]};
    Vec3 e3 = {verts[3][0] - verts[0][0], verts[3][1] - verts[0][1], verts[3][2] - verts[0][2]};
    Vec3 rhs = {-verts[0][0], -verts[0][1], -verts[0][2]};
    // solve c1 e1 + c2 e2 + c3 e3 = -v0 (columns e1, e2, e3)
    Vec3 r0 = {e1[0], e2[0], e3[0]};
    Vec3 r1 = {e1[1], e2[1], e3[1]};
    Vec3 r2 = {e1[2], e2[2], e3[2]};
    Vec3 c = solve3(r0, r1, r2, rhs);
    Rat c0 = 1 - c[0] - c[1] - c[2];
    return c0 > 0 && c[0] > 0 && c[1] > 0 && c[2] > 0;
}

// Canonical combinatorial class of the cyclic sequence of l_k^perp halves
// (labels, sign counts, arrow senses) modulo relabeling of the five lines
// and the dihedral symmetry of the circle.
struct DiagramClass {
    std::string encoding;
    bool operator==(const DiagramClass&) const = default;
    auto operator<=>(const DiagramClass&) const = default;
};

inline DiagramClass classify_diagram(const BifurcationDiagram& d) {
    const std::vector<PerpHalf>& h = d.perp_halves;
    std::size_t n = h.size();
    std::string best;
    for (int refl = 0; refl < 2; ++refl) {
        for (std::size_t rot = 0; rot < n; ++rot) {
            // candidate cyclic reading; reflection reverses order and senses
            std::array<int, 6> relabel;
            relabel.fill(0);
            int next_label = 0;
            std::string enc;
            for (std::size_t i = 0; i < n; ++i) {
                const PerpHalf& x =
                    refl == 0 ? h[(rot + i) % n] : h[(rot + n - i) % n];
                if (relabel[x.k] == 0) relabel[x.k] = ++next_label;
                bool ccw = refl == 0 ? x.arrow_ccw : !x.arrow_ccw;
                enc += static_cast<char>('a' + relabel[x.k] - 1);
                enc += static_cast<char>('0' + x.p);
                enc += ccw ? '>' : '<';
            }
            if (best.empty() || enc < best) best = enc;
        }
    }
    return DiagramClass{best};
}

struct QQTrialReport {
    bool structure_ok = false; // 10 crossings, degree tags, complementary pairs, 5/5 arrows
    bool oracle_ok = false;    // face_count_oracle agrees on all 20 half-line profiles
    bool relation_ok = false;  // reduced crossing sum is +-(Q^2_m - Q^2_{m-1}) mod 2-torsion
    FormalSum sum;
    std::string detail;
    bool ok() const { return structure_ok && oracle_ok && relation_ok; }
};

// Full per-quintuple verification: structural diagram invariants, oracle
// agreement and the quintuple-point relation.
inline QQTrialReport qq_trial_check(const PlaneQuintuple& q) {
    QQTrialReport rep;
    QuintupleFrame fr = make_frame(q);
    BifurcationDiagram d = bifurcation_diagram(q);

    rep.structure_ok = d.crossings.size() == 10 && d.perp_halves.size() == 10;
    for (int k = 1; k <= 5 && rep.structure_ok; ++k) {
        long tags = 0;
        for (const Crossing& c : d.crossings)
            if (c.k == k) tags += (c.degree == q.m) ? 1 : (c.degree == q.m - 1 ? 10 : 100);
        if (tags != 11) {
            rep.structure_ok = false;
            rep.detail = "degree tags of l_" + std::to_string(k) + " are not {m, m-1}";
        }
    }
    int ccw_arrows = 0;
    for (const Crossing& c : d.crossings)
        if (c.p_ccw + c.p_cw != 4) {
            rep.structure_ok = false;
            rep.detail = "non-complementary p pair";
        }
    for (const PerpHalf& h : d.perp_halves)
        if (h.arrow_ccw) ++ccw_arrows;
    if (ccw_arrows != 5) {
        rep.structure_ok = false;
        rep.detail = "arrow senses are not five/five";
    }

    rep.oracle_ok = true;
    for (const HalfLineProfile& pr : halfline_profiles(q)) {
        int got = face_count_oracle(q, pr.k, fr.embed(pr.dir));
        if (got != pr.p) {
            rep.oracle_ok = false;
            rep.detail = "oracle mismatch on l_" + std::to_string(pr.k) + "^perp: sign count " +
                         std::to_string(pr.p) + " vs simplex count " + std::to_string(got);
        }
    }

    auto [sum, verdict] = qq_relation_check(d);
    rep.sum = std::move(sum);
    rep.relation_ok = verdict;
    if (!verdict && rep.detail.empty()) rep.detail = "crossing sum did not reduce to the relation";
    return rep;
}

// Deterministic rejection sampling of valid quintuples with rational
// normals bounded by `bound`.
inline PlaneQuintuple random_quintuple(std::uint64_t seed, long bound, long m = 0) {
    if (bound < 1) throw std::invalid_argument("random_quintuple: bound must be >= 1");
    SplitMix64 rng(seed);
    auto rat = [&]() {
        Rat r(rng.range(-bound, bound), rng.range(1, bound));
        r.canonicalize();
        return r;
    };
    for (int attempt = 0; attempt < 10000; ++attempt) {
        PlaneQuintuple q;
        q.m = m;
        for (auto& u : q.normals) u = {rat(), rat(), rat()};
        try {
            QuintupleFrame fr = make_frame(q);
            // strict angular order needs pairwise non-parallel lines within
            // each of the two families
            bool ok = true;
            for (int i = 0; i < 5 && ok; ++i)
                for (int j = i + 1; j < 5 && ok; ++j)
                    if (cross2(fr.line_dir[i], fr.line_dir[j]) == 0 ||
                        cross2(fr.perp_dir[i], fr.perp_dir[j]) == 0)
                        ok = false;
            if (ok) return q;
        } catch (const GeometryError&) {
        }
    }
    throw GeometryError("random_quintuple: rejection budget exhausted");
}

} // namespace oim
