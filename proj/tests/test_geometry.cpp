#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "oim/geometry.hpp"

using namespace oim;

namespace {

const PlaneQuintuple kExample{{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{1, 1, 1},
                               Vec3{1, 2, 3}},
                              0};

Vec3 apply3(const std::array<Vec3, 3>& rows, const Vec3& v) {
    return {dot3(rows[0], v), dot3(rows[1], v), dot3(rows[2], v)};
}

} // namespace

TEST_CASE("left kernel of the example quintuple") {
    KernelBasis kb = left_kernel_U(kExample);
    REQUIRE(kb.b1 == Vec5{-1, -1, -1, 1, 0});
    REQUIRE(kb.b2 == Vec5{-1, -2, -3, 0, 1});
    // both basis vectors annihilate the rows
    for (const Vec5& b : {kb.b1, kb.b2}) {
        Vec3 acc = {0, 0, 0};
        for (int i = 0; i < 5; ++i)
            for (int c = 0; c < 3; ++c) acc[c] += b[i] * kExample.normals[i][c];
        REQUIRE(acc == Vec3{0, 0, 0});
    }
}

TEST_CASE("dependent normals are rejected") {
    PlaneQuintuple bad = kExample;
    bad.normals[3] = {1, 1, 0}; // = u_1 + u_2
    REQUIRE_THROWS_AS(left_kernel_U(bad), GeneralPositionError);
}

TEST_CASE("half-line sign counts of the example") {
    auto profiles = halfline_profiles(kExample);
    REQUIRE(profiles.size() == 10);
    std::map<int, std::multiset<int>> per_line;
    for (const auto& pr : profiles) per_line[pr.k].insert(pr.p);
    REQUIRE(per_line[1] == std::multiset<int>{1, 3});
    REQUIRE(per_line[2] == std::multiset<int>{2, 2});
    REQUIRE(per_line[3] == std::multiset<int>{1, 3});
    REQUIRE(per_line[4] == std::multiset<int>{1, 3});
    REQUIRE(per_line[5] == std::multiset<int>{1, 3});
    // the two halves of each perpendicular are opposite and complementary
    for (int k = 1; k <= 5; ++k) {
        std::vector<const HalfLineProfile*> halves;
        for (const auto& pr : profiles)
            if (pr.k == k) halves.push_back(&pr);
        REQUIRE(halves.size() == 2);
        REQUIRE(halves[0]->dir[0] == -halves[1]->dir[0]);
        REQUIRE(halves[0]->dir[1] == -halves[1]->dir[1]);
        REQUIRE(halves[0]->p + halves[1]->p == 4);
    }
}

TEST_CASE("face count oracle agrees with sign counts") {
    QuintupleFrame fr = make_frame(kExample);
    for (const auto& pr : halfline_profiles(kExample))
        REQUIRE(face_count_oracle(kExample, pr.k, fr.embed(pr.dir)) == pr.p);
    REQUIRE_THROWS_AS(face_count_oracle(kExample, 0, Vec5{}), std::invalid_argument);
    REQUIRE_THROWS_AS(face_count_oracle(kExample, 1, Vec5{1, 0, 0, 0, 0}), GeometryError);
}

TEST_CASE("diagram structure of the example") {
    BifurcationDiagram d = bifurcation_diagram(kExample);
    REQUIRE(d.crossings.size() == 10);
    REQUIRE(d.perp_halves.size() == 10);
    // strictly increasing angular order
    for (std::size_t i = 0; i + 1 < d.crossings.size(); ++i)
        REQUIRE(angle_less(d.crossings[i].dir, d.crossings[i + 1].dir));
    // each line contributes one crossing of degree m and one of m-1
    for (int k = 1; k <= 5; ++k) {
        std::multiset<long> degs;
        for (const auto& c : d.crossings)
            if (c.k == k) degs.insert(c.degree);
        REQUIRE(degs == std::multiset<long>{-1, 0});
    }
    // five arrows each way on the perpendiculars
    int ccw = 0;
    for (const auto& h : d.perp_halves)
        if (h.arrow_ccw) ++ccw;
    REQUIRE(ccw == 5);
}

TEST_CASE("crossing sum reduces to the degree-step relation") {
    auto [sum, ok] = qq_relation_check(bifurcation_diagram(kExample));
    REQUIRE(ok);
    for (const auto& [s, c] : sum.terms) {
        if (s.super != 2) FAIL("surviving non-Q^2 term " + symbol_to_string(s));
        REQUIRE((s.degree == 0 || s.degree == -1));
        REQUIRE(c % 2 != 0);
    }
}

TEST_CASE("full trial check on the example and random quintuples") {
    QQTrialReport rep = qq_trial_check(kExample);
    CAPTURE(rep.detail);
    REQUIRE(rep.ok());
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 99ULL, 12345ULL}) {
        PlaneQuintuple q = random_quintuple(seed, 10);
        QQTrialReport r = qq_trial_check(q);
        CAPTURE(seed, r.detail);
        REQUIRE(r.ok());
    }
}

TEST_CASE("verdict is invariant under per-plane positive rescaling") {
    DiagramClass base = classify_diagram(bifurcation_diagram(kExample));
    PlaneQuintuple scaled = kExample;
    std::array<Rat, 5> factors = {Rat(2), Rat(1, 3), Rat(5), Rat(7, 2), Rat(1)};
    for (int i = 0; i < 5; ++i)
        for (int c = 0; c < 3; ++c) scaled.normals[i][c] *= factors[i];
    REQUIRE(qq_trial_check(scaled).ok());
    REQUIRE(classify_diagram(bifurcation_diagram(scaled)) == base);
}

TEST_CASE("class is invariant under relabeling the planes") {
    DiagramClass base = classify_diagram(bifurcation_diagram(kExample));
    std::array<int, 5> perm = {2, 4, 0, 3, 1};
    PlaneQuintuple p = kExample;
    for (int i = 0; i < 5; ++i) p.normals[i] = kExample.normals[perm[i]];
    REQUIRE(classify_diagram(bifurcation_diagram(p)) == base);
    REQUIRE(qq_trial_check(p).ok());
}

TEST_CASE("class is invariant under an ambient linear change of coordinates") {
    // any invertible map fixes the left kernel, hence the whole diagram
    std::array<Vec3, 3> a = {Vec3{2, 1, 0}, Vec3{0, 1, 1}, Vec3{1, 0, 3}};
    PlaneQuintuple t = kExample;
    for (int i = 0; i < 5; ++i) t.normals[i] = apply3(a, kExample.normals[i]);
    BifurcationDiagram d0 = bifurcation_diagram(kExample);
    BifurcationDiagram d1 = bifurcation_diagram(t);
    REQUIRE(classify_diagram(d1) == classify_diagram(d0));
    for (std::size_t i = 0; i < d0.perp_halves.size(); ++i) {
        REQUIRE(d0.perp_halves[i].k == d1.perp_halves[i].k);
        REQUIRE(d0.perp_halves[i].p == d1.perp_halves[i].p);
    }
}

TEST_CASE("degree parameter shifts the crossing degrees") {
    PlaneQuintuple q = kExample;
    q.m = 3;
    BifurcationDiagram d = bifurcation_diagram(q);
    auto [sum, ok] = qq_relation_check(d);
    REQUIRE(ok);
    for (const auto& [s, c] : sum.terms) REQUIRE((s.degree == 3 || s.degree == 2));
}

TEST_CASE("simplex interior criterion") {
    std::array<Vec3, 4> v = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, -1, -1}};
    REQUIRE(lemma1_interior_check(v, {1, 1, 1, 1}));
    REQUIRE(lemma1_interior_check(v, {1, 2, 3, Rat(1, 2)}));
}

TEST_CASE("precondition failures are distinguished") {
    std::array<Vec3, 4> good = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, -1, -1}};
    std::array<Vec3, 4> bad_sum = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, -1, 0}};
    std::array<Vec3, 4> bad_triple = {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0},
                                      Vec3{0, -1, 0}};
    try {
        lemma1_interior_check(bad_sum, {1, 1, 1, 1});
        FAIL("expected SumNonzero");
    } catch (const Lemma1PreconditionError& e) {
        REQUIRE(e.kind == Lemma1ErrorKind::SumNonzero);
    }
    try {
        lemma1_interior_check(bad_triple, {1, 1, 1, 1});
        FAIL("expected DependentTriple");
    } catch (const Lemma1PreconditionError& e) {
        REQUIRE(e.kind == Lemma1ErrorKind::DependentTriple);
    }
    try {
        lemma1_interior_check(good, {1, 0, 1, 1});
        FAIL("expected NonpositiveMu");
    } catch (const Lemma1PreconditionError& e) {
        REQUIRE(e.kind == Lemma1ErrorKind::NonpositiveMu);
    }
}

TEST_CASE("simplex_cell rejects unbounded and degenerate cells") {
    // three of the planes share a direction: the cell is an unbounded prism
    std::array<Vec3, 4> v = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, -1, 0}};
    REQUIRE_FALSE(simplex_cell(v, {1, 1, 1, 1}).has_value());
    std::array<Vec3, 4> good = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{-1, -1, -1}};
    auto cell = simplex_cell(good, {1, 1, 1, 1});
    REQUIRE(cell.has_value());
    // with mu = 1 the three coordinate planes meet at (1, 1, 1)
    REQUIRE((*cell)[3] == Vec3{1, 1, 1});
}

TEST_CASE("random lemma-1 instances always contain the origin") {
    SplitMix64 rng(424242);
    int done = 0;
    while (done < 50) {
        std::array<Vec3, 4> v;
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 3; ++c) {
                v[i][c] = Rat(rng.range(-9, 9), rng.range(1, 9));
                v[i][c].canonicalize();
            }
        for (int c = 0; c < 3; ++c) v[3][c] = -(v[0][c] + v[1][c] + v[2][c]);
        std::array<Rat, 4> mu;
        for (auto& x : mu) x = Rat(rng.range(1, 9), rng.range(1, 9));
        try {
            REQUIRE(lemma1_interior_check(v, mu));
            ++done;
        } catch (const Lemma1PreconditionError&) {
            // dependent triple drawn; resample
        }
    }
}

TEST_CASE("random quintuple generation is deterministic") {
    PlaneQuintuple a = random_quintuple(7, 10);
    PlaneQuintuple b = random_quintuple(7, 10);
    REQUIRE(a.normals == b.normals);
    PlaneQuintuple c = random_quintuple(8, 10);
    REQUIRE(a.normals != c.normals);
    PlaneQuintuple d = random_quintuple(7, 10, 5);
    REQUIRE(d.m == 5);
    REQUIRE_THROWS_AS(random_quintuple(1, 0), std::invalid_argument);
}

TEST_CASE("census over many seeds finds exactly four classes") {
    std::set<DiagramClass> classes;
    for (std::uint64_t i = 0; i < 200; ++i) {
        PlaneQuintuple q = random_quintuple(trial_seed(2024, i), 20);
        classes.insert(classify_diagram(bifurcation_diagram(q)));
    }
    REQUIRE(classes.size() == 4);
}
