#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oim/group.hpp"
#include "oim/rng.hpp"

using namespace oim;

namespace {

IntMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
}

} // namespace

TEST_CASE("quotient of Z by 2Z") {
    QuotientResult q = presentation_quotient(1, from_rows({{2}}, 1));
    REQUIRE(q.group.free_rank == 0);
    REQUIRE(q.group.torsion == std::vector<mpz_class>{2});
}

TEST_CASE("identified generators") {
    QuotientResult q = presentation_quotient(2, from_rows({{1, -1}}, 2));
    REQUIRE(q.group.free_rank == 1);
    REQUIRE(q.group.torsion.empty());
    REQUIRE(q.gen_images[0] == q.gen_images[1]);
}

TEST_CASE("presentation on five generators with two 2-torsion relations") {
    // generators (t^2_0, t^3_0, h^2_0, h^1_0, q^2_0), relations 2h^1_0 = 2q^2_0 = 0
    QuotientResult q = presentation_quotient(5, from_rows({{0, 0, 0, 2, 0}, {0, 0, 0, 0, 2}}, 5));
    REQUIRE(q.group.free_rank == 3);
    REQUIRE(q.group.torsion == std::vector<mpz_class>{2, 2});
}

TEST_CASE("quotient invariant under row permutation and row addition") {
    IntMatrix a = from_rows({{2, 0, 4}, {0, 6, 2}, {0, 0, 5}}, 3);
    IntMatrix b = from_rows({{0, 0, 5}, {2, 0, 4}, {2, 6, 6}}, 3); // permuted + row sum
    QuotientResult qa = presentation_quotient(3, a);
    QuotientResult qb = presentation_quotient(3, b);
    REQUIRE(qa.group == qb.group);
}

TEST_CASE("projection is additive and kills relation rows") {
    IntMatrix rel = from_rows({{2, 4}, {0, 6}}, 2);
    QuotientResult q = presentation_quotient(2, rel);
    for (std::size_t r = 0; r < rel.rows(); ++r) {
        GroupElement acc = q.group.zero();
        for (std::size_t g = 0; g < 2; ++g)
            acc = q.group.add(acc, q.group.smul(rel(r, g), q.gen_images[g]));
        REQUIRE(q.group.is_zero(acc));
    }
    GroupElement sum01 = q.group.add(q.gen_images[0], q.gen_images[1]);
    GroupElement via_row = q.group.zero();
    for (std::size_t g = 0; g < 2; ++g)
        via_row = q.group.add(via_row, q.group.smul(1, q.gen_images[g]));
    REQUIRE(sum01 == via_row);
}

TEST_CASE("torsion two subgroup") {
    REQUIRE(torsion_two_subgroup(GroupSpec{1, {}}).is_trivial());
    REQUIRE(torsion_two_subgroup(GroupSpec{0, {4}}) == GroupSpec{0, {2}});
    REQUIRE(torsion_two_subgroup(GroupSpec{0, {2, 3}}) == GroupSpec{0, {2}});
    REQUIRE(torsion_two_subgroup(GroupSpec{2, {2, 6}}) == GroupSpec{0, {2, 2}});
}

TEST_CASE("hom group factor-wise formula") {
    GroupSpec z{1, {}}, z2{0, {2}}, z2z{0, {2}};
    REQUIRE(hom_group(z, z2) == GroupSpec{0, {2}});
    REQUIRE(hom_group(z2, z) == GroupSpec{0, {}});
    REQUIRE(hom_group(GroupSpec{0, {4}}, GroupSpec{0, {6}}) == GroupSpec{0, {2}});
    // Hom(G_U^(1), Z/2) with G_U^(1) = Z^7 + (Z/2)^2 has order 2^9
    GroupSpec gu{7, {2, 2}};
    REQUIRE(hom_group(gu, z2).order() == 512);
    REQUIRE(enumerate_homs(gu, z2).size() == 512);
}

TEST_CASE("enumerate_homs count matches hom_group order") {
    std::vector<GroupSpec> sources = {
        GroupSpec{0, {2}}, GroupSpec{1, {2}}, GroupSpec{2, {}}, GroupSpec{0, {2, 4}},
        GroupSpec{1, {3}},
    };
    std::vector<GroupSpec> targets = {
        GroupSpec{0, {2}}, GroupSpec{0, {4}}, GroupSpec{0, {2, 2}}, GroupSpec{0, {3}},
        GroupSpec{0, {12}},
    };
    for (const auto& s : sources)
        for (const auto& t : targets) {
            auto homs = enumerate_homs(s, t);
            REQUIRE(mpz_class(static_cast<unsigned long>(homs.size())) == hom_group(s, t).order());
            std::set<std::vector<GroupElement>> uniq;
            for (const auto& h : homs) {
                REQUIRE(h.valid());
                uniq.insert(h.images);
            }
            REQUIRE(uniq.size() == homs.size());
        }
}

TEST_CASE("enumerate_homs rejects infinite targets") {
    REQUIRE_THROWS_AS(enumerate_homs(GroupSpec{0, {2}}, GroupSpec{1, {}}), std::invalid_argument);
}

TEST_CASE("invariant factor normalization") {
    REQUIRE(invariant_factors_from_cyclic({2, 3}) == std::vector<mpz_class>{6});
    REQUIRE(invariant_factors_from_cyclic({2, 4}) == std::vector<mpz_class>{2, 4});
    REQUIRE(invariant_factors_from_cyclic({6, 4}) == std::vector<mpz_class>{2, 12});
    REQUIRE(invariant_factors_from_cyclic({}).empty());
}
