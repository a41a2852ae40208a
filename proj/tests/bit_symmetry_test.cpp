#include <doctest.h>

#include "gptlab/bit_symmetry.hpp"

using namespace gptlab;

TEST_CASE("square: all 12 ordered pairs distinguishable, 2 orbits") {
    auto sq = make_square();
    auto pairs = distinguishable_pairs(sq);
    CHECK(pairs.size() == 12);
    for (const auto& p : pairs) {
        CHECK(is_proper_effect(sq, p.witness));
        CHECK(p.witness.covector.dot(sq.vertices.row(p.i)) == 1);
        CHECK(p.witness.covector.dot(sq.vertices.row(p.j)) == 0);
    }
    auto g = automorphism_group(sq);
    auto verdict = is_bit_symmetric(sq, g);
    CHECK_FALSE(verdict.is_bit_symmetric);
    CHECK(verdict.orbit_count == 2);
    CHECK(verdict.transitive_on_pure_states);

    // adjacent pair generates an edge, diametral pair the whole square
    for (const auto& p : pairs) {
        auto face = logical_bit(sq, p);
        bool diametral = (p.i ^ p.j) == 1;  // vertex order pairs 0/1 and 2/3 diametrally
        CHECK(face.vertex_indices.size() == (diametral ? 4 : 2));
    }
}

TEST_CASE("pentagon: 10 pairs at circular distance 2, one orbit") {
    auto pent = std::get<StateSpace<Approx>>(make_ngon(5));
    auto pairs = distinguishable_pairs(pent);
    REQUIRE(pairs.size() == 10);
    for (const auto& p : pairs) {
        int dist = std::min((p.i - p.j + 5) % 5, (p.j - p.i + 5) % 5);
        CHECK(dist == 2);
        CHECK(logical_bit(pent, p).vertex_indices.size() == 5);
    }
    auto verdict = is_bit_symmetric(pent, automorphism_group(pent));
    CHECK(verdict.is_bit_symmetric);
    CHECK(verdict.orbit_count == 1);
    CHECK(verdict.transitive_on_pure_states);
}

TEST_CASE("simplex: n(n-1) pairs, bit-symmetric") {
    for (int n : {2, 3, 4}) {
        auto s = make_simplex(n);
        auto pairs = distinguishable_pairs(s);
        CHECK(pairs.size() == static_cast<size_t>(n * (n - 1)));
        auto verdict = is_bit_symmetric(s, automorphism_group(s));
        CHECK(verdict.is_bit_symmetric);
        CHECK(verdict.orbit_count == 1);
    }
}

TEST_CASE("ngon parity: bit-symmetric iff n odd") {
    for (int n = 3; n <= 9; ++n) {
        bool expect = n % 2 == 1;
        std::visit(
            [&](const auto& s) {
                auto verdict = is_bit_symmetric(s, automorphism_group(s));
                CHECK(verdict.is_bit_symmetric == expect);
            },
            make_ngon(n));
    }
}

TEST_CASE("degenerate single point: vacuous verdict, flagged") {
    auto pt = make_simplex(1);
    auto verdict = is_bit_symmetric(pt, automorphism_group(pt));
    CHECK(verdict.is_bit_symmetric);
    CHECK(verdict.degenerate);
    CHECK(verdict.orbit_count == 0);
    CHECK(distinguishable_pairs(pt).empty());
}

TEST_CASE("symmetry covariance: transported pairs stay distinguishable") {
    auto sq = make_square();
    auto g = automorphism_group(sq);
    auto pairs = distinguishable_pairs(sq);
    std::set<std::pair<int, int>> have;
    for (const auto& p : pairs) have.insert({p.i, p.j});
    Exact bk;
    for (const auto& e : g.elements) {
        auto inv = invert(bk, e.matrix);
        REQUIRE(inv);
        for (const auto& p : pairs) {
            std::pair<int, int> img{e.vertex_permutation[p.i], e.vertex_permutation[p.j]};
            CHECK(have.count(img) == 1);
            // transported witness e o T^{-1} separates the image pair
            Effect<Exact> te{inv->transpose() * p.witness.covector};
            CHECK(is_proper_effect(sq, te));
            CHECK(te.covector.dot(sq.vertices.row(img.first)) == 1);
            CHECK(te.covector.dot(sq.vertices.row(img.second)) == 0);
        }
    }
}

TEST_CASE("identical indices are rejected") {
    CHECK_THROWS_AS(distinguishing_effect(make_simplex(3), 0, 0), NotDistinguishable);
    CHECK_THROWS_AS(distinguishing_effect(make_simplex(3), 0, 9), IndexOutOfRange);
}

TEST_CASE("parallel pair scan matches sequential") {
    auto pent = std::get<StateSpace<Approx>>(make_ngon(7));
    auto seq = distinguishable_pairs(pent, 1);
    auto par = distinguishable_pairs(pent, 4);
    REQUIRE(seq.size() == par.size());
    for (size_t k = 0; k < seq.size(); ++k) {
        CHECK(seq[k].i == par[k].i);
        CHECK(seq[k].j == par[k].j);
    }
}
