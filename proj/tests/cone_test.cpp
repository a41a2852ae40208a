#include <doctest.h>

#include <random>

#include "gptlab/cone.hpp"
#include "gptlab/state_space.hpp"

using namespace gptlab;

namespace {

Exact bk;

ConeV<Exact> square_cone() {
    Mat<Exact> rays(4, 3);
    rays << 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1;
    return ConeV<Exact>{3, canonical_rows(bk, rays)};
}

ConeV<Exact> orthant(int d) {
    Exact b;
    return ConeV<Exact>{d, canonical_rows(b, Mat<Exact>(Mat<Exact>::Identity(d, d)))};
}

// rays with positive last coordinate are always a pointed cone
ConeV<Exact> random_pointed_cone(std::mt19937& rng, int d) {
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> extra(0, 3);
    for (;;) {
        int k = d + extra(rng);
        Mat<Exact> rays(k, d);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j + 1 < d; ++j) rays(i, j) = coef(rng);
            rays(i, d - 1) = 1;
        }
        if (rank_of(bk, rays) == d)
            return reduce_cone(bk, ConeV<Exact>{d, rays});
    }
}

bool mats_equal(const Mat<Exact>& a, const Mat<Exact>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

bool has_row(const Mat<Exact>& m, std::initializer_list<int> entries) {
    Vec<Exact> v(static_cast<int>(entries.size()));
    int i = 0;
    for (int e : entries) v(i++) = e;
    v = canonical_vec(bk, v);
    for (int r = 0; r < m.rows(); ++r)
        if (lex_compare(bk, Vec<Exact>(m.row(r)), v) == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("square cone facets") {
    auto h = dd_convert(bk, square_cone());
    REQUIRE(h.ineqs.rows() == 4);
    CHECK(has_row(h.ineqs, {-1, 0, 1}));  // x3 - x1 >= 0
    CHECK(has_row(h.ineqs, {1, 0, 1}));   // x3 + x1 >= 0
    CHECK(has_row(h.ineqs, {0, -1, 1}));  // x3 - x2 >= 0
    CHECK(has_row(h.ineqs, {0, 1, 1}));   // x3 + x2 >= 0
}

TEST_CASE("orthant is self-described and self-dual") {
    for (int d : {1, 2, 3, 5}) {
        auto h = dd_convert(bk, orthant(d));
        CHECK(mats_equal(h.ineqs, orthant(d).rays));
        CHECK(cone_equal(bk, dual_cone(bk, orthant(d)), orthant(d)));
    }
}

TEST_CASE("dual of the square cone") {
    auto d = dual_cone(bk, square_cone());
    REQUIRE(d.rays.rows() == 4);
    CHECK(has_row(d.rays, {1, 0, 1}));
    CHECK(has_row(d.rays, {-1, 0, 1}));
    CHECK(has_row(d.rays, {0, 1, 1}));
    CHECK(has_row(d.rays, {0, -1, 1}));
}

TEST_CASE("simplex cone over the triangle is self-dual up to relabeling") {
    auto tri = make_simplex(3);
    auto c = state_cone(tri);
    CHECK(cone_equal(bk, dual_cone(bk, c), c));
}

TEST_CASE("round trips and duality involution on random cones") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 3 + trial % 4;
        auto c = random_pointed_cone(rng, d);
        auto back = dd_convert(bk, dd_convert(bk, c));
        CHECK(cone_equal(bk, back, c));
        CHECK(cone_equal(bk, dual_cone(bk, dual_cone(bk, c)), c));
    }
}

TEST_CASE("representation equivalence: tight counts") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        int d = 3 + trial % 3;
        auto c = random_pointed_cone(rng, d);
        auto h = dd_convert(bk, c);
        for (int i = 0; i < c.rays.rows(); ++i) {
            std::vector<int> tight;
            for (int r = 0; r < h.ineqs.rows(); ++r) {
                Rational v = h.ineqs.row(r).dot(c.rays.row(i));
                CHECK(v >= 0);
                if (v == 0) tight.push_back(r);
            }
            Mat<Exact> sub(static_cast<int>(tight.size()), d);
            for (size_t r = 0; r < tight.size(); ++r) sub.row(static_cast<int>(r)) = h.ineqs.row(tight[r]);
            CHECK(rank_of(bk, sub) >= d - 1);
        }
        for (int r = 0; r < h.ineqs.rows(); ++r) {
            std::vector<int> tight;
            for (int i = 0; i < c.rays.rows(); ++i)
                if (h.ineqs.row(r).dot(c.rays.row(i)) == 0) tight.push_back(i);
            Mat<Exact> sub(static_cast<int>(tight.size()), d);
            for (size_t i = 0; i < tight.size(); ++i) sub.row(static_cast<int>(i)) = c.rays.row(tight[i]);
            CHECK(rank_of(bk, sub) >= d - 1);
        }
    }
}

TEST_CASE("canonicalization is stable under permutation and rescaling") {
    std::mt19937 rng(5);
    auto c = random_pointed_cone(rng, 4);
    Mat<Exact> shuffled = c.rays;
    std::vector<int> perm(shuffled.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Mat<Exact> other(shuffled.rows(), 4);
    std::uniform_int_distribution<int> scale(1, 7);
    for (int i = 0; i < shuffled.rows(); ++i)
        other.row(i) = Rational(scale(rng)) * shuffled.row(perm[i]);
    CHECK(mats_equal(canonical_rows(bk, other), c.rays));
}

TEST_CASE("membership") {
    auto c = square_cone();
    Vec<Exact> interior(3), outside(3), boundary(3);
    interior << 0, 0, 1;
    outside << 2, 0, 1;
    boundary << 1, 1, 1;
    CHECK(cone_member(bk, c, interior));
    CHECK_FALSE(cone_member(bk, c, outside));
    CHECK(cone_member(bk, c, boundary));
    auto h = dd_convert(bk, c);
    CHECK(cone_member(bk, h, interior));
    CHECK_FALSE(cone_member(bk, h, outside));
    Vec<Exact> bad(2);
    bad << 1, 1;
    CHECK_THROWS_AS(cone_member(bk, c, bad), DimensionMismatch);
}

TEST_CASE("degenerate cones are rejected") {
    Mat<Exact> line(2, 3);
    line << 1, 0, 0, -1, 0, 0;
    CHECK_THROWS_AS(dd_convert(bk, ConeV<Exact>{3, line}), Error);
    Mat<Exact> flat(2, 3);
    flat << 1, 0, 0, 0, 1, 0;
    CHECK_THROWS_AS(dd_convert(bk, ConeV<Exact>{3, flat}), NotFullDimensional);
}

TEST_CASE("faces of the square") {
    auto sq = make_square();  // vertices (1,1),(−1,−1),(1,−1),(−1,1)
    auto edge = face_generated_by(sq, {0, 3});  // adjacent: share x2 = ... edge
    CHECK(edge.vertex_indices == std::vector<int>{0, 3});
    auto all = face_generated_by(sq, {0, 1});  // diametral
    CHECK(all.vertex_indices == std::vector<int>{0, 1, 2, 3});
    auto pt = face_generated_by(sq, {2});
    CHECK(pt.vertex_indices == std::vector<int>{2});
    CHECK_THROWS_AS(face_generated_by(sq, {}), IndexOutOfRange);
    CHECK_THROWS_AS(face_generated_by(sq, {7}), IndexOutOfRange);
}

TEST_CASE("pentagon pairs generate the full pentagon") {
    auto pent = std::get<StateSpace<Approx>>(make_ngon(5));
    for (auto [i, j] : {std::pair{0, 2}, {1, 4}}) {
        auto f = face_generated_by(pent, {i, j});
        CHECK(f.vertex_indices.size() == 5);
    }
    auto edge = face_generated_by(pent, {0, 1});
    CHECK(edge.vertex_indices == std::vector<int>{0, 1});
}

TEST_CASE("face monotonicity and idempotence") {
    auto cube = make_cube(3);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, 7);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> in = {pick(rng), pick(rng)};
        auto f = face_generated_by(cube, in);
        for (int i : in)
            CHECK(std::count(f.vertex_indices.begin(), f.vertex_indices.end(), i) == 1);
        auto again = face_generated_by(cube, f.vertex_indices);
        CHECK(again.vertex_indices == f.vertex_indices);
    }
}

TEST_CASE("float backend round trip on the pentagon cone") {
    auto pent = std::get<StateSpace<Approx>>(make_ngon(5));
    const Approx& fbk = pent.backend;
    auto c = state_cone(pent);
    auto back = dd_convert(fbk, dd_convert(fbk, c));
    REQUIRE(back.rays.rows() == c.rays.rows());
    for (int i = 0; i < c.rays.rows(); ++i)
        CHECK(lex_compare(fbk, Vec<Approx>(back.rays.row(i)), Vec<Approx>(c.rays.row(i))) == 0);
}
