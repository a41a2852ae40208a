#include <doctest.h>

#include <cmath>

#include "gptlab/self_duality.hpp"

using namespace gptlab;

namespace {

Rational rat(long p, long q = 1) { return Rational(p) / Rational(q); }

// non-transitive test space: a kite (only the mirror symmetry survives)
StateSpace<Exact> kite() {
    StateSpace<Exact> s;
    s.name = "kite";
    s.dim = 3;
    s.vertices = Mat<Exact>(4, 3);
    s.vertices << rat(0), rat(2), rat(1), rat(1), rat(0), rat(1), rat(-1), rat(0), rat(1),
        rat(0), rat(-1), rat(1);
    s.unit = Vec<Exact>(3);
    s.unit << rat(0), rat(0), rat(1);
    validate(s);
    return s;
}

}  // namespace

TEST_CASE("maximally mixed state is the centroid") {
    auto sq = make_square();
    auto mu = maximally_mixed(sq, automorphism_group(sq));
    CHECK(mu(0) == 0);
    CHECK(mu(1) == 0);
    CHECK(mu(2) == 1);

    for (int n : {2, 3, 4}) {
        auto s = make_simplex(n);
        auto m = maximally_mixed(s, automorphism_group(s));
        for (int j = 0; j < n; ++j) CHECK(m(j) == rat(1, n));
    }

    auto pent = std::get<StateSpace<Approx>>(make_ngon(5));
    auto mp = maximally_mixed(pent, automorphism_group(pent));
    CHECK(std::abs(mp(0)) < 1e-12);
    CHECK(std::abs(mp(1)) < 1e-12);
    CHECK(std::abs(mp(2) - 1) < 1e-12);

    CHECK_THROWS_AS(maximally_mixed(kite(), automorphism_group(kite())), NotTransitive);
}

TEST_CASE("square form: c = -1, lambda = 1/2, full form diag(1/4,1/4,1/2)") {
    auto sq = make_square();
    auto g = automorphism_group(sq);
    auto form = invariant_inner_product(sq, g);
    CHECK(form.c == rat(-1));
    CHECK(form.lambda == rat(1, 2));
    Mat<Exact> expect = Mat<Exact>::Zero(3, 3);
    expect(0, 0) = rat(1, 4);
    expect(1, 1) = rat(1, 4);
    expect(2, 2) = rat(1, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(form.full_form(i, j) == expect(i, j));
    CHECK(form.unique_up_to_scale);
    CHECK(is_positive_definite(sq.backend, form.full_form));
    CHECK(is_invariant_form(sq, g, form));
}

TEST_CASE("simplex family: c = -1/(n-1) against an independent Gram oracle") {
    for (int n : {2, 3, 4, 5}) {
        auto s = make_simplex(n);
        auto g = automorphism_group(s);
        auto form = invariant_inner_product(s, g);
        // oracle: centered basis vectors under the standard dot product give
        // hat_i . hat_i = 1 - 1/n and hat_i . hat_j = -1/n, so the normalized
        // overlap is -1/(n-1); uniqueness up to scale makes this the value
        Rational oracle = rat(-1, n) / (rat(1) - rat(1, n));
        CHECK(form.c == oracle);
        CHECK(form.c == rat(-1, n - 1));
        CHECK(form.lambda == rat(1, n));
        CHECK(form.unique_up_to_scale);
        CHECK(is_positive_definite(s.backend, form.full_form));
        CHECK(is_invariant_form(s, g, form));
    }
}

TEST_CASE("pentagon form: c = cos(4pi/5), lambda ~ 0.4472136") {
    auto pent = std::get<StateSpace<Approx>>(make_ngon(5));
    auto g = automorphism_group(pent);
    auto form = invariant_inner_product(pent, g);
    CHECK(std::abs(form.c - std::cos(4 * M_PI / 5)) < 1e-9);
    CHECK(std::abs(form.c + 0.8090170) < 1e-6);
    CHECK(std::abs(form.lambda - 0.4472136) < 1e-6);
    CHECK(form.unique_up_to_scale);
    CHECK(is_positive_definite(pent.backend, form.full_form));
    CHECK(is_invariant_form(pent, g, form));
}

TEST_CASE("degenerate space is rejected") {
    auto pt = make_simplex(1);
    CHECK_THROWS_AS(invariant_inner_product(pt, automorphism_group(pt)), Degenerate);
}

TEST_CASE("E_omega values") {
    auto sq = make_square();
    auto gsq = automorphism_group(sq);
    auto fsq = invariant_inner_product(sq, gsq);
    auto e0 = e_omega(sq, fsq, 0);  // omega = (1,1,1)
    CHECK(e0.covector(0) == rat(1, 4));
    CHECK(e0.covector(1) == rat(1, 4));
    CHECK(e0.covector(2) == rat(1, 2));
    CHECK(e0.covector.dot(sq.vertices.row(1)) == 0);  // diametral state

    auto pent = std::get<StateSpace<Approx>>(make_ngon(5));
    auto fp = invariant_inner_product(pent, automorphism_group(pent));
    auto ep = e_omega(pent, fp, 0);
    CHECK(std::abs(ep.covector.dot(pent.vertices.row(2))) < 1e-9);
    CHECK(std::abs(ep.covector.dot(pent.vertices.row(3))) < 1e-9);
    CHECK(std::abs(ep.covector.dot(pent.vertices.row(1)) - 0.6180340) < 1e-6);
    CHECK(std::abs(ep.covector.dot(pent.vertices.row(4)) - 0.6180340) < 1e-6);

    for (int n : {2, 3, 4}) {
        auto s = make_simplex(n);
        auto f = invariant_inner_product(s, automorphism_group(s));
        for (int i = 0; i < n; ++i) {
            auto e = e_omega(s, f, i);  // i-th outcome indicator
            for (int j = 0; j < n; ++j) CHECK(e.covector(j) == (i == j ? 1 : 0));
        }
    }

    CHECK_THROWS_AS(e_omega(sq, fsq, 9), IndexOutOfRange);
}

TEST_CASE("square is not self-dual, with a checked witness") {
    auto sq = make_square();
    auto form = invariant_inner_product(sq, automorphism_group(sq));
    auto cert = verify_self_dual(sq, form);
    CHECK_FALSE(cert.is_self_dual);
    REQUIRE(cert.offending_effect);
    // the offending extremal effect's vector representative must leave A+
    auto inv = invert(sq.backend, form.full_form);
    REQUIRE(inv);
    Vec<Exact> rep = (*inv) * (*cert.offending_effect);
    ConeH<Exact> h = dd_convert(sq.backend, state_cone(sq));
    CHECK_FALSE(cone_member(sq.backend, h, rep));
    // the documented witness: effect (1,0,1)/2 maps to representative (2,0,1)
    Vec<Exact> e(3);
    e << rat(1), rat(0), rat(1);
    Vec<Exact> r = canonical_vec(sq.backend, Vec<Exact>((*inv) * e));
    CHECK(r(0) == 2);
    CHECK(r(1) == 0);
    CHECK(r(2) == 1);
    CHECK_FALSE(cone_member(sq.backend, h, r));
}

TEST_CASE("simplices and odd n-gons are self-dual; even n-gons are not") {
    for (int n : {2, 3, 4, 5}) {
        auto s = make_simplex(n);
        auto cert = verify_self_dual(s, invariant_inner_product(s, automorphism_group(s)));
        CHECK(cert.is_self_dual);
    }
    for (int n = 3; n <= 9; ++n) {
        bool expect = n % 2 == 1;
        std::visit(
            [&](const auto& s) {
                auto cert = verify_self_dual(s, invariant_inner_product(s, automorphism_group(s)));
                CHECK(cert.is_self_dual == expect);
            },
            make_ngon(n));
    }
}

TEST_CASE("statements (i)-(iii) hold on bit-symmetric spaces") {
    auto pent = std::get<StateSpace<Approx>>(make_ngon(5));
    auto gp = automorphism_group(pent);
    auto rp = check_statements(pent, gp, invariant_inner_product(pent, gp));
    CHECK_FALSE(rp.advisory);
    CHECK(rp.all_pass());

    auto s4 = make_simplex(4);
    auto g4 = automorphism_group(s4);
    auto f4 = invariant_inner_product(s4, g4);
    auto r4 = check_statements(s4, g4, f4);
    CHECK(f4.c == rat(-1, 3));
    CHECK_FALSE(r4.advisory);
    CHECK(r4.all_pass());
}

TEST_CASE("statements report on the square: (iii) fails, marked advisory") {
    auto sq = make_square();
    auto g = automorphism_group(sq);
    auto rep = check_statements(sq, g, invariant_inner_product(sq, g));
    CHECK(rep.advisory);
    CHECK(rep.overlaps_in_range);
    CHECK(rep.minimal_overlap_distinguishes);
    CHECK(rep.unit_norm_on_vertices);
    CHECK(rep.nonnegative_on_states);
    CHECK(rep.c_attained);
    // adjacent distinguishable pairs have Bloch overlap 0, not c = -1
    CHECK_FALSE(rep.distinguishable_have_minimal_overlap);
    CHECK_FALSE(rep.zero_on_distinguishable);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("meta-theorem: bit-symmetric catalog spaces verify as self-dual") {
    auto run = [](const auto& s) {
        auto g = automorphism_group(s);
        if (!is_bit_symmetric(s, g).is_bit_symmetric) return;
        auto form = invariant_inner_product(s, g);
        CHECK(verify_self_dual(s, form).is_self_dual);
        CHECK(check_statements(s, g, form).all_pass());
    };
    for (int n = 3; n <= 9; ++n) std::visit(run, make_ngon(n));
    for (int n : {2, 3, 4, 5}) run(make_simplex(n));
    run(make_square());
    run(make_cube(3));
}
