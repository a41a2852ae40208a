#include <doctest.h>

#include <random>

#include "gptlab/lp.hpp"
#include "gptlab/state_space.hpp"

using namespace gptlab;

namespace {

Exact bk;

Vec<Exact> vec3(int a, int b, int c) {
    Vec<Exact> v(3);
    v << a, b, c;
    return v;
}

// {e(w) = 1, e(p) = 0, 0 <= e(v) <= 1 for all vertices}
LinearProgram<Exact> distinguishing_lp(const StateSpace<Exact>& s, int w, int p) {
    LinearProgram<Exact> lp;
    lp.nvars = s.dim;
    lp.constraints.push_back({Vec<Exact>(s.vertices.row(w)), Rel::Eq, 1});
    lp.constraints.push_back({Vec<Exact>(s.vertices.row(p)), Rel::Eq, 0});
    for (int v = 0; v < s.vertices.rows(); ++v) {
        lp.constraints.push_back({Vec<Exact>(s.vertices.row(v)), Rel::Ge, 0});
        lp.constraints.push_back({Vec<Exact>(s.vertices.row(v)), Rel::Le, 1});
    }
    return lp;
}

}  // namespace

TEST_CASE("box maximum") {
    LinearProgram<Exact> lp;
    lp.nvars = 2;
    Vec<Exact> e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    for (const auto& e : {e1, e2}) {
        lp.constraints.push_back({e, Rel::Ge, -1});
        lp.constraints.push_back({e, Rel::Le, 1});
    }
    lp.objective = e1;
    auto res = lp_solve(bk, lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(*res.optimum == 1);
}

TEST_CASE("distinguishing effect on the square is feasible") {
    auto sq = make_square();
    for (auto [w, p] : {std::pair{0, 1}, {0, 2}, {0, 3}}) {
        auto lp = distinguishing_lp(sq, w, p);
        auto res = lp_solve(bk, lp);
        REQUIRE(res.status == LpStatus::Feasible);
        CHECK(satisfies(bk, lp, *res.witness));
    }
    // hand-checked witness for the diametral pair: e(x) = (x1 + x2 + 2 x3)/4
    auto lp = distinguishing_lp(sq, 0, 1);
    Vec<Exact> e(3);
    e << Rational(1, 4), Rational(1, 4), Rational(1, 2);
    CHECK(satisfies(bk, lp, e));
}

TEST_CASE("identical states are not distinguishable, with Farkas certificate") {
    auto sq = make_square();
    auto lp = distinguishing_lp(sq, 0, 0);
    auto res = lp_solve(bk, lp);
    REQUIRE(res.status == LpStatus::Infeasible);
    REQUIRE(res.farkas.has_value());
    CHECK(check_farkas(bk, lp, *res.farkas));
}

TEST_CASE("unbounded program") {
    LinearProgram<Exact> lp;
    lp.nvars = 1;
    Vec<Exact> e(1);
    e << 1;
    lp.constraints.push_back({e, Rel::Ge, 0});
    lp.objective = e;
    CHECK(lp_solve(bk, lp).status == LpStatus::Unbounded);
}

TEST_CASE("malformed programs are rejected") {
    LinearProgram<Exact> lp;
    lp.nvars = 0;
    CHECK_THROWS_AS(lp_solve(bk, lp), MalformedProgram);
    lp.nvars = 2;
    Vec<Exact> e(1);
    e << 1;
    lp.constraints.push_back({e, Rel::Ge, 0});
    CHECK_THROWS_AS(lp_solve(bk, lp), MalformedProgram);
}

TEST_CASE("random programs: witnesses and certificates re-verify") {
    std::mt19937 rng(20260825);
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> relpick(0, 2);
    int optimal = 0, infeasible = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + trial % 3;
        LinearProgram<Exact> lp;
        lp.nvars = n;
        // bounding box keeps everything bounded
        for (int j = 0; j < n; ++j) {
            Vec<Exact> e = Vec<Exact>::Zero(n);
            e(j) = 1;
            lp.constraints.push_back({e, Rel::Ge, -10});
            lp.constraints.push_back({e, Rel::Le, 10});
        }
        for (int k = 0; k < n + 2; ++k) {
            Vec<Exact> a(n);
            for (int j = 0; j < n; ++j) a(j) = coef(rng);
            lp.constraints.push_back({a, static_cast<Rel>(relpick(rng)), coef(rng)});
        }
        Vec<Exact> obj(n);
        for (int j = 0; j < n; ++j) obj(j) = coef(rng);
        lp.objective = obj;
        auto res = lp_solve(bk, lp);
        if (res.status == LpStatus::Optimal) {
            ++optimal;
            CHECK(satisfies(bk, lp, *res.witness));
            // flipping the objective: optima negate
            LinearProgram<Exact> neg = lp;
            neg.objective = Vec<Exact>(-obj);
            neg.maximize = false;
            auto nres = lp_solve(bk, neg);
            REQUIRE(nres.status == LpStatus::Optimal);
            CHECK(*nres.optimum == -*res.optimum);
        } else {
            REQUIRE(res.status == LpStatus::Infeasible);
            ++infeasible;
            CHECK(check_farkas(bk, lp, *res.farkas));
        }
    }
    CHECK(optimal > 0);
    CHECK(infeasible > 0);
}

TEST_CASE("maximize_over_polytope matches vertex scan") {
    auto sq = make_square();
    auto [opt, arg] = maximize_over_polytope(Vec<Exact>(sq.unit), sq);
    CHECK(opt == 1);
    CHECK(arg == 0);  // unit is 1 everywhere; ties break to the lowest index

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        Vec<Exact> obj(3);
        for (int j = 0; j < 3; ++j) obj(j) = coef(rng);
        auto [o, a] = maximize_over_polytope(obj, sq);
        Rational best = obj.dot(sq.vertices.row(0));
        for (int v = 1; v < 4; ++v) best = std::max(best, Rational(obj.dot(sq.vertices.row(v))));
        CHECK(o == best);
        CHECK(obj.dot(sq.vertices.row(a)) == best);
    }
}
