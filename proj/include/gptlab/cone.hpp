#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "gptlab/errors.hpp"
#include "gptlab/linalg.hpp"
#include "gptlab/lp.hpp"

namespace gptlab {

/// Canonical representative of the positive-scaling class: coprime integer
/// entries (exact) or unit norm (float). Only positive factors are allowed,
/// since a ray or inequality and its negation are different objects.
template <class B>
Vec<B> canonical_vec(const B& bk, Vec<B> v) {
    if constexpr (B::is_exact) {
        BigInt l = 1, g = 0;
        for (int i = 0; i < v.size(); ++i)
            l = lcm(l, boost::multiprecision::denominator(v(i)));
        for (int i = 0; i < v.size(); ++i) {
            v(i) *= Rational(l);
            g = gcd(g, boost::multiprecision::numerator(v(i)));
        }
        if (g != 0)
            for (int i = 0; i < v.size(); ++i) v(i) /= Rational(g);
    } else {
        double norm = 0;
        for (int i = 0; i < v.size(); ++i) norm += v(i) * v(i);
        norm = std::sqrt(norm);
        if (norm > 0) v /= norm;
        for (int i = 0; i < v.size(); ++i) v(i) = bk.snap(v(i));
    }
    return v;
}

template <class B>
int lex_compare(const B& bk, const Vec<B>& a, const Vec<B>& b) {
    for (int i = 0; i < a.size(); ++i) {
        int s = bk.sign(a(i) - b(i));
        if (s != 0) return s;
    }
    return 0;
}

/// Canonicalizes all rows, removes duplicates, sorts lexicographically.
template <class B>
Mat<B> canonical_rows(const B& bk, const Mat<B>& m) {
    std::vector<Vec<B>> rows;
    for (int i = 0; i < m.rows(); ++i) rows.push_back(canonical_vec(bk, Vec<B>(m.row(i))));
    std::sort(rows.begin(), rows.end(),
              [&](const Vec<B>& a, const Vec<B>& b) { return lex_compare(bk, a, b) < 0; });
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [&](const Vec<B>& a, const Vec<B>& b) { return lex_compare(bk, a, b) == 0; }),
               rows.end());
    Mat<B> out(static_cast<int>(rows.size()), m.cols());
    for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<int>(i)) = rows[i];
    return out;
}

template <class B>
struct ConeV {
    int dim = 0;
    Mat<B> rays;  // one ray per row, canonicalized and sorted
};

template <class B>
struct ConeH {
    int dim = 0;
    Mat<B> ineqs;  // one covector h per row, meaning h(x) >= 0
};

template <class B>
bool cone_equal(const B& bk, const ConeV<B>& a, const ConeV<B>& b) {
    if (a.dim != b.dim || a.rays.rows() != b.rays.rows()) return false;
    for (int i = 0; i < a.rays.rows(); ++i)
        if (lex_compare(bk, Vec<B>(a.rays.row(i)), Vec<B>(b.rays.row(i))) != 0) return false;
    return true;
}

namespace detail {

// Double description: extreme rays of {x : ineqs * x >= 0}. Requires the cone
// pointed (rank of ineqs == dim). Insertion follows row order; adjacency is
// the combinatorial test over tight sets of processed inequalities, stored as
// word-packed bitsets so the subset scans stay cheap on degenerate cones.
template <class B>
Mat<B> dd_rays(const B& bk, const Mat<B>& ineqs, int dim) {
    struct Ray {
        Vec<B> v;
        std::vector<uint64_t> tight;  // bitset over rows, tight rows set
    };
    const int m = static_cast<int>(ineqs.rows());
    const int words = (m + 63) / 64;
    auto set_bit = [](std::vector<uint64_t>& t, int i) { t[i >> 6] |= uint64_t(1) << (i & 63); };

    // initial simplicial cone from the lexicographically first independent rows
    std::vector<int> base;
    {
        Mat<B> acc(0, dim);
        for (int i = 0; i < m && static_cast<int>(base.size()) < dim; ++i) {
            Mat<B> trial(acc.rows() + 1, dim);
            trial.topRows(acc.rows()) = acc;
            trial.row(acc.rows()) = ineqs.row(i);
            if (rank_of(bk, trial) > acc.rows()) {
                acc = trial;
                base.push_back(i);
            }
        }
        if (static_cast<int>(base.size()) < dim)
            throw NotPointed("inequality system has nontrivial lineality space");
    }
    Mat<B> hb(dim, dim);
    for (int i = 0; i < dim; ++i) hb.row(i) = ineqs.row(base[i]);
    auto inv = invert(bk, hb);
    if (!inv) throw NotPointed("initial inequality block not invertible");

    std::vector<bool> in_base(m, false);
    for (int i : base) in_base[i] = true;
    std::vector<int> processed = base;
    std::vector<Ray> rays;
    for (int j = 0; j < dim; ++j) {
        Ray r;
        r.v = canonical_vec(bk, Vec<B>(inv->col(j)));  // h_base[i] . r_j = delta_ij
        r.tight.assign(words, 0);
        for (int i = 0; i < dim; ++i)
            if (i != j) set_bit(r.tight, base[i]);
        rays.push_back(std::move(r));
    }

    std::vector<uint64_t> common(words);
    for (int row = 0; row < m; ++row) {
        if (in_base[row]) continue;
        Vec<B> h = ineqs.row(row);
        std::vector<int> pos, neg, zero;
        std::vector<typename B::Value> val(rays.size());
        for (size_t i = 0; i < rays.size(); ++i) {
            val[i] = h.dot(rays[i].v);
            int s = bk.sign(val[i]);
            (s > 0 ? pos : s < 0 ? neg : zero).push_back(static_cast<int>(i));
        }
        processed.push_back(row);
        if (neg.empty()) {  // redundant or tight only
            for (int i : zero) set_bit(rays[i].tight, row);
            continue;
        }
        std::vector<Ray> next;
        for (int i : pos) next.push_back(rays[i]);
        for (int i : zero) {
            next.push_back(rays[i]);
            set_bit(next.back().tight, row);
        }
        for (int p : pos) {
            for (int n : neg) {
                int card = 0;
                for (int w = 0; w < words; ++w) {
                    common[w] = rays[p].tight[w] & rays[n].tight[w];
                    card += std::popcount(common[w]);
                }
                if (card < dim - 2) continue;
                bool adjacent = true;
                for (size_t q = 0; q < rays.size(); ++q) {
                    if (static_cast<int>(q) == p || static_cast<int>(q) == n) continue;
                    bool subset = true;
                    for (int w = 0; w < words; ++w)
                        if (common[w] & ~rays[q].tight[w]) { subset = false; break; }
                    if (subset) { adjacent = false; break; }
                }
                if (!adjacent) continue;
                Ray nr;
                nr.v = canonical_vec(bk, Vec<B>(val[p] * rays[n].v - val[n] * rays[p].v));
                nr.tight = common;
                set_bit(nr.tight, row);
                next.push_back(std::move(nr));
            }
        }
        rays = std::move(next);
        // recompute tight sets against all processed rows (keeps float drift out)
        if constexpr (!B::is_exact) {
            for (auto& r : rays) {
                std::fill(r.tight.begin(), r.tight.end(), 0);
                for (int q : processed)
                    if (bk.is_zero(ineqs.row(q).dot(r.v))) set_bit(r.tight, q);
            }
        }
    }

    Mat<B> out(static_cast<int>(rays.size()), dim);
    for (size_t i = 0; i < rays.size(); ++i) out.row(static_cast<int>(i)) = rays[i].v;
    return canonical_rows(bk, out);
}

template <class B>
void check_v_cone(const B& bk, const ConeV<B>& cone) {
    if (cone.rays.rows() == 0 || rank_of(bk, cone.rays) < cone.dim)
        throw NotFullDimensional("rays do not span the ambient space");
    // pointed iff a functional is strictly positive on every ray
    LinearProgram<B> lp;
    lp.nvars = cone.dim;
    for (int i = 0; i < cone.rays.rows(); ++i)
        lp.constraints.push_back({Vec<B>(cone.rays.row(i)), Rel::Ge, typename B::Value(1)});
    if (lp_solve(bk, lp).status != LpStatus::Feasible)
        throw NotPointed("cone contains a line");
}

}  // namespace detail

/// V -> H: facet inequalities are the extreme rays of the dual cone.
template <class B>
ConeH<B> dd_convert(const B& bk, const ConeV<B>& cone) {
    detail::check_v_cone(bk, cone);
    return ConeH<B>{cone.dim, detail::dd_rays(bk, cone.rays, cone.dim)};
}

/// H -> V.
template <class B>
ConeV<B> dd_convert(const B& bk, const ConeH<B>& cone) {
    if (rank_of(bk, cone.ineqs) < cone.dim)
        throw NotPointed("inequality system has nontrivial lineality space");
    Mat<B> rays = detail::dd_rays(bk, cone.ineqs, cone.dim);
    // full-dimensional iff every inequality is strictly positive somewhere on
    // the cone; the sum of the extreme rays probes all of them at once
    if (rays.rows() == 0) throw NotFullDimensional("inequality cone has empty interior");
    Vec<B> probe = Vec<B>::Zero(cone.dim);
    for (int r = 0; r < rays.rows(); ++r) probe += rays.row(r);
    for (int i = 0; i < cone.ineqs.rows(); ++i)
        if (bk.sign(cone.ineqs.row(i).dot(probe)) <= 0)
            throw NotFullDimensional("inequality cone has empty interior");
    return ConeV<B>{cone.dim, std::move(rays)};
}

template <class B>
ConeV<B> dual_cone(const B& bk, const ConeV<B>& cone) {
    detail::check_v_cone(bk, cone);
    return ConeV<B>{cone.dim, detail::dd_rays(bk, cone.rays, cone.dim)};
}

template <class B>
bool cone_member(const B& bk, const ConeH<B>& cone, const Vec<B>& x) {
    if (x.size() != cone.dim) throw DimensionMismatch("vector dimension != cone dimension");
    for (int i = 0; i < cone.ineqs.rows(); ++i)
        if (bk.sign(cone.ineqs.row(i).dot(x)) < 0) return false;
    return true;
}

template <class B>
bool cone_member(const B& bk, const ConeV<B>& cone, const Vec<B>& x) {
    if (x.size() != cone.dim) throw DimensionMismatch("vector dimension != cone dimension");
    if constexpr (B::is_exact) {
        // nonnegative combination of generators, decided by LP feasibility
        const int k = static_cast<int>(cone.rays.rows());
        LinearProgram<B> lp;
        lp.nvars = k;
        for (int d = 0; d < cone.dim; ++d) {
            Vec<B> a(k);
            for (int j = 0; j < k; ++j) a(j) = cone.rays(j, d);
            lp.constraints.push_back({a, Rel::Eq, x(d)});
        }
        for (int j = 0; j < k; ++j) {
            Vec<B> a = Vec<B>::Zero(k);
            a(j) = 1;
            lp.constraints.push_back({a, Rel::Ge, typename B::Value(0)});
        }
        return lp_solve(bk, lp).status == LpStatus::Feasible;
    } else {
        return cone_member(bk, dd_convert(bk, cone), x);
    }
}

namespace detail {

// x in cone(rows)? LP feasibility, no pointedness assumptions.
template <class B>
bool in_nonneg_span(const B& bk, const Mat<B>& rows, const Vec<B>& x) {
    const int k = static_cast<int>(rows.rows());
    if (k == 0) return false;
    LinearProgram<B> lp;
    lp.nvars = k;
    for (int d = 0; d < rows.cols(); ++d) {
        Vec<B> a(k);
        for (int j = 0; j < k; ++j) a(j) = rows(j, d);
        lp.constraints.push_back({a, Rel::Eq, x(d)});
    }
    for (int j = 0; j < k; ++j) {
        Vec<B> a = Vec<B>::Zero(k);
        a(j) = 1;
        lp.constraints.push_back({a, Rel::Ge, typename B::Value(0)});
    }
    return lp_solve(bk, lp).status == LpStatus::Feasible;
}

}  // namespace detail

/// Canonicalizes and drops generators that are nonnegative combinations of the
/// others.
template <class B>
ConeV<B> reduce_cone(const B& bk, const ConeV<B>& cone) {
    Mat<B> rows = canonical_rows(bk, cone.rays);
    std::vector<int> keep;
    for (int i = 0; i < rows.rows(); ++i) {
        Mat<B> rest(rows.rows() - 1, cone.dim);
        int out = 0;
        for (int j = 0; j < rows.rows(); ++j)
            if (j != i) rest.row(out++) = rows.row(j);
        if (!detail::in_nonneg_span(bk, rest, Vec<B>(rows.row(i)))) keep.push_back(i);
    }
    Mat<B> kept(static_cast<int>(keep.size()), cone.dim);
    for (size_t i = 0; i < keep.size(); ++i) kept.row(static_cast<int>(i)) = rows.row(keep[i]);
    return ConeV<B>{cone.dim, kept};
}

}  // namespace gptlab
