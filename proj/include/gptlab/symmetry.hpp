#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "gptlab/state_space.hpp"

namespace gptlab {

/// A reversible transformation T: invertible linear map with T v_i = v_{perm(i)}
/// and u o T = u.
template <class B>
struct LinearSymmetry {
    Mat<B> matrix;
    std::vector<int> vertex_permutation;
};

template <class B>
struct SymmetryGroup {
    std::vector<LinearSymmetry<B>> elements;  // sorted by permutation
    std::vector<int> generator_indices;
};

namespace detail {

// d linearly independent vertices; exists whenever the state cone spans A.
template <class B>
std::vector<int> spanning_vertices(const B& bk, const StateSpace<B>& s) {
    std::vector<int> idx;
    Mat<B> acc(0, s.dim);
    for (int i = 0; i < s.vertices.rows() && static_cast<int>(idx.size()) < s.dim; ++i) {
        Mat<B> trial(acc.rows() + 1, s.dim);
        trial.topRows(acc.rows()) = acc;
        trial.row(acc.rows()) = s.vertices.row(i);
        if (rank_of(bk, trial) > acc.rows()) {
            acc = trial;
            idx.push_back(i);
        }
    }
    if (static_cast<int>(idx.size()) < s.dim)
        throw Degenerate("vertices do not span the ambient space");
    return idx;
}

}  // namespace detail

/// Permutation-invariant Gram matrix: G_ij = (v_i - m)^T Q^+ (v_j - m) with
/// Q the centered second-moment matrix. Every linear symmetry of the vertex
/// set preserves G, which drives the backtracking search.
template <class B>
Mat<B> canonical_form(const StateSpace<B>& s) {
    const B& bk = s.backend;
    const int n = static_cast<int>(s.vertices.rows());
    if (n < 1) throw Degenerate("no vertices");
    Vec<B> m = Vec<B>::Zero(s.dim);
    for (int i = 0; i < n; ++i) m += s.vertices.row(i);
    m /= typename B::Value(n);
    Mat<B> centered(n, s.dim);
    for (int i = 0; i < n; ++i) centered.row(i) = Vec<B>(s.vertices.row(i)) - m;
    // coordinates in a basis of the span, so Q is invertible there
    std::vector<int> pivots;
    Mat<B> red = centered;
    elimination(bk, red, &pivots);
    const int r = static_cast<int>(pivots.size());
    if (r == 0) {
        // single point (or all vertices equal): trivial Gram
        return Mat<B>::Zero(n, n);
    }
    Mat<B> bspan(s.dim, r);
    for (int j = 0; j < r; ++j) bspan.col(j) = red.row(j).transpose() / red(j, pivots[j]);
    // w_i = coordinates of centered vertex i in bspan
    Mat<B> w(n, r);
    for (int i = 0; i < n; ++i) {
        auto coords = solve_linear(bk, bspan, Vec<B>(centered.row(i)));
        if (!coords) throw Degenerate("centered vertex outside its own span");
        w.row(i) = *coords;
    }
    Mat<B> q = w.transpose() * w;
    auto qinv = invert(bk, q);
    if (!qinv) throw Degenerate("singular second-moment matrix");
    return w * (*qinv) * w.transpose();
}

namespace detail {

// Snaps Gram entries into equality classes (trivial for the exact backend).
template <class B>
std::vector<std::vector<int>> gram_classes(const B& bk, const Mat<B>& g) {
    const int n = static_cast<int>(g.rows());
    std::vector<typename B::Value> values;
    auto cls = [&](const typename B::Value& v) {
        for (size_t k = 0; k < values.size(); ++k)
            if (bk.eq(values[k], v)) return static_cast<int>(k);
        values.push_back(v);
        return static_cast<int>(values.size() - 1);
    };
    std::vector<std::vector<int>> out(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = cls(g(i, j));
    return out;
}

inline void search_permutations(const std::vector<std::vector<int>>& g, std::vector<int>& image,
                         std::vector<bool>& used, std::vector<std::vector<int>>& found) {
    const int n = static_cast<int>(g.size());
    int i = static_cast<int>(image.size());
    if (i == n) {
        found.push_back(image);
        return;
    }
    for (int q = 0; q < n; ++q) {
        if (used[q] || g[q][q] != g[i][i]) continue;
        bool ok = true;
        for (int j = 0; j < i && ok; ++j)
            ok = g[image[j]][q] == g[j][i] && g[q][image[j]] == g[i][j];
        if (!ok) continue;
        used[q] = true;
        image.push_back(q);
        search_permutations(g, image, used, found);
        image.pop_back();
        used[q] = false;
    }
}

}  // namespace detail

/// The symmetry group at the vertex-permutation level. Generators are
/// linearly verified on every vertex; all other permutations are certified as
/// products of generators, so they are genuine symmetries too.
struct PermutationGroup {
    std::vector<std::vector<int>> permutations;  // the whole group, sorted
    std::vector<std::vector<int>> generators;
    size_t order() const { return permutations.size(); }
};

namespace detail {

// solves T on a spanning vertex set; with verify, checks T v_i = v_{perm(i)}
// on every vertex and u o T = u
template <class B>
std::optional<Mat<B>> realize_permutation(const StateSpace<B>& s, const std::vector<int>& span,
                                          const Mat<B>& vinv, const std::vector<int>& perm,
                                          bool verify) {
    const B& bk = s.backend;
    Mat<B> target(s.dim, s.dim);
    for (int j = 0; j < s.dim; ++j) target.col(j) = s.vertices.row(perm[span[j]]).transpose();
    Mat<B> t = target * vinv;
    if (verify) {
        for (int i = 0; i < s.vertices.rows(); ++i) {
            Vec<B> mapped = t * Vec<B>(s.vertices.row(i));
            for (int j = 0; j < s.dim; ++j)
                if (!bk.eq(mapped(j), s.vertices(perm[i], j))) return std::nullopt;
        }
        Vec<B> ut = t.transpose() * s.unit;
        for (int j = 0; j < s.dim; ++j)
            if (!bk.eq(ut(j), s.unit(j))) return std::nullopt;
    }
    return t;
}

}  // namespace detail

/// All vertex permutations realizable as linear maps with T(Omega_A) =
/// Omega_A and u o T = u. Candidates come from the Gram backtracking search;
/// a greedy pass verifies new candidates linearly, keeps them as generators,
/// and closes under products, so elements are never stored with matrices and
/// large groups (e.g. the n! of a simplex) stay affordable.
template <class B>
PermutationGroup symmetry_permutations(const StateSpace<B>& s) {
    const B& bk = s.backend;
    const int n = static_cast<int>(s.vertices.rows());
    PermutationGroup group;
    std::vector<int> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    if (n == 1) {
        group.permutations = {identity};
        return group;
    }
    Mat<B> gram = canonical_form(s);
    auto classes = detail::gram_classes(bk, gram);
    std::vector<std::vector<int>> candidates;
    std::vector<int> image;
    std::vector<bool> used(n, false);
    detail::search_permutations(classes, image, used, candidates);

    auto span = detail::spanning_vertices(bk, s);
    Mat<B> vspan(s.dim, s.dim);
    for (int j = 0; j < s.dim; ++j) vspan.col(j) = s.vertices.row(span[j]).transpose();
    auto vinv = invert(bk, vspan);
    if (!vinv) throw Degenerate("spanning vertices not invertible");

    auto compose = [n](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> c(n);
        for (int i = 0; i < n; ++i) c[i] = a[b[i]];
        return c;
    };
    std::set<std::vector<int>> have{identity};
    for (const auto& p : candidates) {
        if (have.count(p)) continue;
        if (!detail::realize_permutation(s, span, *vinv, p, true)) continue;  // spurious candidate
        group.generators.push_back(p);
        // closure of the generated subgroup by breadth-first products
        std::vector<std::vector<int>> frontier = {p};
        have.insert(p);
        while (!frontier.empty()) {
            std::vector<std::vector<int>> next;
            for (const auto& f : frontier)
                for (const auto& g : group.generators)
                    for (const auto& c : {compose(f, g), compose(g, f)})
                        if (have.insert(c).second) next.push_back(c);
            frontier = std::move(next);
        }
    }
    group.permutations.assign(have.begin(), have.end());
    return group;
}

/// Matrix form of the full group. Every permutation is already certified by
/// symmetry_permutations, so the matrices are recovered by a plain solve on a
/// spanning vertex set. Memory is linear in the group order; prefer the
/// permutation-level API for factorial-sized groups.
template <class B>
SymmetryGroup<B> automorphism_group(const StateSpace<B>& s) {
    const B& bk = s.backend;
    SymmetryGroup<B> group;
    auto perms = symmetry_permutations(s);
    if (s.vertices.rows() == 1) {
        group.elements.push_back({Mat<B>::Identity(s.dim, s.dim), {0}});
        return group;
    }
    auto span = detail::spanning_vertices(bk, s);
    Mat<B> vspan(s.dim, s.dim);
    for (int j = 0; j < s.dim; ++j) vspan.col(j) = s.vertices.row(span[j]).transpose();
    auto vinv = invert(bk, vspan);
    if (!vinv) throw Degenerate("spanning vertices not invertible");
    for (const auto& p : perms.permutations) {
        auto t = detail::realize_permutation(s, span, *vinv, p, false);
        group.elements.push_back({std::move(*t), p});
    }
    for (const auto& g : perms.generators) {
        auto it = std::lower_bound(
            perms.permutations.begin(), perms.permutations.end(), g);
        group.generator_indices.push_back(static_cast<int>(it - perms.permutations.begin()));
    }
    return group;
}

/// Orbit partition of {0..count-1} under an index action. Orbits are sorted by
/// their smallest member, which is also the representative.
template <class Action>
std::vector<std::vector<int>> orbits(int count, const std::vector<Action>& actions) {
    std::vector<int> owner(count, -1);
    std::vector<std::vector<int>> parts;
    for (int start = 0; start < count; ++start) {
        if (owner[start] >= 0) continue;
        std::vector<int> orbit = {start};
        owner[start] = static_cast<int>(parts.size());
        for (size_t k = 0; k < orbit.size(); ++k) {
            for (const auto& act : actions) {
                int img = act(orbit[k]);
                if (img < 0 || img >= count) throw ActionNotClosed("action leaves the item set");
                if (owner[img] < 0) {
                    owner[img] = static_cast<int>(parts.size());
                    orbit.push_back(img);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        parts.push_back(std::move(orbit));
    }
    return parts;
}

template <class B>
PermutationGroup to_permutation_group(const SymmetryGroup<B>& g) {
    PermutationGroup p;
    for (const auto& e : g.elements) p.permutations.push_back(e.vertex_permutation);
    for (int i : g.generator_indices) p.generators.push_back(g.elements[i].vertex_permutation);
    return p;
}

/// Orbits of the group action on vertex indices; generators suffice because
/// forward closure under a finite group's generators reaches the whole orbit.
inline std::vector<std::vector<int>> vertex_orbits(int count, const PermutationGroup& g) {
    std::vector<std::function<int(int)>> actions;
    for (const auto& p : g.generators) actions.emplace_back([&p](int i) { return p[i]; });
    return orbits(count, actions);
}

template <class B>
bool is_transitive_on_vertices(const StateSpace<B>& s, const PermutationGroup& g) {
    return vertex_orbits(static_cast<int>(s.vertices.rows()), g).size() <= 1;
}

template <class B>
bool is_transitive_on_vertices(const StateSpace<B>& s, const SymmetryGroup<B>& g) {
    return is_transitive_on_vertices(s, to_permutation_group(g));
}

}  // namespace gptlab
