#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <vector>

#include "gptlab/parallel.hpp"
#include "gptlab/symmetry.hpp"

namespace gptlab {

/// An ordered pair of pure states separated by a proper effect with
/// witness(v_i) = 1 and witness(v_j) = 0.
template <class B>
struct DistinguishablePair {
    int i = 0, j = 0;
    Effect<B> witness;
};

template <class B>
struct BitSymmetryVerdict {
    bool is_bit_symmetric = false;
    int orbit_count = 0;
    std::vector<DistinguishablePair<B>> orbit_representatives;
    bool transitive_on_pure_states = false;
    bool degenerate = false;  // single-point space: vacuously bit-symmetric
};

/// Feasibility of {e(v_i) = 1, e(v_j) = 0, 0 <= e(v_k) <= 1 for all k}.
template <class B>
std::optional<Effect<B>> distinguishing_effect(const StateSpace<B>& s, int i, int j) {
    const B& bk = s.backend;
    if (i < 0 || i >= s.vertices.rows() || j < 0 || j >= s.vertices.rows())
        throw IndexOutOfRange("vertex index out of range");
    if (i == j) throw NotDistinguishable("identical vertex indices");
    LinearProgram<B> lp;
    lp.nvars = s.dim;
    lp.constraints.push_back({Vec<B>(s.vertices.row(i)), Rel::Eq, typename B::Value(1)});
    lp.constraints.push_back({Vec<B>(s.vertices.row(j)), Rel::Eq, typename B::Value(0)});
    // effects are linear and states are mixtures of vertices, so vertex
    // constraints suffice
    for (int k = 0; k < s.vertices.rows(); ++k) {
        lp.constraints.push_back({Vec<B>(s.vertices.row(k)), Rel::Ge, typename B::Value(0)});
        lp.constraints.push_back({Vec<B>(s.vertices.row(k)), Rel::Le, typename B::Value(1)});
    }
    auto res = lp_solve(bk, lp);
    if (res.status != LpStatus::Feasible) return std::nullopt;
    return Effect<B>{*res.witness};
}

/// All ordered perfectly distinguishable pure pairs, sorted by (i, j).
template <class B>
std::vector<DistinguishablePair<B>> distinguishable_pairs(const StateSpace<B>& s, int jobs = 1) {
    const int n = static_cast<int>(s.vertices.rows());
    std::vector<std::pair<int, int>> candidates;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) candidates.emplace_back(i, j);
    std::vector<std::optional<Effect<B>>> found(candidates.size());
    parallel_for(jobs, static_cast<int>(candidates.size()), [&](int k) {
        found[k] = distinguishing_effect(s, candidates[k].first, candidates[k].second);
    });
    std::vector<DistinguishablePair<B>> pairs;
    for (size_t k = 0; k < candidates.size(); ++k)
        if (found[k]) pairs.push_back({candidates[k].first, candidates[k].second, *found[k]});
    return pairs;
}

/// The logical bit of a distinguishable pair: the smallest face containing it.
template <class B>
Face<B> logical_bit(const StateSpace<B>& s, const DistinguishablePair<B>& pair) {
    const B& bk = s.backend;
    typename B::Value wi = pair.witness.covector.dot(s.vertices.row(pair.i));
    typename B::Value wj = pair.witness.covector.dot(s.vertices.row(pair.j));
    if (!is_proper_effect(s, pair.witness) || !bk.eq(wi, typename B::Value(1)) || !bk.is_zero(wj))
        throw NotDistinguishable("witness does not separate the pair");
    return face_generated_by(s, {pair.i, pair.j});
}

/// Orbit count of the group action on ordered distinguishable pairs; verdict
/// true iff at most one orbit. Generators suffice for the orbit computation.
template <class B>
BitSymmetryVerdict<B> is_bit_symmetric(const StateSpace<B>& s, const PermutationGroup& group,
                                       int jobs = 1) {
    BitSymmetryVerdict<B> verdict;
    auto pairs = distinguishable_pairs(s, jobs);
    verdict.transitive_on_pure_states = is_transitive_on_vertices(s, group);
    if (s.vertices.rows() < 2) {
        verdict.degenerate = true;
        verdict.is_bit_symmetric = true;  // vacuous: no pair exists
        verdict.orbit_count = 0;
        return verdict;
    }
    std::map<std::pair<int, int>, int> index;
    for (size_t k = 0; k < pairs.size(); ++k) index[{pairs[k].i, pairs[k].j}] = static_cast<int>(k);
    std::vector<std::function<int(int)>> actions;
    for (const auto& p : group.generators)
        actions.emplace_back([&p, &index, &pairs](int k) {
            auto it = index.find({p[pairs[k].i], p[pairs[k].j]});
            return it == index.end() ? -1 : it->second;  // -1 trips ActionNotClosed
        });
    auto parts = orbits(static_cast<int>(pairs.size()), actions);
    verdict.orbit_count = static_cast<int>(parts.size());
    verdict.is_bit_symmetric = verdict.orbit_count <= 1;
    for (const auto& o : parts) verdict.orbit_representatives.push_back(pairs[o.front()]);
    return verdict;
}

template <class B>
BitSymmetryVerdict<B> is_bit_symmetric(const StateSpace<B>& s, const SymmetryGroup<B>& group,
                                       int jobs = 1) {
    return is_bit_symmetric(s, to_permutation_group(group), jobs);
}

}  // namespace gptlab
