#pragma once

#include <optional>
#include <random>

#include "gptlab/bit_symmetry.hpp"
#include "gptlab/cone.hpp"

namespace gptlab {

/// Splitting A = span(mu) + {u = 0}: x = u(x) mu + hat(x).
template <class B>
struct BlochDecomposition {
    Vec<B> mu;        // maximally mixed state, u(mu) = 1, fixed by the group
    Mat<B> hat_basis; // columns span the traceless subspace {x : u(x) = 0}
    Vec<B> unit;

    typename B::Value weight(const Vec<B>& x) const { return unit.dot(x); }
    Vec<B> hat(const Vec<B>& x) const { return x - unit.dot(x) * mu; }
};

/// The invariant inner product of the pipeline: a group-invariant form on the
/// traceless subspace, its minimal vertex overlap c, the mixing weight
/// lambda = -c/(1-c), and the assembled form <x,y> = lambda u(x)u(y) +
/// (1-lambda)(hat x, hat y) on all of A.
template <class B>
struct InnerProductForm {
    Mat<B> hat_form;  // (x,y) = hat(x)^T hat_form hat(y); invariant, vertices unit norm
    typename B::Value c;
    typename B::Value lambda;
    Mat<B> full_form;  // <x,y> = x^T full_form y
    bool unique_up_to_scale = false;
};

template <class B>
struct SelfDualityCertificate {
    bool is_self_dual = false;
    InnerProductForm<B> form;
    // on failure: an extremal effect whose vector representative leaves the
    // state cone, or a vertex whose functional leaves the effect cone
    std::optional<Vec<B>> offending_effect;
    std::optional<int> offending_vertex;
};

struct StatementsReport {
    bool advisory = false;  // space not bit-symmetric: statements not implied
    bool overlaps_in_range = false;       // (i)  c <= (w,f) <= 1 with c < 0
    bool minimal_overlap_distinguishes = false;  // (ii) overlap = c => distinguishable
    bool distinguishable_have_minimal_overlap = false;  // (iii)
    bool unit_norm_on_vertices = false;   // <w,w> = 1 for pure states
    bool zero_on_distinguishable = false; // <w,f> = 0 on distinguishable pairs
    bool nonnegative_on_states = false;   // <w,f> >= 0 for all vertex pairs
    bool c_attained = false;
    bool all_pass() const {
        return overlaps_in_range && minimal_overlap_distinguishes &&
               distinguishable_have_minimal_overlap && unit_norm_on_vertices &&
               zero_on_distinguishable && nonnegative_on_states && c_attained;
    }
};

/// Average of the group orbit of vertex 0 (the finite-group form of the Haar
/// integral). Requires a transitive action, so the result is the centroid of
/// the vertex set and independent of the base vertex.
template <class B>
Vec<B> maximally_mixed(const StateSpace<B>& s, const SymmetryGroup<B>& group) {
    const B& bk = s.backend;
    if (!is_transitive_on_vertices(s, group))
        throw NotTransitive("group does not act transitively on pure states");
    std::set<int> orbit;
    for (const auto& e : group.elements) orbit.insert(e.vertex_permutation[0]);
    Vec<B> mu = Vec<B>::Zero(s.dim);
    for (int i : orbit) mu += s.vertices.row(i);
    mu /= typename B::Value(static_cast<int>(orbit.size()));
    for (const auto& e : group.elements) {
        Vec<B> img = e.matrix * mu;
        for (int j = 0; j < s.dim; ++j)
            if (!bk.eq(img(j), mu(j))) throw InternalCheckFailure("mixed state not group-fixed");
    }
    if (!bk.eq(s.unit.dot(mu), typename B::Value(1)))
        throw InternalCheckFailure("mixed state not normalized");
    return mu;
}

template <class B>
BlochDecomposition<B> bloch_decomposition(const StateSpace<B>& s, const SymmetryGroup<B>& group) {
    BlochDecomposition<B> d;
    d.mu = maximally_mixed(s, group);
    d.unit = s.unit;
    Mat<B> urow(1, s.dim);
    urow.row(0) = s.unit;
    d.hat_basis = kernel_basis(s.backend, urow);
    return d;
}

namespace detail {

// Group average of x^T seed y, rescaled so vertex Bloch vectors have unit
// norm. Invariance follows from averaging; the rescaling is the paper's
// normalization convention.
template <class B>
Mat<B> averaged_form(const StateSpace<B>& s, const SymmetryGroup<B>& group,
                     const BlochDecomposition<B>& bloch, const Mat<B>& seed) {
    const B& bk = s.backend;
    Mat<B> m = Mat<B>::Zero(s.dim, s.dim);
    for (const auto& e : group.elements) m += e.matrix.transpose() * seed * e.matrix;
    m /= typename B::Value(static_cast<int>(group.elements.size()));
    Vec<B> h0 = bloch.hat(Vec<B>(s.vertices.row(0)));
    typename B::Value norm = h0.dot(m * h0);
    if (bk.sign(norm) <= 0) throw Degenerate("vertex Bloch vector has no length");
    m /= norm;
    for (int i = 1; i < s.vertices.rows(); ++i) {
        Vec<B> h = bloch.hat(Vec<B>(s.vertices.row(i)));
        if (!bk.eq(h.dot(m * h), typename B::Value(1)))
            throw InternalCheckFailure("vertex Bloch norms unequal after averaging");
    }
    return m;
}

}  // namespace detail

template <class B>
InnerProductForm<B> invariant_inner_product(const StateSpace<B>& s, const SymmetryGroup<B>& group) {
    const B& bk = s.backend;
    if (s.degenerate || s.vertices.rows() < 2)
        throw Degenerate("single-point space has no Bloch sphere");
    auto bloch = bloch_decomposition(s, group);

    InnerProductForm<B> form;
    form.hat_form = detail::averaged_form(s, group, bloch, Mat<B>(Mat<B>::Identity(s.dim, s.dim)));

    const int n = static_cast<int>(s.vertices.rows());
    std::vector<Vec<B>> hats;
    for (int i = 0; i < n; ++i) hats.push_back(bloch.hat(Vec<B>(s.vertices.row(i))));
    form.c = typename B::Value(1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            typename B::Value ov = hats[i].dot(form.hat_form * hats[j]);
            if (bk.lt(ov, form.c)) form.c = ov;
        }
    form.lambda = -form.c / (typename B::Value(1) - form.c);

    // <x,y> = lambda u(x)u(y) + (1-lambda)(hat x, hat y), with hat = P x for
    // the projector P = I - mu u^T
    Mat<B> p = Mat<B>::Identity(s.dim, s.dim) - bloch.mu * s.unit.transpose();
    form.full_form = form.lambda * (s.unit * s.unit.transpose()) +
                     (typename B::Value(1) - form.lambda) * (p.transpose() * form.hat_form * p);

    // uniqueness up to scale: average from an unrelated positive seed and
    // compare the restrictions to the traceless subspace
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> coef(-3, 3);
    Mat<B> r(s.dim, s.dim);
    for (int i = 0; i < s.dim; ++i)
        for (int j = 0; j < s.dim; ++j) r(i, j) = typename B::Value(coef(rng));
    Mat<B> seed = r.transpose() * r + typename B::Value(s.dim) * Mat<B>::Identity(s.dim, s.dim);
    Mat<B> alt = detail::averaged_form(s, group, bloch, seed);
    Mat<B> res1 = bloch.hat_basis.transpose() * form.hat_form * bloch.hat_basis;
    Mat<B> res2 = bloch.hat_basis.transpose() * alt * bloch.hat_basis;
    form.unique_up_to_scale = true;
    for (int i = 0; i < res1.rows() && form.unique_up_to_scale; ++i)
        for (int j = 0; j < res1.cols() && form.unique_up_to_scale; ++j)
            form.unique_up_to_scale = bk.eq(res1(i, j), res2(i, j));
    return form;
}

/// E_omega(x) = u(x) * ((hat omega, hat x / u(x)) - c)/(1-c) = <omega, x>, so
/// the covector is just full_form applied to the vertex.
template <class B>
Effect<B> e_omega(const StateSpace<B>& s, const InnerProductForm<B>& form, int vertex) {
    if (vertex < 0 || vertex >= s.vertices.rows()) throw IndexOutOfRange("vertex index");
    Effect<B> e{form.full_form * Vec<B>(s.vertices.row(vertex))};
    const B& bk = s.backend;
    if (!is_proper_effect(s, e) || !bk.eq(e.covector.dot(s.vertices.row(vertex)), typename B::Value(1)))
        throw InternalCheckFailure("E_omega is not a proper effect with E(omega)=1");
    return e;
}

/// Checks A+* = A+ under the identification F(x) = <rep(F), x>: every
/// extremal effect ray must map into the state cone, and every vertex
/// functional must lie in the effect cone.
template <class B>
SelfDualityCertificate<B> verify_self_dual(const StateSpace<B>& s, const InnerProductForm<B>& form) {
    const B& bk = s.backend;
    SelfDualityCertificate<B> cert;
    cert.form = form;
    cert.is_self_dual = true;
    auto inv = invert(bk, form.full_form);
    if (!inv) throw Degenerate("inner product form is singular");
    ConeH<B> state_h = dd_convert(bk, state_cone(s));
    ConeV<B> effects = effect_cone(s);
    for (int r = 0; r < effects.rays.rows() && cert.is_self_dual; ++r) {
        Vec<B> rep = (*inv) * Vec<B>(effects.rays.row(r));
        if (!cone_member(bk, state_h, rep)) {
            cert.is_self_dual = false;
            cert.offending_effect = canonical_vec(bk, Vec<B>(effects.rays.row(r)));
        }
    }
    for (int i = 0; i < s.vertices.rows() && cert.is_self_dual; ++i) {
        Vec<B> func = form.full_form * Vec<B>(s.vertices.row(i));
        // membership in A+* means nonnegativity on every state
        for (int k = 0; k < s.vertices.rows(); ++k)
            if (bk.sign(func.dot(s.vertices.row(k))) < 0) {
                cert.is_self_dual = false;
                cert.offending_vertex = i;
                break;
            }
    }
    return cert;
}

/// Statements (i)-(iii) plus the advertised properties of the full form.
template <class B>
StatementsReport check_statements(const StateSpace<B>& s, const SymmetryGroup<B>& group,
                                  const InnerProductForm<B>& form, int jobs = 1) {
    const B& bk = s.backend;
    const typename B::Value one(1), zero(0);
    StatementsReport rep;
    rep.advisory = !is_bit_symmetric(s, group, jobs).is_bit_symmetric;

    auto bloch = bloch_decomposition(s, group);
    const int n = static_cast<int>(s.vertices.rows());
    std::vector<Vec<B>> hats;
    for (int i = 0; i < n; ++i) hats.push_back(bloch.hat(Vec<B>(s.vertices.row(i))));

    std::set<std::pair<int, int>> dist;
    for (const auto& p : distinguishable_pairs(s, jobs)) dist.insert({p.i, p.j});

    rep.overlaps_in_range = bk.sign(form.c) < 0 || dist.empty();
    rep.minimal_overlap_distinguishes = true;
    rep.distinguishable_have_minimal_overlap = true;
    rep.unit_norm_on_vertices = true;
    rep.zero_on_distinguishable = true;
    rep.nonnegative_on_states = true;
    rep.c_attained = false;
    for (int i = 0; i < n; ++i) {
        rep.unit_norm_on_vertices = rep.unit_norm_on_vertices &&
            bk.eq(Vec<B>(s.vertices.row(i)).dot(form.full_form * Vec<B>(s.vertices.row(i))), one);
        for (int j = 0; j < n; ++j) {
            typename B::Value ov = hats[i].dot(form.hat_form * hats[j]);
            typename B::Value full = Vec<B>(s.vertices.row(i)).dot(form.full_form * Vec<B>(s.vertices.row(j)));
            if (bk.lt(ov, form.c) || bk.lt(one, ov)) rep.overlaps_in_range = false;
            if (bk.eq(ov, form.c)) {
                rep.c_attained = true;
                if (i != j && !dist.count({i, j})) rep.minimal_overlap_distinguishes = false;
            }
            if (dist.count({i, j})) {
                if (!bk.eq(ov, form.c)) rep.distinguishable_have_minimal_overlap = false;
                if (!bk.is_zero(full)) rep.zero_on_distinguishable = false;
            }
            if (bk.sign(full) < 0) rep.nonnegative_on_states = false;
        }
    }
    return rep;
}

/// Positive definiteness: exact backend checks elimination pivots (equivalent
/// to leading principal minors), float backend checks eigenvalues.
template <class B>
bool is_positive_definite(const B& bk, Mat<B> m) {
    if constexpr (std::is_same_v<typename B::Value, double>) {
        Eigen::SelfAdjointEigenSolver<Mat<B>> es(m);
        return es.eigenvalues().minCoeff() > bk.eps;
    } else {
        const int d = static_cast<int>(m.rows());
        for (int k = 0; k < d; ++k) {
            if (bk.sign(m(k, k)) <= 0) return false;
            for (int i = k + 1; i < d; ++i) {
                typename B::Value f = m(i, k) / m(k, k);
                m.row(i) -= f * m.row(k);
            }
        }
        return true;
    }
}

/// Invariance of the full form under every group element, on the standard
/// basis (a spanning set of vector pairs).
template <class B>
bool is_invariant_form(const StateSpace<B>& s, const SymmetryGroup<B>& group,
                       const InnerProductForm<B>& form) {
    const B& bk = s.backend;
    for (const auto& e : group.elements) {
        Mat<B> pulled = e.matrix.transpose() * form.full_form * e.matrix;
        for (int i = 0; i < s.dim; ++i)
            for (int j = 0; j < s.dim; ++j)
                if (!bk.eq(pulled(i, j), form.full_form(i, j))) return false;
    }
    return true;
}

}  // namespace gptlab
