#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gptlab/cone.hpp"
#include "gptlab/errors.hpp"

namespace gptlab {

/// A linear functional on the ambient space; proper iff valued in [0,1] on
/// every state.
template <class B>
struct Effect {
    Vec<B> covector;
};

/// System A: the polytope Omega_A given by its pure states, with the unit u
/// normalizing them.
template <class B>
struct StateSpace {
    std::string name;
    int dim = 0;
    Mat<B> vertices;  // rows; each lies in the slice u(x) = 1
    Vec<B> unit;
    B backend{};
    bool degenerate = false;  // fewer than two pure states
    std::optional<Mat<B>> fiducial_effects;  // two rows, used by the CHSH default
    std::string note;
};

template <class B>
struct Face {
    std::vector<int> vertex_indices;
};

/// Checks the state-space invariants; throws ValidationError naming the one
/// that failed.
template <class B>
void validate(const StateSpace<B>& s) {
    const B& bk = s.backend;
    if (s.dim <= 0 || s.vertices.rows() == 0 || s.vertices.cols() != s.dim ||
        s.unit.size() != s.dim)
        throw ValidationError("shape");
    for (int i = 0; i < s.vertices.rows(); ++i)
        if (!bk.eq(s.unit.dot(s.vertices.row(i)), typename B::Value(1)))
            throw ValidationError("unit", "u(v) != 1 at vertex " + std::to_string(i));
    if (rank_of(bk, s.vertices) < s.dim)
        throw ValidationError("full-dimensional", "cone over vertices does not span A");
    // extremality: no vertex is a convex combination of the others
    for (int i = 0; i < s.vertices.rows(); ++i) {
        Mat<B> others(s.vertices.rows() - 1, s.dim);
        int out = 0;
        for (int j = 0; j < s.vertices.rows(); ++j)
            if (j != i) others.row(out++) = s.vertices.row(j);
        // convexity is automatic: all candidates share u = 1
        if (others.rows() > 0 && detail::in_nonneg_span(bk, others, Vec<B>(s.vertices.row(i))))
            throw ValidationError("extremality", "vertex " + std::to_string(i) + " is not extreme");
    }
}

template <class B>
ConeV<B> state_cone(const StateSpace<B>& s) {
    return ConeV<B>{s.dim, canonical_rows(s.backend, s.vertices)};
}

/// Extremal rays of A_+^*, as covectors under the standard pairing.
template <class B>
ConeV<B> effect_cone(const StateSpace<B>& s) {
    return dual_cone(s.backend, state_cone(s));
}

template <class B>
bool is_proper_effect(const StateSpace<B>& s, const Effect<B>& e) {
    const B& bk = s.backend;
    for (int i = 0; i < s.vertices.rows(); ++i) {
        typename B::Value v = e.covector.dot(s.vertices.row(i));
        if (bk.sign(v) < 0 || bk.sign(v - typename B::Value(1)) > 0) return false;
    }
    return true;
}

/// Smallest face of Omega_A containing the listed vertices: the vertices lying
/// on every facet inequality tight at their barycenter.
template <class B>
Face<B> face_generated_by(const StateSpace<B>& s, const std::vector<int>& indices) {
    const B& bk = s.backend;
    if (indices.empty()) throw IndexOutOfRange("empty vertex set");
    for (int i : indices)
        if (i < 0 || i >= s.vertices.rows()) throw IndexOutOfRange("vertex index " + std::to_string(i));
    ConeH<B> h = dd_convert(bk, state_cone(s));
    Vec<B> bary = Vec<B>::Zero(s.dim);
    for (int i : indices) bary += s.vertices.row(i);
    bary /= typename B::Value(static_cast<int>(indices.size()));
    std::vector<int> tight;
    for (int r = 0; r < h.ineqs.rows(); ++r)
        if (bk.is_zero(h.ineqs.row(r).dot(bary))) tight.push_back(r);
    Face<B> f;
    for (int v = 0; v < s.vertices.rows(); ++v) {
        bool on = true;
        for (int r : tight)
            if (!bk.is_zero(h.ineqs.row(r).dot(s.vertices.row(v)))) { on = false; break; }
        if (on) f.vertex_indices.push_back(v);
    }
    return f;
}

/// Maximizes a linear functional over Omega_A by LP on the facet description.
/// Returns the optimum and the lowest-index maximizing vertex.
template <class B>
std::pair<typename B::Value, int> maximize_over_polytope(const Vec<B>& objective,
                                                         const StateSpace<B>& s) {
    const B& bk = s.backend;
    if (objective.size() != s.dim) throw DimensionMismatch("objective dimension != ambient dimension");
    ConeH<B> h = dd_convert(bk, state_cone(s));
    LinearProgram<B> lp;
    lp.nvars = s.dim;
    lp.objective = objective;
    for (int r = 0; r < h.ineqs.rows(); ++r)
        lp.constraints.push_back({Vec<B>(h.ineqs.row(r)), Rel::Ge, typename B::Value(0)});
    lp.constraints.push_back({s.unit, Rel::Eq, typename B::Value(1)});
    auto res = lp_solve(bk, lp);
    if (res.status != LpStatus::Optimal)
        throw InternalCheckFailure("polytope LP not optimal");
    for (int v = 0; v < s.vertices.rows(); ++v)
        if (bk.eq(objective.dot(s.vertices.row(v)), *res.optimum)) return {*res.optimum, v};
    throw InternalCheckFailure("LP optimum not attained at any vertex");
}

// ---- catalog ----

inline StateSpace<Exact> make_square() {
    StateSpace<Exact> s;
    s.name = "square";
    s.dim = 3;
    s.vertices = Mat<Exact>(4, 3);
    s.vertices << 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1;
    s.unit = Vec<Exact>(3);
    s.unit << 0, 0, 1;
    Mat<Exact> fid(2, 3);
    fid << Rational(1, 2), 0, Rational(1, 2), 0, Rational(1, 2), Rational(1, 2);
    s.fiducial_effects = fid;
    s.note = "the diamond form ngon:4 maps to this square by (x1,x2) -> (x1+x2, x1-x2)";
    return s;
}

inline StateSpace<Exact> make_simplex(int n) {
    if (n < 1) throw BadParameter("simplex needs n >= 1");
    StateSpace<Exact> s;
    s.name = "simplex:" + std::to_string(n);
    s.dim = n;
    s.vertices = Mat<Exact>::Identity(n, n);
    s.unit = Vec<Exact>::Constant(n, 1);
    s.degenerate = n < 2;
    if (n >= 2) {
        Mat<Exact> fid = Mat<Exact>::Zero(2, n);
        fid(0, 0) = 1;
        fid(1, 1) = 1;
        s.fiducial_effects = fid;
    }
    return s;
}

inline StateSpace<Exact> make_cube(int k) {
    if (k < 1) throw BadParameter("cube needs n >= 1");
    StateSpace<Exact> s;
    s.name = "cube:" + std::to_string(k);
    s.dim = k + 1;
    s.vertices = Mat<Exact>(1 << k, k + 1);
    for (int v = 0; v < (1 << k); ++v) {
        for (int b = 0; b < k; ++b) s.vertices(v, b) = (v >> b) & 1 ? 1 : -1;
        s.vertices(v, k) = 1;
    }
    s.unit = Vec<Exact>::Zero(k + 1);
    s.unit(k) = 1;
    return s;
}

using AnySpace = std::variant<StateSpace<Exact>, StateSpace<Approx>>;

/// Float copy of an exact space (for operations mixing the two backends).
inline StateSpace<Approx> to_approx(const StateSpace<Exact>& s, double eps = 1e-9) {
    StateSpace<Approx> out;
    out.backend.eps = eps;
    out.name = s.name;
    out.dim = s.dim;
    out.vertices = s.vertices.unaryExpr([](const Rational& v) { return Exact::to_double(v); });
    out.unit = s.unit.unaryExpr([](const Rational& v) { return Exact::to_double(v); });
    out.degenerate = s.degenerate;
    if (s.fiducial_effects)
        out.fiducial_effects =
            s.fiducial_effects->unaryExpr([](const Rational& v) { return Exact::to_double(v); });
    out.note = s.note;
    return out;
}
/// Regular n-gon with vertices (cos(2 pi k/n), sin(2 pi k/n), 1). Only n = 4
/// lands on rational coordinates under this parameterization, so every other n
/// uses the float backend.
inline AnySpace make_ngon(int n, double eps = 1e-9) {
    if (n < 3) throw BadParameter("ngon needs n >= 3");
    if (n == 4) {
        StateSpace<Exact> s;
        s.name = "ngon:4";
        s.dim = 3;
        s.vertices = Mat<Exact>(4, 3);
        s.vertices << 1, 0, 1, 0, 1, 1, -1, 0, 1, 0, -1, 1;
        s.unit = Vec<Exact>(3);
        s.unit << 0, 0, 1;
        s.note = "square of the catalog entry 'square' in rotated coordinates";
        return s;
    }
    StateSpace<Approx> s;
    s.backend.eps = eps;
    s.name = "ngon:" + std::to_string(n);
    s.dim = 3;
    s.vertices = Mat<Approx>(n, 3);
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * std::numbers::pi * k / n;
        s.vertices(k, 0) = std::cos(a);
        s.vertices(k, 1) = std::sin(a);
        s.vertices(k, 2) = 1.0;
    }
    s.unit = Vec<Approx>(3);
    s.unit << 0, 0, 1;
    return s;
}

}  // namespace gptlab
