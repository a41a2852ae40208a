#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "gptlab/errors.hpp"
#include "gptlab/linalg.hpp"
#include "gptlab/scalar.hpp"

namespace gptlab {

enum class Rel { Ge, Eq, Le };
enum class LpStatus { Feasible, Infeasible, Optimal, Unbounded };

template <class B>
struct Constraint {
    Vec<B> a;
    Rel rel = Rel::Ge;
    typename B::Value b{};
};

template <class B>
struct LinearProgram {
    int nvars = 0;
    std::vector<Constraint<B>> constraints;
    std::optional<Vec<B>> objective;  // absent: pure feasibility
    bool maximize = true;
};

template <class B>
struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::optional<Vec<B>> witness;
    std::optional<typename B::Value> optimum;
    // Farkas multipliers over the original constraints: sum_i y_i a_i = 0,
    // sum_i y_i b_i > 0, with y_i >= 0 on Ge rows, y_i <= 0 on Le rows.
    std::optional<Vec<B>> farkas;
};

template <class B>
bool satisfies(const B& bk, const LinearProgram<B>& lp, const Vec<B>& x) {
    for (const auto& c : lp.constraints) {
        typename B::Value lhs = c.a.dot(x);
        int s;
        if constexpr (B::is_exact) {
            s = bk.sign(lhs - c.b);
        } else {
            // float residuals grow with the dot-product magnitude, so the
            // acceptance band is relative to the constraint's scale
            double scale = std::abs(c.b);
            for (int j = 0; j < x.size(); ++j) scale += std::abs(c.a(j) * x(j));
            double r = lhs - c.b;
            s = std::abs(r) <= bk.eps * std::max(1.0, scale) ? 0 : (r > 0 ? 1 : -1);
        }
        if (c.rel == Rel::Ge && s < 0) return false;
        if (c.rel == Rel::Le && s > 0) return false;
        if (c.rel == Rel::Eq && s != 0) return false;
    }
    return true;
}

/// Re-checks a Farkas certificate independently of the solver state.
template <class B>
bool check_farkas(const B& bk, const LinearProgram<B>& lp, const Vec<B>& y) {
    if (y.size() != static_cast<Eigen::Index>(lp.constraints.size())) return false;
    Vec<B> combo = Vec<B>::Zero(lp.nvars);
    typename B::Value rhs{};
    for (size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& c = lp.constraints[i];
        int s = bk.sign(y(i));
        if (c.rel == Rel::Ge && s < 0) return false;
        if (c.rel == Rel::Le && s > 0) return false;
        combo += y(i) * c.a;
        rhs += y(i) * c.b;
    }
    for (int j = 0; j < lp.nvars; ++j)
        if (!bk.is_zero(combo(j))) return false;
    return bk.sign(rhs) > 0;
}

namespace detail {

// Dense tableau simplex over >= rows in standard form, Bland's rule.
template <class B>
class SimplexTableau {
  public:
    using Value = typename B::Value;

    SimplexTableau(const B& bk, const LinearProgram<B>& lp) : bk_(bk), n_(lp.nvars) {
        for (size_t i = 0; i < lp.constraints.size(); ++i) {
            const auto& c = lp.constraints[i];
            if (c.a.size() != n_)
                throw MalformedProgram("constraint dimension mismatch");
            if (c.rel != Rel::Le) add_row(c.a, c.b, static_cast<int>(i), 1);
            if (c.rel != Rel::Ge) add_row(-c.a, -c.b, static_cast<int>(i), -1);
        }
        m_ = m0_ = static_cast<int>(rows_.size());
        // columns: x+ (n), x- (n), slack (m), artificial (m)
        cols_ = 2 * n_ + 2 * m_;
        t_ = Mat<B>::Zero(m_ + 1, cols_ + 1);
        basis_.resize(m_);
        active_.resize(m_);
        for (int r = 0; r < m_; ++r) active_[r] = r;
        for (int r = 0; r < m_; ++r) {
            Value sigma = bk_.sign(rows_[r].b) < 0 ? Value(-1) : Value(1);
            row_sigma_.push_back(sigma);
            for (int j = 0; j < n_; ++j) {
                t_(r, j) = sigma * rows_[r].a(j);
                t_(r, n_ + j) = -sigma * rows_[r].a(j);
            }
            t_(r, 2 * n_ + r) = -sigma;           // slack: a.x - s = b
            t_(r, 2 * n_ + m_ + r) = 1;           // artificial
            t_(r, cols_) = sigma * rows_[r].b;
            basis_[r] = 2 * n_ + m_ + r;
        }
    }

    // Returns true when a feasible basis was found; on false, farkas_y_ holds
    // multipliers over the internal >= rows.
    bool phase1() {
        // objective: minimize sum of artificials
        cost_ = Vec<B>::Zero(cols_);
        for (int j = 2 * n_ + m_; j < cols_; ++j) cost_(j) = 1;
        t_.row(m_).setZero();
        for (int j = 2 * n_ + m_; j < cols_; ++j) t_(m_, j) = 1;
        for (int r = 0; r < m_; ++r) t_.row(m_) -= t_.row(r);  // price out basis
        iterate(cols_);  // artificials may leave and re-enter; Bland still terminates
        Value obj = -t_(m_, cols_);
        if (bk_.sign(obj) > 0) {
            // simplex multiplier of row r: y_r = cost(art_r) - reduced cost =
            // 1 - t(m, art_r); un-normalize with the row sign.
            farkas_y_ = Vec<B>::Zero(m_);
            for (int r = 0; r < m_; ++r)
                farkas_y_(r) = row_sigma_[r] * (Value(1) - t_(m_, 2 * n_ + m_ + r));
            return false;
        }
        // drive leftover artificials out of the basis
        for (int r = 0; r < m_; ++r) {
            if (basis_[r] < 2 * n_ + m_) continue;
            int piv = -1;
            for (int j = 0; j < 2 * n_ + m_; ++j)
                if (!bk_.is_zero(t_(r, j))) { piv = j; break; }
            if (piv >= 0) pivot(r, piv);
        }
        drop_redundant_rows();
        return true;
    }

    // real_objective over original variables; maximize flag handled by caller.
    void set_objective(const Vec<B>& c) {
        cost_ = Vec<B>::Zero(cols_);
        for (int j = 0; j < n_; ++j) {
            cost_(j) = c(j);
            cost_(n_ + j) = -c(j);
        }
        t_.row(m_).setZero();
        for (int j = 0; j < n_; ++j) {
            t_(m_, j) = c(j);
            t_(m_, n_ + j) = -c(j);
        }
        for (int r = 0; r < m_; ++r)
            if (!bk_.is_zero(t_(m_, basis_[r])))
                t_.row(m_) -= t_(m_, basis_[r]) * t_.row(r) / t_(r, basis_[r]);
    }

    // Phase-2 iteration, artificial columns barred. True: optimal; false: unbounded.
    bool phase2() { return iterate(2 * n_ + m_); }

    Vec<B> primal_solution() const {
        if constexpr (!B::is_exact) {
            // tableau entries drift over long pivot runs; re-solve the final
            // basis against the original rows when the basis is artificial-free
            if (auto x = refined_solution()) return *x;
        }
        Vec<B> x = Vec<B>::Zero(n_);
        for (int r = 0; r < m_; ++r) {
            int j = basis_[r];
            Value v = t_(r, cols_) / t_(r, j);
            if (j < n_) x(j) += v;
            else if (j < 2 * n_) x(j - n_) -= v;
        }
        return x;
    }

    Value objective_value() const { return -t_(m_, cols_); }

    /// Maps internal-row multipliers back onto original constraints.
    Vec<B> farkas_for(const LinearProgram<B>& lp) const {
        Vec<B> y = Vec<B>::Zero(static_cast<int>(lp.constraints.size()));
        for (int r = 0; r < m_; ++r)
            y(rows_[r].orig) += rows_[r].dir * farkas_y_(r);
        return y;
    }

    bool has_farkas() const { return farkas_y_.size() > 0; }

  private:
    // Basic solution of the current basis computed from the untouched input
    // rows (columns: x+ j, x- j, slack of row r). Empty when a row was dropped,
    // an artificial is still basic, or the basis matrix is singular.
    std::optional<Vec<B>> refined_solution() const {
        Mat<B> M = Mat<B>::Zero(m_, m_);
        for (int k = 0; k < m_; ++k) {
            int j = basis_[k];
            if (j < n_)
                for (int r = 0; r < m_; ++r) M(r, k) = rows_[active_[r]].a(j);
            else if (j < 2 * n_)
                for (int r = 0; r < m_; ++r) M(r, k) = -rows_[active_[r]].a(j - n_);
            else if (j < 2 * n_ + m0_) {
                auto it = std::find(active_.begin(), active_.end(), j - 2 * n_);
                if (it == active_.end()) return std::nullopt;
                M(static_cast<int>(it - active_.begin()), k) = Value(-1);
            } else
                return std::nullopt;
        }
        Eigen::FullPivLU<Mat<B>> lu(M);
        if (!lu.isInvertible()) return std::nullopt;
        Vec<B> b(m_);
        for (int r = 0; r < m_; ++r) b(r) = rows_[active_[r]].b;
        Vec<B> z = lu.solve(b);
        Vec<B> x = Vec<B>::Zero(n_);
        for (int k = 0; k < m_; ++k) {
            int j = basis_[k];
            if (j < n_) x(j) += z(k);
            else if (j < 2 * n_) x(j - n_) -= z(k);
        }
        return x;
    }

    struct Row {
        Vec<B> a;
        Value b;
        int orig;
        int dir;  // +1: row is a>=b as stated; -1: row is the negation of a Le/Eq
    };

    void add_row(Vec<B> a, Value b, int orig, int dir) {
        rows_.push_back(Row{std::move(a), std::move(b), orig, dir});
    }

    // Rows whose artificial could not leave the basis are redundant (all real
    // coefficients zero, rhs zero); keeping them would let the artificial grow
    // in phase 2.
    void drop_redundant_rows() {
        std::vector<int> keep;
        for (int r = 0; r < m_; ++r)
            if (basis_[r] < 2 * n_ + m_) keep.push_back(r);
        if (static_cast<int>(keep.size()) == m_) return;
        Mat<B> nt(static_cast<int>(keep.size()) + 1, cols_ + 1);
        std::vector<int> nb, na;
        for (size_t i = 0; i < keep.size(); ++i) {
            nt.row(static_cast<int>(i)) = t_.row(keep[i]);
            nb.push_back(basis_[keep[i]]);
            na.push_back(active_[keep[i]]);
        }
        nt.row(static_cast<int>(keep.size())) = t_.row(m_);
        t_ = std::move(nt);
        basis_ = std::move(nb);
        active_ = std::move(na);
        m_ = static_cast<int>(keep.size());
    }

    void pivot(int r, int j) {
        t_.row(r) /= t_(r, j);
        for (int i = 0; i <= m_; ++i) {
            if (i == r || bk_.is_zero(t_(i, j))) continue;
            t_.row(i) -= t_(i, j) * t_.row(r);
            t_(i, j) = 0;
        }
        basis_[r] = j;
    }

    // Rebuilds the tableau for the current basis from the untouched input rows
    // via one LU solve. Float pivot updates drift over long runs, enough to
    // steer later pivot choices wrong; periodic resets keep the error at the
    // scale of a single solve. False (tableau kept) on a singular basis.
    bool refactorize() {
        Mat<B> t0 = Mat<B>::Zero(m_, cols_ + 1);
        for (int r = 0; r < m_; ++r) {
            int o = active_[r];
            Value sigma = bk_.sign(rows_[o].b) < 0 ? Value(-1) : Value(1);
            for (int j = 0; j < n_; ++j) {
                t0(r, j) = sigma * rows_[o].a(j);
                t0(r, n_ + j) = -sigma * rows_[o].a(j);
            }
            t0(r, 2 * n_ + o) = -sigma;
            t0(r, 2 * n_ + m0_ + o) = 1;
            t0(r, cols_) = sigma * rows_[o].b;
        }
        Mat<B> bm(m_, m_);
        for (int k = 0; k < m_; ++k) bm.col(k) = t0.col(basis_[k]);
        Eigen::FullPivLU<Mat<B>> lu(bm);
        if (!lu.isInvertible()) return false;
        t_.topRows(m_) = lu.solve(t0);
        t_.row(m_).setZero();
        for (int j = 0; j < cols_; ++j) t_(m_, j) = cost_(j);
        for (int r = 0; r < m_; ++r) t_.row(m_) -= cost_(basis_[r]) * t_.row(r);
        return true;
    }

    // Bland: entering = lowest-index negative reduced cost; leaving = lowest
    // basic variable index among minimum-ratio rows. True on optimality.
    bool iterate(int allowed_cols) {
        int pivots = 0;
        bool fresh = false;  // tableau refactorized since the last pivot
        for (;;) {
            int enter = -1;
            for (int j = 0; j < allowed_cols; ++j)
                if (bk_.sign(t_(m_, j)) < 0) { enter = j; break; }
            if (enter < 0) {
                // only declare optimality on refreshed data
                if constexpr (!B::is_exact)
                    if (!fresh && refactorize()) { fresh = true; continue; }
                return true;
            }
            int leave = -1;
            Value best_num{}, best_den{};
            for (int r = 0; r < m_; ++r) {
                if (bk_.sign(t_(r, enter)) <= 0) continue;
                // ratio t(r,rhs)/t(r,enter); compare without division bias
                if (leave < 0 ||
                    bk_.sign(t_(r, cols_) * best_den - best_num * t_(r, enter)) < 0 ||
                    (bk_.sign(t_(r, cols_) * best_den - best_num * t_(r, enter)) == 0 &&
                     basis_[r] < basis_[leave])) {
                    leave = r;
                    best_num = t_(r, cols_);
                    best_den = t_(r, enter);
                }
            }
            if (leave < 0) {
                if constexpr (!B::is_exact)
                    if (!fresh && refactorize()) { fresh = true; continue; }
                return false;  // unbounded
            }
            pivot(leave, enter);
            fresh = false;
            ++pivots;
            if constexpr (!B::is_exact) {
                // Bland's termination argument needs consistent comparisons,
                // which float thresholds cannot guarantee; cap the run
                if (pivots > 2000 + 200 * m_)
                    throw InternalCheckFailure("simplex pivot limit exceeded");
                if (pivots % 25 == 0 && refactorize()) fresh = true;
            }
        }
    }

    const B bk_;
    int n_, m_ = 0, m0_ = 0, cols_ = 0;
    std::vector<Row> rows_;
    std::vector<Value> row_sigma_;
    Mat<B> t_;
    Vec<B> cost_;
    std::vector<int> basis_;
    std::vector<int> active_;  // original row index per current tableau row
    Vec<B> farkas_y_;
};

}  // namespace detail

template <class B>
LpResult<B> lp_solve(const B& bk, const LinearProgram<B>& lp) {
    if (lp.nvars <= 0) throw MalformedProgram("no variables");
    if (lp.objective && lp.objective->size() != lp.nvars)
        throw MalformedProgram("objective dimension mismatch");
    LpResult<B> res;
    detail::SimplexTableau<B> tab(bk, lp);
    if (!tab.phase1()) {
        res.status = LpStatus::Infeasible;
        res.farkas = tab.farkas_for(lp);
        if (!check_farkas(bk, lp, *res.farkas))
            throw InternalCheckFailure("Farkas certificate failed self-check");
        return res;
    }
    if (!lp.objective) {
        res.status = LpStatus::Feasible;
        res.witness = tab.primal_solution();
    } else {
        Vec<B> c = lp.maximize ? Vec<B>(-*lp.objective) : *lp.objective;
        tab.set_objective(c);
        if (!tab.phase2()) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        res.status = LpStatus::Optimal;
        res.witness = tab.primal_solution();
        typename B::Value opt = lp.objective->dot(*res.witness);
        res.optimum = opt;
    }
    if (!satisfies(bk, lp, *res.witness))
        throw InternalCheckFailure("LP witness failed self-check");
    return res;
}

}  // namespace gptlab
