#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/expr.hpp"
#include "liouville/matrix.hpp"
#include "liouville/ncbell.hpp"
#include "liouville/wronskian.hpp"

namespace liouville {

struct Tolerances {
    double rel = 1e-8;
    double abs_floor = 1e-10;

    bool accept(double abs, double rel_res) const { return abs <= abs_floor || rel_res <= rel; }
};

struct PointResidual {
    double t;
    double abs_res;
    double rel_res;
};

/// Outcome of checking one identity over a set of sample points.
/// verdict is pass iff at least one point was evaluated and the worst
/// per-point residual clears the tolerance.
struct VerificationReport {
    std::string identity;
    Tolerances tol;
    std::vector<PointResidual> points;
    std::vector<SkippedPoint> skipped;
    double max_abs = 0.0;
    double max_rel = 0.0;
    double worst_t = std::numeric_limits<double>::quiet_NaN();
    bool passed = false;

    void add_point(double t, double abs, double rel) {
        points.push_back({t, abs, rel});
        if (rel >= max_rel) {
            max_rel = rel;
            worst_t = t;
        }
        max_abs = std::max(max_abs, abs);
    }

    void finalize() { passed = !points.empty() && tol.accept(max_abs, max_rel); }
};

/// n x n matrix of parsed entry functions (row-major).
struct MatrixFunctionSpec {
    int n;
    std::vector<FunctionSpec> entries;

    MatrixFunctionSpec(int dim, std::vector<FunctionSpec> ents) : n(dim), entries(std::move(ents)) {
        if (n < 1 || static_cast<int>(entries.size()) != n * n)
            throw Error(ErrorKind::dimension_mismatch, "matrix function needs n*n entries");
    }

    static MatrixFunctionSpec parse_all(int n, const std::vector<std::string>& sources) {
        std::vector<FunctionSpec> ents;
        ents.reserve(sources.size());
        for (const auto& s : sources) ents.emplace_back(s);
        return MatrixFunctionSpec(n, std::move(ents));
    }

    JetMatrix eval(double t0, int order) const {
        JetMatrix m(n, n, Jet(t0, order));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = entries[static_cast<std::size_t>(i * n + j)].eval_jet(t0, order);
        return m;
    }
};

namespace detail {

inline double rel_residual(double abs, double ref_scale) { return abs / (1.0 + std::abs(ref_scale)); }

inline double max_abs_entry(const Matrix<double>& m) {
    double v = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v = std::max(v, std::abs(m.at(i, j)));
    return v;
}

}  // namespace detail

/// Checks the derivative recursion for evaluated Bell polynomials,
///   B_{j+1}(X, ..., X^(j)) = X B_j(X, ..., X^(j-1)) + (B_j(X, ..., X^(j-1)))',
/// entrywise at each point for every j <= j_max. The right-hand side is
/// assembled from the evaluated B_j by jet differentiation, independently of
/// the left-hand expansion.
inline VerificationReport verify_bell_derivative_identity(const MatrixFunctionSpec& x_spec,
                                                          int j_max,
                                                          const std::vector<double>& points,
                                                          Tolerances tol = {}) {
    if (j_max + 1 > kDefaultMaxBellOrder)
        throw Error(ErrorKind::order_limit_exceeded,
                    "j_max " + std::to_string(j_max) + " needs Bell index " + std::to_string(j_max + 1) +
                        " beyond the order cap " + std::to_string(kDefaultMaxBellOrder));
    VerificationReport rep;
    rep.identity = "bell-derivative-identity";
    rep.tol = tol;
    const BellTable bell(j_max + 1);
    for (double t : points) {
        try {
            const JetMatrix x = x_spec.eval(t, j_max + 1);
            double abs = 0.0, rel = 0.0;
            for (int j = 0; j <= j_max; ++j) {
                const JetMatrix bj = bell_eval_jets(bell[j], x);
                const Matrix<double> lhs = values(bell_eval_jets(bell[j + 1], x));
                const Matrix<double> rhs = values(x) * values(bj) + values(derivative(bj));
                const double a = detail::max_abs_entry(lhs - rhs);
                abs = std::max(abs, a);
                rel = std::max(rel, detail::rel_residual(a, detail::max_abs_entry(rhs)));
            }
            rep.add_point(t, abs, rel);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::domain_violation) throw;
            rep.skipped.push_back({t, "domain-violation"});
        }
    }
    rep.finalize();
    return rep;
}

/// Checks Y_f^(j) = Y_f B_j(X_a, ..., X_a^(j-1)) entrywise for j <= j_max.
/// The left side comes from repeated jet differentiation of the frame, the
/// right side from the Bell evaluation against the companion matrix.
inline VerificationReport verify_frame_derivative_formula(const Frame& f,
                                                          const CoefficientVector& a, int j_max,
                                                          const std::vector<double>& points,
                                                          Tolerances tol = {}) {
    if (f.n() != a.n()) throw Error(ErrorKind::dimension_mismatch, "frame and coefficients disagree on n");
    if (j_max > kDefaultMaxBellOrder)
        throw Error(ErrorKind::order_limit_exceeded,
                    "j_max " + std::to_string(j_max) + " exceeds the Bell order cap " +
                        std::to_string(kDefaultMaxBellOrder));
    VerificationReport rep;
    rep.identity = "frame-derivative-formula";
    rep.tol = tol;
    const BellTable bell(j_max);
    for (double t : points) {
        try {
            JetMatrix y = frame_matrix(f, t, j_max);
            const JetMatrix x = companion_matrix(a, t, j_max);
            const Matrix<double> y0 = values(y);
            double abs = 0.0, rel = 0.0;
            for (int j = 0; j <= j_max; ++j) {
                const Matrix<double> lhs = values(y);  // y differentiated j times so far
                const Matrix<double> rhs = y0 * values(bell_eval_jets(bell[j], x));
                const double a_res = detail::max_abs_entry(lhs - rhs);
                abs = std::max(abs, a_res);
                rel = std::max(rel, detail::rel_residual(a_res, detail::max_abs_entry(lhs)));
                if (j < j_max) y = derivative(y);
            }
            rep.add_point(t, abs, rel);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::domain_violation) throw;
            rep.skipped.push_back({t, "domain-violation"});
        }
    }
    rep.finalize();
    return rep;
}

/// Cross-checks the Bell-formula route for W_f^k against the direct
/// determinant for every requested multi-index. With no coefficient vector
/// given, the coefficients are reconstructed from the frame first.
inline VerificationReport verify_wronskian_formula(const Frame& f,
                                                   const std::optional<CoefficientVector>& a,
                                                   const std::vector<MultiIndex>& ks,
                                                   const std::vector<double>& points,
                                                   Tolerances tol = {}) {
    VerificationReport rep;
    rep.identity = "wronskian-formula";
    rep.tol = tol;
    const bool auto_mode = !a.has_value();
    const CoefficientSource src =
        auto_mode ? CoefficientSource::reconstructed(f) : CoefficientSource::from_expressions(*a);
    std::vector<double> pts = points;
    if (auto_mode) {
        UsablePoints up = filter_usable(f, points);
        pts = up.usable;
        rep.skipped = up.skipped;
    }
    for (double t : pts) {
        try {
            double abs = 0.0, rel = 0.0;
            for (const MultiIndex& k : ks) {
                const double direct = wronskian_direct(f, k, t);
                const double via_bell = wronskian_via_bell(f, src, k, t);
                const double a_res = std::abs(direct - via_bell);
                abs = std::max(abs, a_res);
                rel = std::max(rel, detail::rel_residual(a_res, direct));
            }
            rep.add_point(t, abs, rel);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::domain_violation) throw;
            rep.skipped.push_back({t, "domain-violation"});
        }
    }
    rep.finalize();
    return rep;
}

namespace detail {

/// a_i(t) and its first two derivatives, with the zero-extension
/// a_{n+1} = a_{n+2} = 0 built in.
struct CoefficientValues {
    int n;
    std::vector<double> a0, a1, a2;  // value, first, second derivative

    double value(int i) const { return i <= n ? a0[static_cast<std::size_t>(i - 1)] : 0.0; }
    double d1(int i) const { return i <= n ? a1[static_cast<std::size_t>(i - 1)] : 0.0; }
    double d2(int i) const { return i <= n ? a2[static_cast<std::size_t>(i - 1)] : 0.0; }
};

inline CoefficientValues coefficient_values(const CoefficientVector& a, double t0) {
    CoefficientValues out;
    out.n = a.n();
    for (const auto& comp : a.spec.components) {
        const Jet j = comp.eval_jet(t0, 2);
        out.a0.push_back(j.derivative(0));
        out.a1.push_back(j.derivative(1));
        out.a2.push_back(j.derivative(2));
    }
    return out;
}

}  // namespace detail

/// Checks the closed forms for W_f^(n+d, n-1, ..., j+1, j-1, ..., 0) with
/// d in {0, 1, 2}: the single Bell column reduces to explicit combinations
/// of the coefficients and their derivatives.
inline VerificationReport verify_shifted_wronskian(const Frame& f, const CoefficientVector& a,
                                                   int d, const std::vector<double>& points,
                                                   Tolerances tol = {}) {
    if (d < 0 || d > 2)
        throw Error(ErrorKind::smoothness_budget_exceeded, "closed forms are implemented for d = 0, 1, 2");
    if (a.smoothness >= 0 && d > a.smoothness - 1)
        throw Error(ErrorKind::smoothness_budget_exceeded,
                    "d = " + std::to_string(d) + " needs smoothness " + std::to_string(d + 1));
    const int n = f.n();
    if (n != a.n()) throw Error(ErrorKind::dimension_mismatch, "frame and coefficients disagree on n");
    VerificationReport rep;
    rep.identity = "shifted-wronskian-d" + std::to_string(d);
    rep.tol = tol;
    for (double t : points) {
        try {
            const detail::CoefficientValues cv = detail::coefficient_values(a, t);
            const double w = wronskian(f, t);
            double abs = 0.0, rel = 0.0;
            for (int j = 0; j < n; ++j) {
                std::vector<int> kvec;
                kvec.push_back(n + d);
                for (int q = n - 1; q >= 0; --q)
                    if (q != j) kvec.push_back(q);
                const double direct = wronskian_direct(f, MultiIndex(std::move(kvec)), t);

                const int r = n - j;
                double h = 0.0;
                switch (d) {
                    case 0: h = cv.value(r); break;
                    case 1: h = cv.value(1) * cv.value(r) + cv.value(r + 1) + cv.d1(r); break;
                    case 2:
                        h = cv.value(1) * cv.value(1) * cv.value(r) + cv.value(1) * cv.value(r + 1) +
                            cv.value(2) * cv.value(r) + cv.value(r + 2) + cv.value(1) * cv.d1(r) +
                            2.0 * cv.d1(1) * cv.value(r) + 2.0 * cv.d1(r + 1) + cv.d2(r);
                        break;
                }
                const double sign = ((n - j - 1) % 2 == 0) ? 1.0 : -1.0;
                const double closed = sign * w * h;

                const double a_res = std::abs(direct - closed);
                abs = std::max(abs, a_res);
                rel = std::max(rel, detail::rel_residual(a_res, direct));
            }
            rep.add_point(t, abs, rel);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::domain_violation) throw;
            rep.skipped.push_back({t, "domain-violation"});
        }
    }
    rep.finalize();
    return rep;
}

/// W_f' = a_1 W_f, with the derivative taken through jets. This is a
/// different route than the shifted-wronskian d=0 check, which compares
/// determinants instead of differentiating.
inline VerificationReport verify_abel_liouville(const Frame& f, const CoefficientVector& a,
                                                const std::vector<double>& points,
                                                Tolerances tol = {}) {
    const int n = f.n();
    if (n != a.n()) throw Error(ErrorKind::dimension_mismatch, "frame and coefficients disagree on n");
    VerificationReport rep;
    rep.identity = "abel-liouville";
    rep.tol = tol;
    for (double t : points) {
        try {
            const Jet w = wronskian_jet(f, MultiIndex::classical(n), t, 1);
            const double w_prime = w.derivative(1);
            const double a1 = a.spec.components[0].eval(t);
            const double abs = std::abs(w_prime - a1 * w.value());
            rep.add_point(t, abs, detail::rel_residual(abs, w.value()));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::domain_violation) throw;
            rep.skipped.push_back({t, "domain-violation"});
        }
    }
    rep.finalize();
    return rep;
}

/// Checks that every component of the frame satisfies the reconstructed
/// monic equation y^(n) = sum_j Phi_f^[j] y^(j).
inline VerificationReport verify_ode_residual(const Frame& f, const std::vector<double>& points,
                                              Tolerances tol = {}) {
    const int n = f.n();
    VerificationReport rep;
    rep.identity = "ode-residual";
    rep.tol = tol;
    UsablePoints up = filter_usable(f, points);
    rep.skipped = up.skipped;
    for (double t : up.usable) {
        std::vector<double> phis;
        phis.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) phis.push_back(phi(f, j, t));
        double abs = 0.0, rel = 0.0;
        for (const auto& comp : f.spec.components) {
            const Jet cj = comp.eval_jet(t, n);
            double rhs = 0.0;
            for (int j = 0; j < n; ++j) rhs += phis[static_cast<std::size_t>(j)] * cj.derivative(j);
            const double lhs = cj.derivative(n);
            const double a_res = std::abs(lhs - rhs);
            abs = std::max(abs, a_res);
            rel = std::max(rel, detail::rel_residual(a_res, lhs));
        }
        rep.add_point(t, abs, rel);
    }
    rep.finalize();
    return rep;
}

/// Result of the range-equivalence decision f ~ g  <=>  f = A g.
struct EquivalenceResult {
    bool equivalent = false;
    std::optional<Matrix<double>> A;
    double max_phi_mismatch = 0.0;
    double max_validation_residual = 0.0;
    // witness of the first failed phi comparison, when not equivalent
    int witness_j = -1;
    double witness_t = std::numeric_limits<double>::quiet_NaN();
    double witness_phi_f = 0.0;
    double witness_phi_g = 0.0;
    std::vector<SkippedPoint> skipped;
};

namespace detail {

inline double norm_inf(const Matrix<double>& m) {
    double best = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (int j = 0; j < m.cols(); ++j) row += std::abs(m.at(i, j));
        best = std::max(best, row);
    }
    return best;
}

inline Matrix<double> inverse(Matrix<double> m) {
    const int n = m.rows();
    Matrix<double> inv = Matrix<double>::identity(n, 1.0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m.at(i, k)) > std::abs(m.at(piv, k))) piv = i;
        if (m.at(piv, k) == 0.0)
            throw Error(ErrorKind::ill_conditioned_sample, "singular sample matrix");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(piv, j), m.at(k, j));
                std::swap(inv.at(piv, j), inv.at(k, j));
            }
        const double d = m.at(k, k);
        for (int j = 0; j < n; ++j) {
            m.at(k, j) /= d;
            inv.at(k, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const double factor = m.at(i, k);
            if (factor == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m.at(i, j) -= factor * m.at(k, j);
                inv.at(i, j) -= factor * inv.at(k, j);
            }
        }
    }
    return inv;
}

/// Greedy pick of n sample points whose g-value columns stay far from the
/// span of the already-chosen ones (modified Gram-Schmidt residuals).
inline std::vector<std::size_t> pick_sample_columns(const std::vector<std::vector<double>>& cols,
                                                    int n) {
    std::vector<std::vector<double>> basis;
    std::vector<std::size_t> chosen;
    std::vector<bool> used(cols.size(), false);
    for (int step = 0; step < n; ++step) {
        double best_norm = -1.0;
        std::size_t best = 0;
        std::vector<double> best_residual;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (used[c]) continue;
            std::vector<double> r = cols[c];
            for (const auto& b : basis) {
                double dot = 0.0;
                for (std::size_t i = 0; i < r.size(); ++i) dot += r[i] * b[i];
                for (std::size_t i = 0; i < r.size(); ++i) r[i] -= dot * b[i];
            }
            double norm = 0.0;
            for (double v : r) norm += v * v;
            norm = std::sqrt(norm);
            if (norm > best_norm) {
                best_norm = norm;
                best = c;
                best_residual = std::move(r);
            }
        }
        if (best_norm <= 0.0)
            throw Error(ErrorKind::ill_conditioned_sample,
                        "sample g-values do not span the space");
        for (double& v : best_residual) v /= best_norm;
        basis.push_back(std::move(best_residual));
        chosen.push_back(best);
        used[best] = true;
    }
    return chosen;
}

}  // namespace detail

/// Decides f ~ g from samples in three stages: phi agreement at every usable
/// point, recovery of A from a well-conditioned n-point subset, then
/// validation of Y_f = A Y_g (all derivative orders up to n-1) everywhere.
inline EquivalenceResult range_equivalent(const Frame& f, const Frame& g,
                                          const std::vector<double>& points, Tolerances tol = {},
                                          double condition_limit = 1e8) {
    const int n = f.n();
    if (n != g.n()) throw Error(ErrorKind::dimension_mismatch, "frames disagree on n");

    EquivalenceResult res;
    std::vector<double> usable;
    for (double t : points) {
        try {
            const bool fu = wronskian_usable(f, t);
            const bool gu = wronskian_usable(g, t);
            if (fu && gu)
                usable.push_back(t);
            else
                res.skipped.push_back({t, fu ? "vanishing-wronskian (g)" : "vanishing-wronskian (f)"});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::domain_violation) throw;
            res.skipped.push_back({t, "domain-violation"});
        }
    }
    if (usable.empty())
        throw Error(ErrorKind::vanishing_wronskian, "no usable sample points (Wronskian vanishes everywhere)");

    // Stage 1: phi agreement is necessary for equivalence. High j first, so
    // a mismatch in the leading coefficient (j = n-1) is the witness named
    // when several functionals disagree at once.
    for (double t : usable) {
        for (int j = n - 1; j >= 0; --j) {
            const double pf = phi(f, j, t);
            const double pg = phi(g, j, t);
            const double abs = std::abs(pf - pg);
            const double scale = 1.0 + std::max(std::abs(pf), std::abs(pg));
            res.max_phi_mismatch = std::max(res.max_phi_mismatch, abs / scale);
            if (abs > std::max(tol.abs_floor, tol.rel * scale)) {
                res.equivalent = false;
                res.witness_j = j;
                res.witness_t = t;
                res.witness_phi_f = pf;
                res.witness_phi_g = pg;
                return res;
            }
        }
    }

    // Stage 2: recover A from f(t_i) = A g(t_i) on a well-conditioned subset.
    if (static_cast<int>(usable.size()) < n)
        throw Error(ErrorKind::ill_conditioned_sample,
                    "need at least n usable points to determine A");
    std::vector<std::vector<double>> g_cols;
    g_cols.reserve(usable.size());
    for (double t : usable) {
        std::vector<double> col;
        col.reserve(static_cast<std::size_t>(n));
        for (const auto& comp : g.spec.components) col.push_back(comp.eval(t));
        g_cols.push_back(std::move(col));
    }
    const std::vector<std::size_t> chosen = detail::pick_sample_columns(g_cols, n);
    Matrix<double> gm(n, n, 0.0), fm(n, n, 0.0);
    for (int c = 0; c < n; ++c) {
        const double t = usable[chosen[static_cast<std::size_t>(c)]];
        for (int r = 0; r < n; ++r) {
            gm.at(r, c) = g_cols[chosen[static_cast<std::size_t>(c)]][static_cast<std::size_t>(r)];
            fm.at(r, c) = f.spec.components[static_cast<std::size_t>(r)].eval(t);
        }
    }
    const Matrix<double> gm_inv = detail::inverse(gm);
    const double cond = detail::norm_inf(gm) * detail::norm_inf(gm_inv);
    if (cond > condition_limit)
        throw Error(ErrorKind::ill_conditioned_sample,
                    "best sample subset has condition estimate " + std::to_string(cond));
    Matrix<double> a_mat = fm * gm_inv;

    // Stage 3: certify Y_f = A Y_g at every usable point, column by column
    // (columns are the derivative orders n-1 ... 0).
    for (double t : usable) {
        const Matrix<double> yf = values(frame_matrix(f, t, 0));
        const Matrix<double> yg = values(frame_matrix(g, t, 0));
        const Matrix<double> diff = yf - a_mat * yg;
        for (int c = 0; c < n; ++c) {
            double dcol = 0.0, scale = 0.0;
            for (int r = 0; r < n; ++r) {
                dcol = std::max(dcol, std::abs(diff.at(r, c)));
                scale = std::max(scale, std::abs(yf.at(r, c)));
            }
            const double rel = dcol / (1.0 + scale);
            res.max_validation_residual = std::max(res.max_validation_residual, rel);
            if (!tol.accept(dcol, rel))
                throw Error(ErrorKind::validation_failure,
                            "phi functionals agree at all samples but no constant matrix maps g to f "
                            "(residual " +
                                std::to_string(rel) + " at t = " + std::to_string(t) + ")");
        }
    }

    res.equivalent = true;
    res.A = std::move(a_mat);
    return res;
}

}  // namespace liouville
