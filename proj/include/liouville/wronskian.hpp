#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/expr.hpp"
#include "liouville/jet.hpp"
#include "liouville/matrix.hpp"
#include "liouville/ncbell.hpp"

namespace liouville {

/// Basis vectors are 1-based throughout (e_1 ... e_n); this is the one place
/// where a 1-based index meets 0-based storage.
inline int basis_column(int one_based) { return one_based - 1; }

/// Derivative-order selector k = (k_1, ..., k_n) for a generalized Wronskian.
struct MultiIndex {
    std::vector<int> k;

    explicit MultiIndex(std::vector<int> entries) : k(std::move(entries)) {
        for (int v : k)
            if (v < 0) throw Error(ErrorKind::dimension_mismatch, "multi-index entries must be nonnegative");
    }

    int size() const { return static_cast<int>(k.size()); }
    int max_entry() const { return *std::max_element(k.begin(), k.end()); }

    /// ell_i = (k_i - n + 1)^+, the Bell index attached to column i.
    int ell(int i) const { return std::max(k[static_cast<std::size_t>(i)] - size() + 1, 0); }
    int max_ell() const {
        int m = 0;
        for (int i = 0; i < size(); ++i) m = std::max(m, ell(i));
        return m;
    }

    /// The classical Wronskian selector (n-1, n-2, ..., 0).
    static MultiIndex classical(int n) {
        std::vector<int> k(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = n - 1 - i;
        return MultiIndex(std::move(k));
    }

    /// (n, n-1, ..., j+1, j-1, ..., 0): the full descending list with entry j
    /// replaced by n. Used by the phi functionals.
    static MultiIndex phi_selector(int n, int j) {
        std::vector<int> k;
        k.reserve(static_cast<std::size_t>(n));
        k.push_back(n);
        for (int d = n - 1; d >= 0; --d)
            if (d != j) k.push_back(d);
        return MultiIndex(std::move(k));
    }
};

/// Solution frame: the vector function f together with its dimension.
struct Frame {
    VectorFunctionSpec spec;

    explicit Frame(VectorFunctionSpec s) : spec(std::move(s)) {}

    int n() const { return spec.dimension(); }
};

/// Coefficient functions a = (a_1, ..., a_n) of the monic equation
/// y^(n) = a_1 y^(n-1) + ... + a_n y. Indices above n are identically zero.
/// smoothness < 0 means unbounded (closed-form coefficients).
struct CoefficientVector {
    VectorFunctionSpec spec;
    int smoothness = -1;

    explicit CoefficientVector(VectorFunctionSpec s, int smooth = -1)
        : spec(std::move(s)), smoothness(smooth) {}

    int n() const { return spec.dimension(); }
};

namespace detail {

/// Jets of f_i^(d) for d = 0..max_deriv, each truncated to `order`.
inline std::vector<std::vector<Jet>> component_derivative_jets(const VectorFunctionSpec& spec,
                                                               double t0, int max_deriv,
                                                               int order) {
    std::vector<std::vector<Jet>> out;
    out.reserve(spec.components.size());
    for (const auto& comp : spec.components) {
        Jet j = comp.eval_jet(t0, order + max_deriv);
        std::vector<Jet> derivs;
        derivs.reserve(static_cast<std::size_t>(max_deriv) + 1);
        derivs.push_back(j.truncated(order));
        for (int d = 1; d <= max_deriv; ++d) {
            j = differentiate(j);
            derivs.push_back(j.truncated(order));
        }
        out.push_back(std::move(derivs));
    }
    return out;
}

}  // namespace detail

/// Y_f at t0 as jets of the given order: column j holds f^(n-j), so the last
/// column is f itself.
inline JetMatrix frame_matrix(const Frame& f, double t0, int order) {
    const int n = f.n();
    auto jets = detail::component_derivative_jets(f.spec, t0, n - 1, order);
    JetMatrix y(n, n, Jet(t0, order));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c) y.at(i, c) = jets[static_cast<std::size_t>(i)][static_cast<std::size_t>(n - 1 - c)];
    return y;
}

/// Companion matrix X_a: first column a, then the standard basis vectors
/// e_1 ... e_{n-1}.
inline JetMatrix companion_matrix(const CoefficientVector& a, double t0, int order) {
    const int n = a.n();
    JetMatrix x(n, n, Jet(t0, order));
    for (int i = 0; i < n; ++i) x.at(i, 0) = a.spec.components[static_cast<std::size_t>(i)].eval_jet(t0, order);
    for (int j = 1; j < n; ++j) x.at(basis_column(j), j) = Jet::constant(t0, order, 1.0);
    return x;
}

inline JetMatrix companion_matrix_from_jets(const std::vector<Jet>& a) {
    const int n = static_cast<int>(a.size());
    const double t0 = a[0].basepoint();
    const int order = a[0].order();
    JetMatrix x(n, n, Jet(t0, order));
    for (int i = 0; i < n; ++i) x.at(i, 0) = a[static_cast<std::size_t>(i)];
    for (int j = 1; j < n; ++j) x.at(basis_column(j), j) = Jet::constant(t0, order, 1.0);
    return x;
}

/// W_f^k(t0) by the definition: the determinant with column i = f^(k_i).
/// This is the brute-force side of every Bell-formula cross-check.
inline double wronskian_direct(const Frame& f, const MultiIndex& k, double t0) {
    const int n = f.n();
    if (k.size() != n) throw Error(ErrorKind::dimension_mismatch, "multi-index length must equal the dimension");
    auto jets = detail::component_derivative_jets(f.spec, t0, k.max_entry(), 0);
    Matrix<double> m(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c)
            m.at(i, c) = jets[static_cast<std::size_t>(i)][static_cast<std::size_t>(k.k[static_cast<std::size_t>(c)])].value();
    return det(m);
}

inline double wronskian(const Frame& f, double t0) {
    return wronskian_direct(f, MultiIndex::classical(f.n()), t0);
}

/// W_f^k as a jet, for identities that need its derivatives.
inline Jet wronskian_jet(const Frame& f, const MultiIndex& k, double t0, int order) {
    const int n = f.n();
    if (k.size() != n) throw Error(ErrorKind::dimension_mismatch, "multi-index length must equal the dimension");
    auto jets = detail::component_derivative_jets(f.spec, t0, k.max_entry(), order);
    JetMatrix m(n, n, Jet(t0, order));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c)
            m.at(i, c) = jets[static_cast<std::size_t>(i)][static_cast<std::size_t>(k.k[static_cast<std::size_t>(c)])];
    return det(m);
}

constexpr double kWronskianThresholdScale = 1e-9;

/// Scale-aware degeneracy threshold: W_f counts as nonvanishing at t0 when
/// |W_f(t0)| > 1e-9 * (1 + max Euclidean column norm of Y_f(t0)).
inline double wronskian_threshold(const Frame& f, double t0) {
    const Matrix<double> y = values(frame_matrix(f, t0, 0));
    double max_col = 0.0;
    for (int c = 0; c < y.cols(); ++c) {
        double s = 0.0;
        for (int r = 0; r < y.rows(); ++r) s += y.at(r, c) * y.at(r, c);
        max_col = std::max(max_col, std::sqrt(s));
    }
    return kWronskianThresholdScale * (1.0 + max_col);
}

inline bool wronskian_usable(const Frame& f, double t0, double* w_out = nullptr) {
    const double w = wronskian(f, t0);
    if (w_out) *w_out = w;
    return std::abs(w) > wronskian_threshold(f, t0);
}

/// Phi_f^[j](t0) = (-1)^(n-j-1) W_f^(n,...,j+1,j-1,...,0) / W_f.
inline double phi(const Frame& f, int j, double t0) {
    const int n = f.n();
    if (j < 0 || j >= n) throw Error(ErrorKind::dimension_mismatch, "phi index out of range");
    double w = 0.0;
    if (!wronskian_usable(f, t0, &w))
        throw Error(ErrorKind::vanishing_wronskian,
                    "|W_f| = " + std::to_string(std::abs(w)) + " below threshold at t0 = " +
                        std::to_string(t0));
    const double num = wronskian_direct(f, MultiIndex::phi_selector(n, j), t0);
    const double sign = ((n - j - 1) % 2 == 0) ? 1.0 : -1.0;
    return sign * num / w;
}

/// Phi as a jet (used where the reconstructed coefficients must themselves be
/// differentiated).
inline Jet phi_jet(const Frame& f, int j, double t0, int order) {
    const int n = f.n();
    double w = 0.0;
    if (!wronskian_usable(f, t0, &w))
        throw Error(ErrorKind::vanishing_wronskian,
                    "|W_f| = " + std::to_string(std::abs(w)) + " below threshold at t0 = " +
                        std::to_string(t0));
    const Jet num = wronskian_jet(f, MultiIndex::phi_selector(n, j), t0, order);
    const Jet den = wronskian_jet(f, MultiIndex::classical(n), t0, order);
    const double sign = ((n - j - 1) % 2 == 0) ? 1.0 : -1.0;
    return sign * (num / den);
}

/// Coefficients (a_1, ..., a_n)(t0) of the monic equation the frame solves:
/// a_j = Phi_f^[n-j].
inline std::vector<double> reconstruct_coefficients(const Frame& f, double t0) {
    const int n = f.n();
    std::vector<double> a;
    a.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) a.push_back(phi(f, n - j, t0));
    return a;
}

/// Supplies coefficient jets either from given closed forms or reconstructed
/// from the frame itself, so both routes feed the same Bell-formula code.
class CoefficientSource {
  public:
    static CoefficientSource from_expressions(const CoefficientVector& a) {
        CoefficientSource s;
        s.n_ = a.n();
        s.smoothness_ = a.smoothness;
        s.eval_ = [a](double t0, int order) {
            std::vector<Jet> out;
            out.reserve(a.spec.components.size());
            for (const auto& c : a.spec.components) out.push_back(c.eval_jet(t0, order));
            return out;
        };
        return s;
    }

    /// a_j := Phi_f^[n-j], reconstructed pointwise from the frame.
    static CoefficientSource reconstructed(const Frame& f) {
        CoefficientSource s;
        s.n_ = f.n();
        s.smoothness_ = -1;
        s.eval_ = [f](double t0, int order) {
            const int n = f.n();
            std::vector<Jet> out;
            out.reserve(static_cast<std::size_t>(n));
            for (int j = 1; j <= n; ++j) out.push_back(phi_jet(f, n - j, t0, order));
            return out;
        };
        return s;
    }

    int n() const { return n_; }
    int smoothness() const { return smoothness_; }
    std::vector<Jet> eval(double t0, int order) const { return eval_(t0, order); }

  private:
    int n_ = 0;
    int smoothness_ = -1;
    std::function<std::vector<Jet>(double, int)> eval_;
};

/// W_f^k(t0) through the Bell-polynomial formula: W_f times the determinant
/// whose i-th column is B_{ell_i}(X_a, ..., X_a^(ell_i - 1)) e_{n + ell_i - k_i}.
inline double wronskian_via_bell(const Frame& f, const CoefficientSource& a, const MultiIndex& k,
                                 double t0, int max_bell_order = kDefaultMaxBellOrder) {
    const int n = f.n();
    if (k.size() != n || a.n() != n)
        throw Error(ErrorKind::dimension_mismatch, "frame, coefficients and multi-index must agree on n");
    const int ell_max = k.max_ell();
    if (a.smoothness() >= 0 && ell_max > a.smoothness())
        throw Error(ErrorKind::smoothness_budget_exceeded,
                    "k requires ell = " + std::to_string(ell_max) + " but coefficients only admit " +
                        std::to_string(a.smoothness()));
    const BellTable bell(std::min(ell_max, max_bell_order));
    if (ell_max > bell.max_order())
        throw Error(ErrorKind::order_limit_exceeded, "required Bell index exceeds the order cap");

    const JetMatrix x = companion_matrix_from_jets(a.eval(t0, ell_max));
    Matrix<double> cols(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        const int ell = k.ell(i);
        const JetMatrix b = bell_eval_jets(bell[ell], x);
        const int col = basis_column(n + ell - k.k[static_cast<std::size_t>(i)]);
        for (int r = 0; r < n; ++r) cols.at(r, i) = b.at(r, col).value();
    }
    return wronskian(f, t0) * det(cols);
}

inline double wronskian_via_bell(const Frame& f, const CoefficientVector& a, const MultiIndex& k,
                                 double t0, int max_bell_order = kDefaultMaxBellOrder) {
    return wronskian_via_bell(f, CoefficientSource::from_expressions(a), k, t0, max_bell_order);
}

/// Convenience wrapper for the reconstructed-coefficient route.
inline double wronskian_via_bell_auto(const Frame& f, const MultiIndex& k, double t0,
                                      int max_bell_order = kDefaultMaxBellOrder) {
    return wronskian_via_bell(f, CoefficientSource::reconstructed(f), k, t0, max_bell_order);
}

/// Uniform sample grid over the domain hint, shrunk 5% at each end. Infinite
/// ends are clamped to a 10-wide window next to the finite end (or (-2, 2)
/// when both ends are infinite).
inline std::vector<double> sample_grid(const DomainHint& dom, int count = 11) {
    if (count < 1) throw Error(ErrorKind::dimension_mismatch, "need at least one sample point");
    double lo = dom.lo, hi = dom.hi;
    const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
    if (lo_inf && hi_inf) {
        lo = -2.0;
        hi = 2.0;
    } else if (lo_inf) {
        lo = hi - 10.0;
    } else if (hi_inf) {
        hi = lo + 10.0;
    }
    if (!(lo < hi)) throw Error(ErrorKind::dimension_mismatch, "domain interval is empty");
    const double span = hi - lo;
    lo += 0.05 * span;
    hi -= 0.05 * span;
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        pts.push_back(0.5 * (lo + hi));
        return pts;
    }
    for (int i = 0; i < count; ++i) pts.push_back(lo + (hi - lo) * i / (count - 1));
    return pts;
}

struct SkippedPoint {
    double t;
    std::string reason;
};

struct UsablePoints {
    std::vector<double> usable;
    std::vector<SkippedPoint> skipped;
};

/// Filters a point list by the Wronskian degeneracy threshold; points where a
/// component is singular (domain violation) are skipped, not fatal.
inline UsablePoints filter_usable(const Frame& f, const std::vector<double>& points) {
    UsablePoints out;
    for (double t : points) {
        try {
            if (wronskian_usable(f, t))
                out.usable.push_back(t);
            else
                out.skipped.push_back({t, "vanishing-wronskian"});
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::domain_violation)
                out.skipped.push_back({t, "domain-violation"});
            else
                throw;
        }
    }
    return out;
}

}  // namespace liouville
