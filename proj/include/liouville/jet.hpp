#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "liouville/errors.hpp"

namespace liouville {

/// Truncated Taylor expansion of a scalar function at a basepoint.
///
/// Coefficients are stored in Taylor convention, coeff(i) = f^(i)(t0)/i!,
/// so products stay well scaled at high order. Raw derivatives are exposed
/// through derivative(i).
class Jet {
  public:
    Jet(double basepoint, int order) : t0_(basepoint), c_(static_cast<std::size_t>(order) + 1, 0.0) {
        if (order < 0) throw Error(ErrorKind::order_mismatch, "jet order must be nonnegative");
    }

    static Jet constant(double basepoint, int order, double value) {
        Jet j(basepoint, order);
        j.c_[0] = value;
        return j;
    }

    /// The identity function t, expanded at the basepoint.
    static Jet variable(double basepoint, int order) {
        Jet j(basepoint, order);
        j.c_[0] = basepoint;
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    double basepoint() const { return t0_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }
    double value() const { return c_[0]; }

    double coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }
    void set_coeff(int i, double v) { c_[static_cast<std::size_t>(i)] = v; }

    /// f^(i)(t0) = i! * coeff(i).
    double derivative(int i) const {
        if (i < 0 || i > order())
            throw Error(ErrorKind::insufficient_jet_order,
                        "derivative order " + std::to_string(i) + " exceeds jet order " +
                            std::to_string(order()));
        double f = 1.0;
        for (int k = 2; k <= i; ++k) f *= k;
        return f * c_[static_cast<std::size_t>(i)];
    }

    Jet truncated(int new_order) const {
        if (new_order > order())
            throw Error(ErrorKind::insufficient_jet_order, "cannot truncate upward");
        Jet r(t0_, new_order);
        for (int i = 0; i <= new_order; ++i) r.c_[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
        return r;
    }

    Jet operator-() const {
        Jet r = *this;
        for (double& v : r.c_) v = -v;
        return r;
    }

    Jet& operator+=(const Jet& y) {
        check_compatible(y);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += y.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& y) {
        check_compatible(y);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= y.c_[i];
        return *this;
    }
    Jet& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }

    friend Jet operator+(Jet x, const Jet& y) { return x += y; }
    friend Jet operator-(Jet x, const Jet& y) { return x -= y; }
    friend Jet operator*(Jet x, double s) { return x *= s; }
    friend Jet operator*(double s, Jet x) { return x *= s; }

    friend Jet operator+(Jet x, double s) {
        x.c_[0] += s;
        return x;
    }
    friend Jet operator+(double s, Jet x) { return std::move(x) + s; }
    friend Jet operator-(Jet x, double s) { return std::move(x) + (-s); }
    friend Jet operator-(double s, const Jet& x) { return -x + s; }

    /// Cauchy product truncated at the common order.
    friend Jet operator*(const Jet& x, const Jet& y) {
        x.check_compatible(y);
        Jet r(x.t0_, x.order());
        const int p = x.order();
        for (int k = 0; k <= p; ++k) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) s += x.c_[static_cast<std::size_t>(j)] * y.c_[static_cast<std::size_t>(k - j)];
            r.c_[static_cast<std::size_t>(k)] = s;
        }
        return r;
    }

    /// Power-series quotient; requires a denominator unit (nonzero constant term).
    friend Jet operator/(const Jet& x, const Jet& y) {
        x.check_compatible(y);
        if (y.c_[0] == 0.0)
            throw Error(ErrorKind::domain_violation, "division by jet with zero constant term");
        Jet r(x.t0_, x.order());
        const int p = x.order();
        for (int k = 0; k <= p; ++k) {
            double s = x.c_[static_cast<std::size_t>(k)];
            for (int j = 0; j < k; ++j) s -= r.c_[static_cast<std::size_t>(j)] * y.c_[static_cast<std::size_t>(k - j)];
            r.c_[static_cast<std::size_t>(k)] = s / y.c_[0];
        }
        return r;
    }
    friend Jet operator/(const Jet& x, double s) { return x * (1.0 / s); }
    friend Jet operator/(double s, const Jet& y) {
        return Jet::constant(y.t0_, y.order(), s) / y;
    }

    bool operator==(const Jet& y) const { return t0_ == y.t0_ && c_ == y.c_; }

  private:
    void check_compatible(const Jet& y) const {
        if (t0_ != y.t0_)
            throw Error(ErrorKind::basepoint_mismatch, "jets expanded at different basepoints");
        if (c_.size() != y.c_.size())
            throw Error(ErrorKind::order_mismatch, "jets of different orders");
    }

    double t0_;
    std::vector<double> c_;
};

/// d/dt as an order-lowering map: the result has order p-1.
inline Jet differentiate(const Jet& x) {
    if (x.order() < 1) throw Error(ErrorKind::zero_order_jet, "cannot differentiate an order-0 jet");
    Jet r(x.basepoint(), x.order() - 1);
    for (int i = 0; i < x.order(); ++i) r.set_coeff(i, (i + 1) * x.coeff(i + 1));
    return r;
}

inline Jet exp(const Jet& u) {
    Jet v(u.basepoint(), u.order());
    v.set_coeff(0, std::exp(u.coeff(0)));
    for (int k = 1; k <= u.order(); ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * u.coeff(j) * v.coeff(k - j);
        v.set_coeff(k, s / k);
    }
    return v;
}

inline Jet log(const Jet& u) {
    if (u.coeff(0) <= 0.0)
        throw Error(ErrorKind::domain_violation, "log of jet with nonpositive constant term");
    Jet v(u.basepoint(), u.order());
    v.set_coeff(0, std::log(u.coeff(0)));
    for (int k = 1; k <= u.order(); ++k) {
        double s = k * u.coeff(k);
        for (int m = 1; m < k; ++m) s -= m * u.coeff(k - m) * v.coeff(m);
        v.set_coeff(k, s / (k * u.coeff(0)));
    }
    return v;
}

namespace detail {
// sin and cos propagate jointly through the coupled recurrences
// s' = u' c, c' = -u' s.
inline void sincos(const Jet& u, Jet& s, Jet& c) {
    s = Jet(u.basepoint(), u.order());
    c = Jet(u.basepoint(), u.order());
    s.set_coeff(0, std::sin(u.coeff(0)));
    c.set_coeff(0, std::cos(u.coeff(0)));
    for (int k = 1; k <= u.order(); ++k) {
        double as = 0.0, ac = 0.0;
        for (int m = 1; m <= k; ++m) {
            as += m * u.coeff(m) * c.coeff(k - m);
            ac -= m * u.coeff(m) * s.coeff(k - m);
        }
        s.set_coeff(k, as / k);
        c.set_coeff(k, ac / k);
    }
}
}  // namespace detail

inline Jet sin(const Jet& u) {
    Jet s(u.basepoint(), u.order()), c(u.basepoint(), u.order());
    detail::sincos(u, s, c);
    return s;
}

inline Jet cos(const Jet& u) {
    Jet s(u.basepoint(), u.order()), c(u.basepoint(), u.order());
    detail::sincos(u, s, c);
    return c;
}

/// Integer power by repeated squaring; negative exponents go through the
/// series reciprocal and require a nonzero constant term.
inline Jet pow(const Jet& u, long long e) {
    if (e < 0) {
        if (u.coeff(0) == 0.0)
            throw Error(ErrorKind::domain_violation,
                        "negative power of jet with zero constant term");
        return 1.0 / pow(u, -e);
    }
    Jet acc = Jet::constant(u.basepoint(), u.order(), 1.0);
    Jet base = u;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

}  // namespace liouville
