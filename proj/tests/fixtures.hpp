#pragma once

// Fundamental-system fixtures shared by the unit and acceptance suites.
// Every frame comes with the coefficients of the monic equation it solves,
// worked out from the characteristic polynomial (or by substitution for the
// variable-coefficient ones).

#include <limits>
#include <string>
#include <vector>

#include "liouville/expr.hpp"
#include "liouville/matrix.hpp"
#include "liouville/wronskian.hpp"

namespace fixtures {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// y'' = 3y' - 2y, roots 1 and 2
inline liouville::Frame exp12() {
    return liouville::Frame(
        liouville::VectorFunctionSpec::parse_all({"exp(t)", "exp(2*t)"}, {-1.0, 1.0}));
}
inline liouville::CoefficientVector exp12_coeffs() {
    return liouville::CoefficientVector(liouville::VectorFunctionSpec::parse_all({"3", "-2"}, {-1.0, 1.0}));
}

// y''' = y', roots 0, 1, -1
inline liouville::Frame exp3() {
    return liouville::Frame(
        liouville::VectorFunctionSpec::parse_all({"1", "exp(t)", "exp(-t)"}, {-1.0, 1.0}));
}
inline liouville::CoefficientVector exp3_coeffs() {
    return liouville::CoefficientVector(
        liouville::VectorFunctionSpec::parse_all({"0", "1", "0"}, {-1.0, 1.0}));
}

// y'' = (2/t) y' - (2/t^2) y on (0, inf)
inline liouville::Frame cauchy_euler() {
    return liouville::Frame(liouville::VectorFunctionSpec::parse_all({"t", "t^2"}, {0.0, kInf}));
}
inline liouville::CoefficientVector cauchy_euler_coeffs() {
    return liouville::CoefficientVector(
        liouville::VectorFunctionSpec::parse_all({"2/t", "-2/t^2"}, {0.0, kInf}));
}

// y'''' = 5y'' - 4y, roots 1, -1, 2, -2
inline liouville::Frame const4() {
    return liouville::Frame(liouville::VectorFunctionSpec::parse_all(
        {"exp(t)", "exp(-t)", "exp(2*t)", "exp(-2*t)"}, {-1.0, 1.0}));
}
inline liouville::CoefficientVector const4_coeffs() {
    return liouville::CoefficientVector(
        liouville::VectorFunctionSpec::parse_all({"0", "5", "0", "-4"}, {-1.0, 1.0}));
}

// y'' = (t/(t-1)) y' - (1/(t-1)) y on (2, 5); genuinely variable
// coefficients with nonzero high-order Wronskians
inline liouville::Frame t_exp() {
    return liouville::Frame(liouville::VectorFunctionSpec::parse_all({"t", "exp(t)"}, {2.0, 5.0}));
}
inline liouville::CoefficientVector t_exp_coeffs() {
    return liouville::CoefficientVector(
        liouville::VectorFunctionSpec::parse_all({"t/(t - 1)", "1/(1 - t)"}, {2.0, 5.0}));
}

// smooth frames with nonvanishing Wronskian but no closed-form equation given
inline liouville::Frame sin_texp() {
    return liouville::Frame(
        liouville::VectorFunctionSpec::parse_all({"sin(t)", "t*exp(t)"}, {0.0, 3.0}));
}
inline liouville::Frame poly_exp4() {
    return liouville::Frame(
        liouville::VectorFunctionSpec::parse_all({"1", "t", "t^2", "exp(t)"}, {-1.0, 1.0}));
}

/// The frame A*g: each component is the corresponding linear combination of
/// g's parsed components.
inline liouville::Frame linear_combination(const liouville::Matrix<double>& a,
                                           const liouville::Frame& g) {
    using liouville::Expr;
    using liouville::ExprPtr;
    const int n = g.n();
    std::vector<liouville::FunctionSpec> comps;
    comps.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ExprPtr sum;
        for (int j = 0; j < n; ++j) {
            ExprPtr term = Expr::make_binary(liouville::ExprKind::Mul, Expr::make_number(a.at(i, j)),
                                             g.spec.components[static_cast<std::size_t>(j)].ast());
            sum = sum ? Expr::make_binary(liouville::ExprKind::Add, sum, term) : term;
        }
        comps.push_back(liouville::FunctionSpec::from_ast(sum));
    }
    return liouville::Frame(liouville::VectorFunctionSpec(std::move(comps), g.spec.domain));
}

}  // namespace fixtures
