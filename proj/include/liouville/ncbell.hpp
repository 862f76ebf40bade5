#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/matrix.hpp"

namespace liouville {

/// A word over the indeterminates X_1, X_2, ...; entry i_j names X_{i_j}.
/// std::vector's lexicographic ordering doubles as the canonical display
/// order, since all words of one Bell polynomial share the same weight.
using Word = std::vector<int>;

inline int weight(const Word& w) { return std::accumulate(w.begin(), w.end(), 0); }

/// Element of the free associative algebra with integer coefficients,
/// tagged with the Bell index it was produced for.
struct NCPolynomial {
    int order = 0;
    std::map<Word, std::int64_t> terms;

    std::size_t word_count() const { return terms.size(); }

    std::int64_t coefficient_sum() const {
        std::int64_t s = 0;
        for (const auto& [w, c] : terms) s += c;
        return s;
    }
};

constexpr int kDefaultMaxBellOrder = 12;

/// Pascal-triangle binomial table; exact in 64-bit through the order cap.
class BinomialTable {
  public:
    explicit BinomialTable(int max_n) : rows_(static_cast<std::size_t>(max_n) + 1) {
        for (int n = 0; n <= max_n; ++n) {
            auto& row = rows_[static_cast<std::size_t>(n)];
            row.assign(static_cast<std::size_t>(n) + 1, 1);
            for (int k = 1; k < n; ++k)
                row[static_cast<std::size_t>(k)] =
                    rows_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
                    rows_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
        }
    }

    std::int64_t operator()(int n, int k) const { return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]; }

  private:
    std::vector<std::vector<std::int64_t>> rows_;
};

/// Expanded table of B_0 .. B_max built by the recursion
///   B_{m+1} = sum_{j=0}^{m} C(m,j) B_j X_{m+1-j},   B_0 = empty word.
/// The recursion is triangular, so the whole prefix is kept.
class BellTable {
  public:
    explicit BellTable(int max_order) : binom_(max_order < 1 ? 1 : max_order) {
        polys_.reserve(static_cast<std::size_t>(max_order) + 1);
        NCPolynomial b0;
        b0.order = 0;
        b0.terms[Word{}] = 1;
        polys_.push_back(std::move(b0));
        for (int m = 0; m < max_order; ++m) {
            NCPolynomial next;
            next.order = m + 1;
            for (int j = 0; j <= m; ++j) {
                const std::int64_t c = binom_(m, j);
                for (const auto& [w, coeff] : polys_[static_cast<std::size_t>(j)].terms) {
                    Word extended = w;
                    extended.push_back(m + 1 - j);
                    next.terms[extended] += c * coeff;
                }
            }
            // collected terms can in principle cancel; drop exact zeros
            for (auto it = next.terms.begin(); it != next.terms.end();)
                it = (it->second == 0) ? next.terms.erase(it) : std::next(it);
            polys_.push_back(std::move(next));
        }
    }

    int max_order() const { return static_cast<int>(polys_.size()) - 1; }
    const NCPolynomial& operator[](int m) const { return polys_[static_cast<std::size_t>(m)]; }

  private:
    BinomialTable binom_;
    std::vector<NCPolynomial> polys_;
};

/// Fully expanded B_m as a word -> coefficient map.
inline NCPolynomial bell_expand(int m, int max_order = kDefaultMaxBellOrder) {
    if (m < 0) throw Error(ErrorKind::order_limit_exceeded, "Bell index must be nonnegative");
    if (m > max_order)
        throw Error(ErrorKind::order_limit_exceeded,
                    "Bell index " + std::to_string(m) + " exceeds maximum order " +
                        std::to_string(max_order));
    return BellTable(m)[m];
}

/// Substitutes X_i := args[i-1] and evaluates each word as a left-to-right
/// product in the ring of the argument type. Works for Matrix<double> and
/// Matrix<Jet> alike; the empty word evaluates to the identity.
template <typename M>
M bell_eval(const NCPolynomial& poly, std::span<const M> args) {
    int max_index = 0;
    for (const auto& [w, c] : poly.terms)
        for (int i : w) max_index = std::max(max_index, i);
    if (static_cast<int>(args.size()) < max_index)
        throw Error(ErrorKind::insufficient_arguments,
                    "polynomial references X_" + std::to_string(max_index) + " but only " +
                        std::to_string(args.size()) + " arguments given");
    if (args.empty())
        throw Error(ErrorKind::insufficient_arguments, "need at least one argument to fix the dimension");
    const int n = args[0].rows();
    for (const auto& a : args)
        if (a.rows() != n || a.cols() != n)
            throw Error(ErrorKind::dimension_mismatch, "Bell arguments must be square of one dimension");

    M acc(n, n, detail::zero_like(args[0].at(0, 0)));
    for (const auto& [w, c] : poly.terms) {
        M prod = M::identity(n, args[0].at(0, 0));
        for (int i : w) prod = prod * args[static_cast<std::size_t>(i - 1)];
        acc += prod * static_cast<double>(c);
    }
    return acc;
}

inline Matrix<double> bell_eval(const NCPolynomial& poly, const std::vector<Matrix<double>>& args) {
    return bell_eval<Matrix<double>>(poly, std::span<const Matrix<double>>(args));
}

/// Evaluates B_m with X_i := X^(i-1) extracted from one matrix of jets.
/// All factors are truncated to the common output order
/// X.order - (m - 1), which is what differentiating the deepest argument
/// leaves available.
inline JetMatrix bell_eval_jets(const NCPolynomial& poly, const JetMatrix& x) {
    const int m = poly.order;
    const int out_order = x.at(0, 0).order() - (m > 0 ? m - 1 : 0);
    if (out_order < 0)
        throw Error(ErrorKind::insufficient_jet_order,
                    "jet order " + std::to_string(x.at(0, 0).order()) +
                        " too small for Bell index " + std::to_string(m));
    if (m == 0) return JetMatrix::identity(x.rows(), x.at(0, 0).truncated(out_order));

    std::vector<JetMatrix> derivs;
    derivs.reserve(static_cast<std::size_t>(m));
    JetMatrix d = x;
    for (int i = 0; i < m; ++i) {
        derivs.push_back(truncated(d, out_order));
        if (i + 1 < m) d = derivative(d);
    }
    return bell_eval<JetMatrix>(poly, std::span<const JetMatrix>(derivs));
}

/// Bell's classical scalar recursion, kept free of the word expansion so it
/// can serve as an independent oracle for the expanded tables.
inline double commutative_bell(int m, std::span<const double> args) {
    if (m < 0) throw Error(ErrorKind::order_limit_exceeded, "Bell index must be nonnegative");
    if (static_cast<int>(args.size()) < m)
        throw Error(ErrorKind::insufficient_arguments,
                    "need " + std::to_string(m) + " arguments, got " + std::to_string(args.size()));
    BinomialTable binom(m < 1 ? 1 : m);
    std::vector<double> b(static_cast<std::size_t>(m) + 1, 0.0);
    b[0] = 1.0;
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int i = 0; i <= j; ++i)
            s += static_cast<double>(binom(j, i)) * b[static_cast<std::size_t>(i)] * args[static_cast<std::size_t>(j - i)];
        b[static_cast<std::size_t>(j) + 1] = s;
    }
    return b[static_cast<std::size_t>(m)];
}

inline double commutative_bell(int m, const std::vector<double>& args) {
    return commutative_bell(m, std::span<const double>(args));
}

/// "X1^3", "X1 X2", ... with runs of equal indices collapsed to powers.
inline std::string to_string(const Word& w) {
    if (w.empty()) return "I";
    std::string out;
    std::size_t i = 0;
    while (i < w.size()) {
        std::size_t run = 1;
        while (i + run < w.size() && w[i + run] == w[i]) ++run;
        if (!out.empty()) out += ' ';
        out += "X" + std::to_string(w[i]);
        if (run > 1) out += "^" + std::to_string(run);
        i += run;
    }
    return out;
}

inline std::string to_string(const NCPolynomial& poly) {
    if (poly.terms.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : poly.terms) {
        const std::int64_t mag = c < 0 ? -c : c;
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (mag != 1) {
            out += std::to_string(mag);
            out += ' ';
        }
        out += to_string(w);
    }
    return out;
}

inline std::string format_bell(int m, const NCPolynomial& poly) {
    return "B_" + std::to_string(m) + " = " + to_string(poly);
}

}  // namespace liouville
