#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "liouville/ncbell.hpp"

using namespace liouville;

namespace {

// Independent Bell-number oracle: the scalar recursion over exact integers,
// with no connection to the word expansion under test.
std::vector<std::int64_t> bell_numbers(int max) {
    BinomialTable binom(max < 1 ? 1 : max);
    std::vector<std::int64_t> b{1};
    for (int m = 0; m < max; ++m) {
        std::int64_t s = 0;
        for (int j = 0; j <= m; ++j) s += binom(m, j) * b[static_cast<std::size_t>(j)];
        b.push_back(s);
    }
    return b;
}

Matrix<double> random_matrix(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix<double> m(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = dist(rng);
    return m;
}

}  // namespace

TEST_CASE("expanded Bell polynomials match the known low-order tables") {
    using Terms = std::map<Word, std::int64_t>;

    REQUIRE(bell_expand(0).terms == Terms{{{}, 1}});
    REQUIRE(bell_expand(1).terms == Terms{{{1}, 1}});
    REQUIRE(bell_expand(2).terms == Terms{{{1, 1}, 1}, {{2}, 1}});
    REQUIRE(bell_expand(3).terms == Terms{{{1, 1, 1}, 1}, {{1, 2}, 2}, {{2, 1}, 1}, {{3}, 1}});
    REQUIRE(bell_expand(4).terms == Terms{{{1, 1, 1, 1}, 1},
                                          {{1, 1, 2}, 3},
                                          {{1, 2, 1}, 2},
                                          {{1, 3}, 3},
                                          {{2, 1, 1}, 1},
                                          {{2, 2}, 3},
                                          {{3, 1}, 1},
                                          {{4}, 1}});
    REQUIRE(bell_expand(5).terms == Terms{{{1, 1, 1, 1, 1}, 1},
                                          {{1, 1, 1, 2}, 4},
                                          {{1, 1, 2, 1}, 3},
                                          {{1, 1, 3}, 6},
                                          {{1, 2, 1, 1}, 2},
                                          {{1, 2, 2}, 8},
                                          {{1, 3, 1}, 3},
                                          {{1, 4}, 4},
                                          {{2, 1, 1, 1}, 1},
                                          {{2, 1, 2}, 4},
                                          {{2, 2, 1}, 3},
                                          {{2, 3}, 6},
                                          {{3, 1, 1}, 1},
                                          {{3, 2}, 4},
                                          {{4, 1}, 1},
                                          {{5}, 1}});
}

TEST_CASE("Bell expansion invariants up to order 10") {
    const auto bells = bell_numbers(10);
    for (int m = 1; m <= 10; ++m) {
        const NCPolynomial p = bell_expand(m);
        REQUIRE(p.word_count() == (std::size_t{1} << (m - 1)));
        REQUIRE(p.coefficient_sum() == bells[static_cast<std::size_t>(m)]);
        for (const auto& [w, c] : p.terms) {
            REQUIRE(c != 0);
            REQUIRE(weight(w) == m);
            for (int idx : w) REQUIRE(idx >= 1);
        }
    }
}

TEST_CASE("Bell order cap") {
    REQUIRE_NOTHROW(bell_expand(12));
    REQUIRE_THROWS_AS(bell_expand(13), Error);
    REQUIRE_THROWS_AS(bell_expand(5, 4), Error);
    REQUIRE_THROWS_AS(bell_expand(-1), Error);
}

TEST_CASE("Bell evaluation on matrices") {
    std::mt19937 rng(7);

    SECTION("B_1 is the identity map") {
        const Matrix<double> a = random_matrix(rng, 3);
        const Matrix<double> r = bell_eval(bell_expand(1), {a});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) REQUIRE(r.at(i, j) == a.at(i, j));
    }
    SECTION("B_3 on identity arguments gives 5 I") {
        for (int n : {1, 2, 4}) {
            const Matrix<double> eye = Matrix<double>::identity(n, 1.0);
            const Matrix<double> r = bell_eval(bell_expand(3), {eye, eye, eye});
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) REQUIRE(r.at(i, j) == (i == j ? 5.0 : 0.0));
        }
    }
    SECTION("all-zero arguments give the zero matrix for m >= 1") {
        const Matrix<double> z(2, 2, 0.0);
        for (int m = 1; m <= 6; ++m) {
            const Matrix<double> r = bell_eval(bell_expand(m), std::vector<Matrix<double>>(static_cast<std::size_t>(m), z));
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) REQUIRE(r.at(i, j) == 0.0);
        }
    }
    SECTION("only the all-ones word survives zero higher arguments") {
        // B_m(A, 0, ..., 0) = A^m
        const Matrix<double> a = random_matrix(rng, 3);
        const Matrix<double> z(3, 3, 0.0);
        for (int m = 2; m <= 6; ++m) {
            std::vector<Matrix<double>> args(static_cast<std::size_t>(m), z);
            args[0] = a;
            const Matrix<double> r = bell_eval(bell_expand(m), args);
            Matrix<double> expected = a;
            for (int i = 1; i < m; ++i) expected = expected * a;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) REQUIRE(r.at(i, j) == approx(expected.at(i, j)));
        }
    }
    SECTION("dimension and argument-count errors") {
        const Matrix<double> a2(2, 2, 1.0);
        const Matrix<double> a3(3, 3, 1.0);
        REQUIRE_THROWS_AS(bell_eval(bell_expand(2), {a2, a3}), Error);
        REQUIRE_THROWS_AS(bell_eval(bell_expand(3), {a2, a2}), Error);
    }
}

TEST_CASE("commutative Bell values") {
    REQUIRE(commutative_bell(0, std::vector<double>{}) == 1.0);
    REQUIRE(commutative_bell(3, {1.0, 1.0, 1.0}) == 5.0);
    REQUIRE(commutative_bell(2, {2.0, 3.0}) == 7.0);
    REQUIRE_THROWS_AS(commutative_bell(3, {1.0, 1.0}), Error);
}

TEST_CASE("1x1 Bell evaluation agrees with the commutative recursion") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int m = 0; m <= 8; ++m) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> xs(static_cast<std::size_t>(std::max(m, 1)));
            for (double& x : xs) x = dist(rng);
            std::vector<Matrix<double>> args;
            for (double x : xs) args.push_back(Matrix<double>(1, 1, x));
            const double via_words = bell_eval(bell_expand(m), args).at(0, 0);
            const double via_recursion = commutative_bell(m, xs);
            REQUIRE(via_words == approx(via_recursion, 1e-12, 1e-12));
        }
    }
}

TEST_CASE("Bell evaluation on matrices of jets") {
    SECTION("B_0 evaluates to the identity") {
        JetMatrix x(2, 2, Jet::variable(0.0, 3));
        const JetMatrix r = bell_eval_jets(bell_expand(0), x);
        REQUIRE(r.at(0, 0).coeff(0) == 1.0);
        REQUIRE(r.at(0, 1).coeff(0) == 0.0);
        REQUIRE(r.at(1, 1).coeff(0) == 1.0);
    }
    SECTION("B_1 on a constant matrix returns it unchanged") {
        JetMatrix x(2, 2, Jet::constant(0.0, 2, 0.0));
        x.at(0, 0) = Jet::constant(0.0, 2, 3.0);
        x.at(1, 0) = Jet::constant(0.0, 2, -2.0);
        x.at(0, 1) = Jet::constant(0.0, 2, 1.0);
        const JetMatrix r = bell_eval_jets(bell_expand(1), x);
        REQUIRE(r.at(0, 0).value() == 3.0);
        REQUIRE(r.at(1, 0).value() == -2.0);
        REQUIRE(r.at(0, 1).value() == 1.0);
        REQUIRE(r.at(1, 1).value() == 0.0);
    }
    SECTION("scalar B_2 on the jet of t is t^2 + 1") {
        JetMatrix x(1, 1, Jet::variable(0.0, 3));
        const JetMatrix r = bell_eval_jets(bell_expand(2), x);
        const Jet& j = r.at(0, 0);
        REQUIRE(j.order() == 2);
        REQUIRE(j.coeff(0) == approx(1.0));
        REQUIRE(j.coeff(1) == approx(0.0));
        REQUIRE(j.coeff(2) == approx(1.0));
    }
    SECTION("insufficient jet order is rejected") {
        JetMatrix x(1, 1, Jet::variable(0.0, 1));
        REQUIRE_THROWS_AS(bell_eval_jets(bell_expand(3), x), Error);
    }
}

TEST_CASE("Bell pretty printer") {
    REQUIRE(format_bell(0, bell_expand(0)) == "B_0 = I");
    REQUIRE(format_bell(1, bell_expand(1)) == "B_1 = X1");
    REQUIRE(format_bell(2, bell_expand(2)) == "B_2 = X1^2 + X2");
    REQUIRE(format_bell(3, bell_expand(3)) == "B_3 = X1^3 + 2 X1 X2 + X2 X1 + X3");
}
