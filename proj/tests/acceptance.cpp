// Acceptance suite: one criterion per line, nonzero exit if any fails.
// Each criterion pins its tolerance and runtime budget in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "liouville/liouville.hpp"

using namespace liouville;

namespace {

int failures = 0;

void criterion(const std::string& name, double time_budget_s, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > time_budget_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!ok) ++failures;
    std::printf("[%s] %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), elapsed,
                detail.empty() ? "" : " -- ", detail.c_str());
}

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

std::vector<MultiIndex> distinct_selectors(int n, int k_max) {
    std::vector<MultiIndex> out;
    std::vector<int> k(static_cast<std::size_t>(n), 0);
    const auto advance = [&]() {
        for (int i = n - 1; i >= 0; --i) {
            if (++k[static_cast<std::size_t>(i)] <= k_max) return true;
            k[static_cast<std::size_t>(i)] = 0;
        }
        return false;
    };
    do {
        bool distinct = true;
        for (int i = 0; i < n && distinct; ++i)
            for (int j = i + 1; j < n; ++j)
                if (k[static_cast<std::size_t>(i)] == k[static_cast<std::size_t>(j)]) {
                    distinct = false;
                    break;
                }
        if (distinct) out.emplace_back(k);
    } while (advance());
    return out;
}

MatrixFunctionSpec constant_matrix_spec(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<FunctionSpec> entries;
    for (int i = 0; i < n * n; ++i) entries.push_back(FunctionSpec::from_ast(Expr::make_number(dist(rng))));
    return MatrixFunctionSpec(n, std::move(entries));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    criterion("1 Bell tables B_1..B_5 match the published listings", 1.0, [](std::string& detail) {
        using Terms = std::map<Word, std::int64_t>;
        const Terms b1{{{1}, 1}};
        const Terms b2{{{1, 1}, 1}, {{2}, 1}};
        const Terms b3{{{1, 1, 1}, 1}, {{1, 2}, 2}, {{2, 1}, 1}, {{3}, 1}};
        const Terms b4{{{1, 1, 1, 1}, 1}, {{1, 1, 2}, 3}, {{1, 2, 1}, 2}, {{1, 3}, 3},
                       {{2, 1, 1}, 1}, {{2, 2}, 3},    {{3, 1}, 1},    {{4}, 1}};
        const Terms b5{{{1, 1, 1, 1, 1}, 1}, {{1, 1, 1, 2}, 4}, {{1, 1, 2, 1}, 3}, {{1, 1, 3}, 6},
                       {{1, 2, 1, 1}, 2},    {{1, 2, 2}, 8},    {{1, 3, 1}, 3},    {{1, 4}, 4},
                       {{2, 1, 1, 1}, 1},    {{2, 1, 2}, 4},    {{2, 2, 1}, 3},    {{2, 3}, 6},
                       {{3, 1, 1}, 1},       {{3, 2}, 4},       {{4, 1}, 1},       {{5}, 1}};
        const Terms* expected[] = {&b1, &b2, &b3, &b4, &b5};
        for (int m = 1; m <= 5; ++m)
            if (bell_expand(m).terms != *expected[m - 1]) {
                detail = "mismatch at m = " + std::to_string(m);
                return false;
            }
        if (bell_expand(4).terms.size() != 8) {
            detail = "B_4 must have exactly 8 terms";
            return false;
        }
        return true;
    });

    criterion("2 word counts 2^(m-1) and Bell-number coefficient sums, m <= 10", 1.0, [](std::string& detail) {
        const auto bells = bell_numbers(10);
        for (int m = 1; m <= 10; ++m) {
            const NCPolynomial p = bell_expand(m);
            if (p.word_count() != (std::size_t{1} << (m - 1))) {
                detail = "word count off at m = " + std::to_string(m);
                return false;
            }
            if (p.coefficient_sum() != bells[static_cast<std::size_t>(m)]) {
                detail = "coefficient sum off at m = " + std::to_string(m);
                return false;
            }
        }
        return true;
    });

    criterion("3 Bell derivative identity: constants, polynomial matrix, exp(t), j <= 5", 5.0,
              [](std::string& detail) {
                  std::mt19937 rng(20260809);
                  const std::vector<double> pts = sample_grid({-1.0, 1.0}, 11);
                  for (int n : {2, 3}) {
                      const auto rep = verify_bell_derivative_identity(constant_matrix_spec(rng, n), 5, pts);
                      if (!rep.passed) {
                          detail = "random constant " + std::to_string(n) + "x" + std::to_string(n) +
                                   " failed, max rel " + std::to_string(rep.max_rel);
                          return false;
                      }
                  }
                  const auto poly = MatrixFunctionSpec::parse_all(2, {"t^2 + 1", "t", "2*t", "t^3 - t"});
                  const auto rep_poly = verify_bell_derivative_identity(poly, 5, pts);
                  if (!rep_poly.passed) {
                      detail = "polynomial 2x2 failed, max rel " + std::to_string(rep_poly.max_rel);
                      return false;
                  }
                  const auto rep_exp =
                      verify_bell_derivative_identity(MatrixFunctionSpec::parse_all(1, {"exp(t)"}), 5, pts);
                  if (!rep_exp.passed) {
                      detail = "1x1 exp failed, max rel " + std::to_string(rep_exp.max_rel);
                      return false;
                  }
                  return true;
              });

    criterion("4 frame derivative formula on the three fixtures, j <= 5", 5.0, [](std::string& detail) {
        struct Case {
            Frame f;
            CoefficientVector a;
        };
        const Case cases[] = {
            {fixtures::exp12(), fixtures::exp12_coeffs()},
            {fixtures::exp3(), fixtures::exp3_coeffs()},
            {fixtures::cauchy_euler(), fixtures::cauchy_euler_coeffs()},
        };
        for (const auto& c : cases) {
            const auto rep = verify_frame_derivative_formula(c.f, c.a, 5, sample_grid(c.f.spec.domain, 11));
            if (!rep.passed) {
                detail = c.f.spec.components[0].source() + " fixture failed, max rel " +
                         std::to_string(rep.max_rel);
                return false;
            }
        }
        return true;
    });

    criterion("5 Wronskian formula vs direct determinants for all distinct k <= n+3", 30.0,
              [](std::string& detail) {
                  struct Case {
                      Frame f;
                      CoefficientVector a;
                  };
                  const Case cases[] = {
                      {fixtures::exp12(), fixtures::exp12_coeffs()},
                      {fixtures::exp3(), fixtures::exp3_coeffs()},
                      {fixtures::cauchy_euler(), fixtures::cauchy_euler_coeffs()},
                      {fixtures::const4(), fixtures::const4_coeffs()},
                  };
                  long long checks = 0;
                  for (const auto& c : cases) {
                      const int n = c.f.n();
                      const auto src = CoefficientSource::from_expressions(c.a);
                      const auto pts = sample_grid(c.f.spec.domain, 11);
                      for (const auto& k : distinct_selectors(n, n + 3)) {
                          for (double t : pts) {
                              const double direct = wronskian_direct(c.f, k, t);
                              const double via = wronskian_via_bell(c.f, src, k, t);
                              ++checks;
                              if (std::abs(via - direct) > 1e-8 * (1.0 + std::abs(direct))) {
                                  detail = "n=" + std::to_string(n) + " failed at t=" + std::to_string(t);
                                  return false;
                              }
                          }
                      }
                  }
                  detail = std::to_string(checks) + " comparisons";
                  return true;
              });

    criterion("6 shifted-Wronskian closed forms, d = 0,1,2, all j, all fixtures", 10.0,
              [](std::string& detail) {
                  struct Case {
                      Frame f;
                      CoefficientVector a;
                  };
                  const Case cases[] = {
                      {fixtures::exp12(), fixtures::exp12_coeffs()},
                      {fixtures::exp3(), fixtures::exp3_coeffs()},
                      {fixtures::cauchy_euler(), fixtures::cauchy_euler_coeffs()},
                      {fixtures::t_exp(), fixtures::t_exp_coeffs()},
                  };
                  for (const auto& c : cases) {
                      for (int d = 0; d <= 2; ++d) {
                          const auto rep =
                              verify_shifted_wronskian(c.f, c.a, d, sample_grid(c.f.spec.domain, 11));
                          if (!rep.passed) {
                              detail = c.f.spec.components[0].source() + " fixture failed at d = " +
                                       std::to_string(d);
                              return false;
                          }
                      }
                  }
                  return true;
              });

    criterion("6b Abel-Liouville identity (jet-derivative route)", 10.0, [](std::string& detail) {
        struct Case {
            Frame f;
            CoefficientVector a;
        };
        const Case cases[] = {
            {fixtures::exp12(), fixtures::exp12_coeffs()},
            {fixtures::exp3(), fixtures::exp3_coeffs()},
            {fixtures::cauchy_euler(), fixtures::cauchy_euler_coeffs()},
            {fixtures::t_exp(), fixtures::t_exp_coeffs()},
        };
        for (const auto& c : cases) {
            const auto rep = verify_abel_liouville(c.f, c.a, sample_grid(c.f.spec.domain, 11));
            if (!rep.passed) {
                detail = c.f.spec.components[0].source() + " fixture failed, max rel " +
                         std::to_string(rep.max_rel);
                return false;
            }
        }
        return true;
    });

    criterion("7 reconstructed-equation residuals for smooth frames", 5.0, [](std::string& detail) {
        const auto rep1 = verify_ode_residual(fixtures::sin_texp(), sample_grid({0.0, 3.0}, 11));
        if (!rep1.passed) {
            detail = "(sin t, t e^t) failed, max rel " + std::to_string(rep1.max_rel);
            return false;
        }
        const auto rep2 = verify_ode_residual(fixtures::poly_exp4(), sample_grid({-1.0, 1.0}, 11));
        if (!rep2.passed) {
            detail = "(1, t, t^2, e^t) failed, max rel " + std::to_string(rep2.max_rel);
            return false;
        }
        return true;
    });

    criterion("8 range equivalence: 100 randomized recoveries plus the spectral rejection", 20.0,
              [](std::string& detail) {
                  std::mt19937 rng(424242);
                  std::uniform_int_distribution<int> entry(-3, 3);
                  const Frame g2 = fixtures::exp12();
                  const Frame g3 = fixtures::exp3();
                  const std::vector<double> pts = sample_grid({-1.0, 1.0}, 11);
                  for (int trial = 0; trial < 100; ++trial) {
                      const Frame& g = (trial % 2 == 0) ? g2 : g3;
                      const int n = g.n();
                      Matrix<double> a(n, n, 0.0);
                      do {
                          for (int i = 0; i < n; ++i)
                              for (int j = 0; j < n; ++j) a.at(i, j) = entry(rng);
                      } while (std::abs(det(a)) < 1.0);
                      const Frame af = fixtures::linear_combination(a, g);
                      const EquivalenceResult res = range_equivalent(af, g, pts);
                      if (!res.equivalent) {
                          detail = "trial " + std::to_string(trial) + " not detected as equivalent";
                          return false;
                      }
                      for (int i = 0; i < n; ++i)
                          for (int j = 0; j < n; ++j)
                              if (std::abs(res.A->at(i, j) - a.at(i, j)) > 1e-7) {
                                  detail = "trial " + std::to_string(trial) + " recovered A off by " +
                                           std::to_string(std::abs(res.A->at(i, j) - a.at(i, j)));
                                  return false;
                              }
                  }
                  Frame h(VectorFunctionSpec::parse_all({"exp(t)", "exp(3*t)"}, {-1.0, 1.0}));
                  const EquivalenceResult neg = range_equivalent(fixtures::exp12(), h, pts);
                  if (neg.equivalent || neg.witness_j != 1) {
                      detail = "spectral pair was not rejected with a phi[1] witness";
                      return false;
                  }
                  if (std::abs(neg.witness_phi_f - 3.0) > 1e-6 || std::abs(neg.witness_phi_g - 4.0) > 1e-6) {
                      detail = "witness values are not 3 vs 4";
                      return false;
                  }
                  return true;
              });

    criterion("9 CLI end-to-end: bundled config passes, json byte-stable", 5.0, [](std::string& detail) {
        const std::string cli = LIOUVILLE_CLI_PATH;
        const std::string cfg = std::string(LIOUVILLE_EXAMPLES_DIR) + "/exp12.cfg";
        const std::string out1 = "acceptance_cli_1.json", out2 = "acceptance_cli_2.json";
        const int rc1 = std::system((cli + " verify --config " + cfg + " > " + out1 + " 2>/dev/null").c_str());
        const int rc2 = std::system((cli + " verify --config " + cfg + " > " + out2 + " 2>/dev/null").c_str());
        const bool ok1 = rc1 != -1 && WIFEXITED(rc1) && WEXITSTATUS(rc1) == 0;
        const bool ok2 = rc2 != -1 && WIFEXITED(rc2) && WEXITSTATUS(rc2) == 0;
        if (!ok1 || !ok2) {
            detail = "CLI exit status nonzero";
            return false;
        }
        const std::string a = slurp(out1), b = slurp(out2);
        std::remove(out1.c_str());
        std::remove(out2.c_str());
        if (a.empty() || a != b) {
            detail = "json output differs between runs";
            return false;
        }
        if (a.find("\"passed\":true") == std::string::npos) {
            detail = "verification did not pass";
            return false;
        }
        return true;
    });

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
