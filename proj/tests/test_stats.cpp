#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "placenames/errors.hpp"
#include "placenames/rng.hpp"
#include "placenames/stats.hpp"
#include "support/t_cdf_grid.hpp"

using namespace placenames;

namespace {


std::vector<double> vec(std::initializer_list<double> xs) { return xs; }

// independent enumeration oracle: direct pair counting, not rank sums
double mw_u_by_pairs(const std::vector<double>& s1, const std::vector<double>& s2) {
    double u = 0.0;
    for (const double x : s1) {
        for (const double y : s2) {
            if (x > y) u += 1.0;
            else if (x == y) u += 0.5;
        }
    }
    return u;
}

double mw_brute_force_p(const std::vector<double>& s1, const std::vector<double>& s2) {
    std::vector<double> pooled(s1);
    pooled.insert(pooled.end(), s2.begin(), s2.end());
    const std::size_t n = pooled.size();
    const std::size_t n1 = s1.size();
    const double mean = static_cast<double>(n1) * static_cast<double>(n - n1) / 2.0;
    const double dev = std::fabs(mw_u_by_pairs(s1, s2) - mean);
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n1), true);
    std::sort(mask.begin(), mask.end());
    std::uint64_t hits = 0;
    std::uint64_t total = 0;
    do {
        std::vector<double> g1, g2;
        for (std::size_t i = 0; i < n; ++i) (mask[i] ? g1 : g2).push_back(pooled[i]);
        if (std::fabs(mw_u_by_pairs(g1, g2) - mean) >= dev - 1e-9) ++hits;
        ++total;
    } while (std::next_permutation(mask.begin(), mask.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

TEST_SUITE_BEGIN("stats");

TEST_CASE("student t CDF matches the high-precision grid to 1e-10") {
    for (const auto& c : testsupport::kTCdfGrid) {
        CHECK_MESSAGE(std::fabs(student_t_cdf(c.t, c.df) - c.cdf) <= 1e-10,
                      "t=" << c.t << " df=" << c.df);
    }
}

TEST_CASE("normal CDF matches the grid and basic identities") {
    for (const auto& c : testsupport::kNormalCdfGrid) {
        CHECK(std::fabs(normal_cdf(c.x) - c.cdf) <= 1e-12);
    }
    CHECK(normal_cdf(0.0) == 0.5);
    for (const double x : {0.3, 1.7, 4.2}) {
        CHECK(normal_cdf(-x) == doctest::Approx(1.0 - normal_cdf(x)).epsilon(1e-14));
    }
}

TEST_CASE("t CDF identities: symmetry and monotonicity") {
    for (const double df : {1.0, 3.5, 12.0, 250.0}) {
        CHECK(student_t_cdf(0.0, df) == 0.5);
        double prev = 0.0;
        for (double t = -25.0; t <= 25.0; t += 0.5) {
            const double cdf = student_t_cdf(t, df);
            CHECK(cdf >= prev);
            prev = cdf;
            CHECK(student_t_cdf(-t, df) == doctest::Approx(1.0 - cdf).epsilon(1e-12));
        }
    }
}

TEST_CASE("welch on the shifted-window reference") {
    const auto res = welch_t(vec({1, 2, 3, 4, 5}), vec({2, 3, 4, 5, 6}));
    CHECK(res.statistic == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(res.df == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(res.p_value == doctest::Approx(0.34659350708733425).epsilon(1e-12));
    CHECK(res.method == TestMethod::welch_t);
    CHECK(res.n1 == 5);
    CHECK(res.n2 == 5);
}

TEST_CASE("welch/pooled edge conventions") {
    const auto same = welch_t(vec({1, 2, 3}), vec({1, 2, 3}));
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    const auto flat_eq = welch_t(vec({2, 2, 2}), vec({2, 2}));
    CHECK(flat_eq.p_value == 1.0);
    const auto flat_ne = welch_t(vec({2, 2, 2}), vec({3, 3}));
    CHECK(flat_ne.p_value == 0.0);
    CHECK(std::isinf(flat_ne.statistic));
    CHECK(flat_ne.statistic < 0);

    CHECK_THROWS_AS(welch_t(vec({1}), vec({1, 2})), ContractError);
}

TEST_CASE("pooled equals welch when sizes and variances are equal") {
    const auto w = welch_t(vec({1, 2, 3}), vec({4, 5, 6}));
    const auto p = pooled_t(vec({1, 2, 3}), vec({4, 5, 6}));
    CHECK(p.statistic == doctest::Approx(w.statistic).epsilon(1e-14));
    CHECK(p.df == 4.0);
    CHECK(w.df == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("pooled on the shifted-window reference") {
    const auto res = pooled_t(vec({1, 2, 3, 4, 5}), vec({2, 3, 4, 5, 6}));
    CHECK(res.statistic == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(res.df == 8.0);
    CHECK(res.p_value == doctest::Approx(0.34659350708733425).epsilon(1e-12));
}

TEST_CASE("one-tailed p is the greater-direction tail") {
    const auto res = welch_t(vec({4, 5, 6}), vec({1, 2, 3}), false);
    const auto two = welch_t(vec({4, 5, 6}), vec({1, 2, 3}), true);
    CHECK(two.p_value == doctest::Approx(std::min(1.0, 2.0 * res.p_value)).epsilon(1e-12));
}

TEST_CASE("mann-whitney exact small cases") {
    const auto res = mann_whitney(vec({1, 2}), vec({3, 4}));
    CHECK(res.statistic == 0.0);
    CHECK(res.p_value == doctest::Approx(2.0 / 6.0).epsilon(1e-14));

    CHECK(mann_whitney(vec({1, 3}), vec({2, 4})).p_value == doctest::Approx(2.0 / 3.0));
    CHECK(mann_whitney(vec({1, 2, 3, 7}), vec({4, 5, 6, 8})).p_value == doctest::Approx(0.2));

    const auto ties = mann_whitney(vec({1, 2, 2, 3}), vec({2, 3, 4}));
    CHECK(ties.statistic == doctest::Approx(2.5));
    CHECK(ties.p_value == doctest::Approx(2.0 / 7.0).epsilon(1e-14));

    CHECK(mann_whitney(vec({5, 5, 5}), vec({5, 5})).p_value == 1.0);
}

TEST_CASE("mann-whitney exact path equals brute-force enumeration, n <= 8") {
    const std::vector<std::vector<double>> pools = {
        {1, 2, 3, 4, 5, 6, 7, 8},
        {1, 1, 2, 2, 3, 3, 4, 4},
        {0.5, 0.5, 0.5, 1.5, 2.5, 2.5, 9, 9},
    };
    for (const auto& pool : pools) {
        for (std::size_t n1 = 1; n1 < pool.size(); ++n1) {
            const std::vector<double> s1(pool.begin(), pool.begin() + static_cast<long>(n1));
            const std::vector<double> s2(pool.begin() + static_cast<long>(n1), pool.end());
            const double expected = mw_brute_force_p(s1, s2);
            const auto res = mann_whitney(s1, s2);
            CHECK_MESSAGE(res.p_value == doctest::Approx(expected).epsilon(1e-12),
                          "n1=" << n1 << " pool0=" << pool[0]);
        }
    }
}

TEST_CASE("mann-whitney symmetry: U1 + U2 = n1*n2, same p") {
    const auto a = mann_whitney(vec({1, 2, 2, 9}), vec({3, 4, 5}));
    const auto b = mann_whitney(vec({3, 4, 5}), vec({1, 2, 2, 9}));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-14));
    CHECK(a.statistic + b.statistic == doctest::Approx(12.0));
}

TEST_CASE("mann-whitney asymptotic path matches the reference computation") {
    // n = 15 forces the normal approximation; value frozen from scipy's
    // tie-corrected asymptotic method with continuity correction
    const auto res = mann_whitney(vec({1, 2, 2, 3, 5, 9, 9}), vec({2, 3, 4, 4, 6, 7, 8, 9}));
    CHECK(res.statistic == doctest::Approx(21.5));
    CHECK(res.p_value == doctest::Approx(0.48352205986804897).epsilon(1e-9));
}

TEST_CASE("mann-whitney exact and asymptotic agree within 0.02 at n1=n2=6") {
    const std::vector<std::vector<double>> pools = {
        {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12},
        {1, 4, 2, 9, 7, 12, 3, 8, 5, 11, 6, 10},
    };
    for (const auto& pool : pools) {
        const std::vector<double> s1(pool.begin(), pool.begin() + 6);
        const std::vector<double> s2(pool.begin() + 6, pool.end());
        const auto exact = mann_whitney(s1, s2);  // n=12 -> exact path
        // normal approximation computed the documented way
        const double u = exact.statistic;
        const double mean = 18.0;
        const double sd = std::sqrt(6.0 * 6.0 * 13.0 / 12.0);
        const double z = std::max(0.0, std::fabs(u - mean) - 0.5) / sd;
        const double approx = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
        CHECK(std::fabs(exact.p_value - approx) < 0.02);
    }
}

TEST_CASE("pearson basics and reference") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y;
    for (const double v : x) y.push_back(2.0 * v + 1.0);
    CHECK(pearson(x, y).r == doctest::Approx(1.0));
    CHECK(pearson(x, y).p == 0.0);
    for (auto& v : y) v = -v;
    CHECK(pearson(x, y).r == doctest::Approx(-1.0));

    const auto ref = pearson(x, vec({1.2, 1.9, 3.2, 4.1, 4.8}));
    CHECK(ref.r == doctest::Approx(0.9946115458726394).epsilon(1e-12));
    CHECK(ref.p == doctest::Approx(0.00047443727727795637).epsilon(1e-9));

    CHECK_THROWS_AS(pearson(vec({1, 1, 1}), vec({1, 2, 3})), DataError);
    CHECK_THROWS_AS(pearson(vec({1, 2}), vec({1, 2})), ContractError);
}

TEST_CASE("pearson is scale invariant") {
    const std::vector<double> x = {0.3, 1.5, -2.0, 4.4, 0.0, 9.1};
    for (const double a : {0.5, 3.0}) {
        for (const double b : {-7.0, 0.0, 2.0}) {
            std::vector<double> y;
            for (const double v : x) y.push_back(a * v + b);
            CHECK(pearson(x, y).r == doctest::Approx(1.0).epsilon(1e-12));
            for (auto& v : y) v = -v;
            CHECK(pearson(x, y).r == doctest::Approx(-1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("correlation matrix on constructed score columns") {
    ScoreTable table;
    Rng rng_state(3);
    std::vector<double> base(40);
    for (auto& v : base) v = 0.1 + 0.8 * (static_cast<double>(rng_state.next() % 1000) / 1000.0);
    for (std::size_t i = 0; i < base.size(); ++i) {
        ScoreRow row;
        row.name = "n" + std::to_string(i);
        row.country = Country::ENG;
        for (int p = 0; p < 10; ++p) {
            row.scores[p] = std::clamp(base[i] + 0.01 * p * ((i % 3) - 1.0), 0.0, 1.0);
        }
        row.scores[1] = row.scores[0];  // duplicate column -> r = 1
        row.ensemble = 0.5;
        table.rows.push_back(row);
    }
    const CorrelationMatrix m = correlation_matrix(table);
    CHECK(m.r_at(0, 1) == doctest::Approx(1.0));
    for (int i = 0; i < 10; ++i) {
        CHECK(m.r_at(i, i) == 1.0);
        for (int j = 0; j < 10; ++j) {
            CHECK(m.r_at(i, j) == m.r_at(j, i));
            CHECK(std::fabs(m.r_at(i, j)) <= 1.0);
        }
    }
    for (int j = 0; j < 10; ++j) {
        double sum = 0.0;
        for (int i = 0; i < 10; ++i) {
            if (i != j) sum += m.r_at(i, j);
        }
        CHECK(m.column_means[j] == doctest::Approx(sum / 9.0).epsilon(1e-14));
    }
}

TEST_CASE("benford probabilities") {
    CHECK(benford_probability(1) == doctest::Approx(0.3010299956639812).epsilon(1e-14));
    CHECK(benford_probability(2) == doctest::Approx(0.17609125905568124).epsilon(1e-14));
    // the formula value; the paper's quoted 0.041 for d=9 is a typo
    CHECK(benford_probability(9) == doctest::Approx(0.045757490560675125).epsilon(1e-14));
    CHECK_THROWS_AS(benford_probability(0), ContractError);
    CHECK_THROWS_AS(benford_probability(10), ContractError);
}

TEST_CASE("letter position frequencies") {
    std::vector<PlaceName> names = {
        {"anna", "anna", Country::ENG},
        {"ash", "ash", Country::ENG},
    };
    const auto first = letter_position_frequencies(names, Position::first);
    REQUIRE(first.size() == 1);
    CHECK(first[0].first == 'a');
    CHECK(first[0].second == 1.0);

    const auto last = letter_position_frequencies(names, Position::last);
    REQUIRE(last.size() == 2);
    CHECK(last[0].first == 'a');  // tie at 0.5 breaks alphabetically
    CHECK(last[1].first == 'h');

    const auto fourth = letter_position_frequencies(names, Position::fourth);
    double sum = 0.0;
    for (const auto& [letter, freq] : fourth) sum += freq;
    CHECK(sum == doctest::Approx(1.0));
    CHECK_THROWS_AS(letter_position_frequencies({}, Position::first), ContractError);
}

TEST_SUITE_END();
