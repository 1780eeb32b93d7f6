#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "placenames/corpus.hpp"
#include "placenames/features.hpp"
#include "placenames/score_table.hpp"

namespace placenames {

enum class TestMethod : std::uint8_t { welch_t, pooled_t, mann_whitney };

struct TestResult {
    double statistic = 0.0;  // t, or U of sample 1 for Mann-Whitney
    double p_value = 1.0;
    TestMethod method = TestMethod::welch_t;
    std::int64_t n1 = 0;
    std::int64_t n2 = 0;
    bool two_tailed = true;
    double df = 0.0;  // t-tests only (Welch-Satterthwaite or pooled)
};

// Welch's unequal-variance t-test. One-tailed p is for mean1 > mean2.
// Degenerate inputs (both variances zero): p = 1 when the means agree,
// p = 0 (statistic +-inf) when they differ.
TestResult welch_t(std::span<const double> sample1, std::span<const double> sample2,
                   bool two_tailed = true);

// Pooled-variance t-test, df = n1 + n2 - 2.
TestResult pooled_t(std::span<const double> sample1, std::span<const double> sample2,
                    bool two_tailed = true);

// Mann-Whitney U with midrank tie handling. Exact permutation enumeration
// when n1 + n2 <= 12; otherwise the normal approximation with tie-corrected
// variance and 0.5 continuity correction.
TestResult mann_whitney(std::span<const double> sample1, std::span<const double> sample2,
                        bool two_tailed = true);

struct PearsonResult {
    double r = 0.0;
    double p = 1.0;
};

// Sample correlation; significance from the t transform with n-2 df.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
    std::array<double, 100> r{};         // 10x10 row-major, kPairCountries order
    std::array<double, 100> p{};
    std::array<double, 10> column_means{};  // mean of the 9 off-diagonal r per column

    double r_at(int i, int j) const { return r[i * 10 + j]; }
    double p_at(int i, int j) const { return p[i * 10 + j]; }
};

// Pairwise Pearson over the ENG rows' ten score columns. Requires complete
// ENG rows (all ten scores present).
CorrelationMatrix correlation_matrix(const ScoreTable& table);

// log10(1 + 1/d) for d in 1..9.
double benford_probability(int digit);

// Descending frequency of letters occurring at `position`, over the names
// long enough to have that position. Frequencies sum to 1. Diagnostic.
std::vector<std::pair<char, double>> letter_position_frequencies(
    std::span<const PlaceName> names, Position position);

// --- numeric kernels (exposed for the oracle-grid tests) ---

// Regularized incomplete beta I_x(a,b) via Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
double normal_cdf(double x);

}  // namespace placenames
