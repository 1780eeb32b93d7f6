#include "placenames/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "placenames/errors.hpp"

namespace placenames {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments {
    double mean;
    double var;  // unbiased (ddof = 1)
};

Moments moments(std::span<const double> xs) {
    const auto n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return {mean, xs.size() > 1 ? ss / (n - 1.0) : 0.0};
}

// two-tailed p from a t statistic; one-tailed is for the "greater" direction
double t_pvalue(double t, double df, bool two_tailed) {
    if (std::isinf(t)) return 0.0;
    if (two_tailed) {
        const double tail = 1.0 - student_t_cdf(std::fabs(t), df);
        return std::min(1.0, 2.0 * tail);
    }
    return 1.0 - student_t_cdf(t, df);
}

double betacf(double a, double b, double x) {
    // Lentz's algorithm (continued fraction for the incomplete beta)
    constexpr int kMaxIter = 400;
    constexpr double kEps = 3.0e-16;
    constexpr double kFpMin = 1.0e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ContractError("incomplete beta: a,b must be positive");
    if (x < 0.0 || x > 1.0) throw ContractError("incomplete beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw ContractError("student_t_cdf: df must be positive");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t < 0.0 ? tail : 1.0 - tail;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TestResult welch_t(std::span<const double> sample1, std::span<const double> sample2,
                   bool two_tailed) {
    if (sample1.size() < 2 || sample2.size() < 2) {
        throw ContractError("welch_t: both samples need n >= 2");
    }
    const Moments m1 = moments(sample1);
    const Moments m2 = moments(sample2);
    const auto n1 = static_cast<double>(sample1.size());
    const auto n2 = static_cast<double>(sample2.size());
    TestResult res;
    res.method = TestMethod::welch_t;
    res.n1 = static_cast<std::int64_t>(sample1.size());
    res.n2 = static_cast<std::int64_t>(sample2.size());
    res.two_tailed = two_tailed;
    const double se2 = m1.var / n1 + m2.var / n2;
    if (se2 == 0.0) {
        res.df = n1 + n2 - 2.0;
        if (m1.mean == m2.mean) {
            res.statistic = 0.0;
            res.p_value = 1.0;
        } else {
            res.statistic = m1.mean > m2.mean ? kInf : -kInf;
            res.p_value = 0.0;
        }
        return res;
    }
    res.statistic = (m1.mean - m2.mean) / std::sqrt(se2);
    const double a = m1.var / n1;
    const double b = m2.var / n2;
    res.df = se2 * se2 / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
    res.p_value = t_pvalue(res.statistic, res.df, two_tailed);
    return res;
}

TestResult pooled_t(std::span<const double> sample1, std::span<const double> sample2,
                    bool two_tailed) {
    if (sample1.size() < 2 || sample2.size() < 2) {
        throw ContractError("pooled_t: both samples need n >= 2");
    }
    const Moments m1 = moments(sample1);
    const Moments m2 = moments(sample2);
    const auto n1 = static_cast<double>(sample1.size());
    const auto n2 = static_cast<double>(sample2.size());
    TestResult res;
    res.method = TestMethod::pooled_t;
    res.n1 = static_cast<std::int64_t>(sample1.size());
    res.n2 = static_cast<std::int64_t>(sample2.size());
    res.two_tailed = two_tailed;
    res.df = n1 + n2 - 2.0;
    const double sp2 = ((n1 - 1.0) * m1.var + (n2 - 1.0) * m2.var) / res.df;
    const double se = std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
    if (se == 0.0) {
        if (m1.mean == m2.mean) {
            res.statistic = 0.0;
            res.p_value = 1.0;
        } else {
            res.statistic = m1.mean > m2.mean ? kInf : -kInf;
            res.p_value = 0.0;
        }
        return res;
    }
    res.statistic = (m1.mean - m2.mean) / se;
    res.p_value = t_pvalue(res.statistic, res.df, two_tailed);
    return res;
}

namespace {

// midranks of the pooled sample (1-based; ties share the average rank)
std::vector<double> midranks(std::span<const double> pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double u_from_rank_sum(double rank_sum, std::size_t n1) {
    return rank_sum - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
}

// exact two-tailed p by enumerating all C(n, n1) assignments; the U null
// distribution is symmetric about n1*n2/2 even under ties
double mw_exact_p(const std::vector<double>& ranks, std::size_t n1, double u_obs) {
    const std::size_t n = ranks.size();
    const double mean = static_cast<double>(n1) * static_cast<double>(n - n1) / 2.0;
    const double dev = std::fabs(u_obs - mean);
    std::vector<std::size_t> comb(n1);
    std::iota(comb.begin(), comb.end(), 0);
    std::uint64_t hits = 0;
    std::uint64_t total = 0;
    for (;;) {
        double rank_sum = 0.0;
        for (const std::size_t idx : comb) rank_sum += ranks[idx];
        const double u = u_from_rank_sum(rank_sum, n1);
        if (std::fabs(u - mean) >= dev - 1e-9) ++hits;
        ++total;
        // next combination in lexicographic order
        std::size_t k = n1;
        while (k > 0 && comb[k - 1] == n - n1 + k - 1) --k;
        if (k == 0) break;
        ++comb[k - 1];
        for (std::size_t j = k; j < n1; ++j) comb[j] = comb[j - 1] + 1;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

TestResult mann_whitney(std::span<const double> sample1, std::span<const double> sample2,
                        bool two_tailed) {
    if (sample1.empty() || sample2.empty()) {
        throw ContractError("mann_whitney: both samples must be non-empty");
    }
    const std::size_t n1 = sample1.size();
    const std::size_t n2 = sample2.size();
    const std::size_t n = n1 + n2;
    std::vector<double> pooled;
    pooled.reserve(n);
    pooled.insert(pooled.end(), sample1.begin(), sample1.end());
    pooled.insert(pooled.end(), sample2.begin(), sample2.end());
    const std::vector<double> ranks = midranks(pooled);
    double rank_sum1 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) rank_sum1 += ranks[i];
    const double u1 = u_from_rank_sum(rank_sum1, n1);

    TestResult res;
    res.method = TestMethod::mann_whitney;
    res.statistic = u1;
    res.n1 = static_cast<std::int64_t>(n1);
    res.n2 = static_cast<std::int64_t>(n2);
    res.two_tailed = two_tailed;

    const double mean = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
    if (n <= 12) {
        const double p2 = mw_exact_p(ranks, n1, u1);
        res.p_value = two_tailed ? p2 : (u1 >= mean ? p2 / 2.0 : 1.0 - p2 / 2.0);
        return res;
    }

    // tie-corrected variance
    double tie_term = 0.0;
    {
        std::vector<double> sorted(pooled);
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }
    const double nn = static_cast<double>(n);
    const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                       ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    if (var <= 0.0) {  // every value identical
        res.p_value = 1.0;
        return res;
    }
    const double sd = std::sqrt(var);
    if (two_tailed) {
        const double z = std::max(0.0, std::fabs(u1 - mean) - 0.5) / sd;
        res.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
    } else {
        const double z = (u1 - mean - 0.5) / sd;
        res.p_value = 1.0 - normal_cdf(z);
    }
    return res;
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ContractError("pearson: length mismatch");
    if (x.size() < 3) throw ContractError("pearson: need n >= 3");
    const auto n = static_cast<double>(x.size());
    const Moments mx = moments(x);
    const Moments my = moments(y);
    if (mx.var == 0.0 || my.var == 0.0) {
        throw DataError("pearson: undefined correlation (zero variance)");
    }
    double cov = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (x[i] - mx.mean) * (y[i] - my.mean);
    }
    cov /= n - 1.0;
    double r = cov / std::sqrt(mx.var * my.var);
    r = std::clamp(r, -1.0, 1.0);
    PearsonResult res;
    res.r = r;
    if (std::fabs(r) == 1.0) {
        res.p = 0.0;
        return res;
    }
    const double df = n - 2.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    res.p = std::min(1.0, 2.0 * (1.0 - student_t_cdf(std::fabs(t), df)));
    return res;
}

CorrelationMatrix correlation_matrix(const ScoreTable& table) {
    std::array<std::vector<double>, 10> columns;
    for (const ScoreRow& row : table.rows) {
        if (row.country != Country::ENG) continue;
        for (int i = 0; i < 10; ++i) {
            if (!row.has_score(i)) {
                throw DataError("correlation_matrix: ENG row '" + row.name +
                                "' is missing a pair score");
            }
            columns[i].push_back(row.scores[i]);
        }
    }
    if (columns[0].size() < 3) throw DataError("correlation_matrix: too few ENG rows");
    CorrelationMatrix m;
    for (int i = 0; i < 10; ++i) {
        m.r[i * 10 + i] = 1.0;
        m.p[i * 10 + i] = 0.0;
        for (int j = i + 1; j < 10; ++j) {
            const PearsonResult pr = pearson(columns[i], columns[j]);
            m.r[i * 10 + j] = m.r[j * 10 + i] = pr.r;
            m.p[i * 10 + j] = m.p[j * 10 + i] = pr.p;
        }
    }
    for (int j = 0; j < 10; ++j) {
        double sum = 0.0;
        for (int i = 0; i < 10; ++i) {
            if (i != j) sum += m.r_at(i, j);
        }
        m.column_means[j] = sum / 9.0;
    }
    return m;
}

double benford_probability(int digit) {
    if (digit < 1 || digit > 9) throw ContractError("benford_probability: digit must be 1..9");
    return std::log10(1.0 + 1.0 / static_cast<double>(digit));
}

std::vector<std::pair<char, double>> letter_position_frequencies(
    std::span<const PlaceName> names, Position position) {
    if (names.empty()) throw ContractError("letter_position_frequencies: empty corpus");
    std::array<std::int64_t, 26> counts{};
    std::int64_t total = 0;
    const int p = static_cast<int>(position);
    for (const PlaceName& name : names) {
        const std::string& s = name.normalized;
        const std::size_t need = static_cast<std::size_t>(p < 4 ? p : p - 4);
        if (s.size() <= need) continue;
        const char c = p < 4 ? s[need] : s[s.size() - 1 - need];
        counts[c - 'a']++;
        ++total;
    }
    std::vector<std::pair<char, double>> out;
    if (total == 0) return out;
    for (int l = 0; l < 26; ++l) {
        if (counts[l] == 0) continue;
        out.emplace_back(static_cast<char>('a' + l),
                         static_cast<double>(counts[l]) / static_cast<double>(total));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace placenames
