#include "placenames/resample.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "placenames/errors.hpp"
#include "placenames/rng.hpp"

namespace placenames {

namespace {

// Squared Euclidean distance with fixed-order lane accumulation: the eight
// partial sums vectorize, and the combine order never changes, so distances
// are bit-identical across runs and thread counts.
float dist2(const float* a, const float* b, std::size_t n) {
    float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        for (int l = 0; l < 8; ++l) {
            const float d = a[j + l] - b[j + l];
            acc[l] += d * d;
        }
    }
    float tail = 0.0f;
    for (; j < n; ++j) {
        const float d = a[j] - b[j];
        tail += d * d;
    }
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) +
           tail;
}

struct Neighbor {
    float d;
    std::uint32_t idx;
};

// k nearest rows for every row of m (self excluded), ties broken toward the
// lower row index. Brute force with block tiling; n*k output.
std::vector<std::uint32_t> knn_all(const FeatureMatrix& m, int k) {
    const std::size_t n = m.rows();
    const std::size_t cols = m.cols;
    const auto kk = static_cast<std::size_t>(k);
    std::vector<Neighbor> best(n * kk, Neighbor{std::numeric_limits<float>::infinity(), 0});

    constexpr std::size_t kQueryBlock = 64;
    constexpr std::size_t kRefBlock = 256;
    for (std::size_t q0 = 0; q0 < n; q0 += kQueryBlock) {
        const std::size_t q1 = std::min(n, q0 + kQueryBlock);
        for (std::size_t r0 = 0; r0 < n; r0 += kRefBlock) {
            const std::size_t r1 = std::min(n, r0 + kRefBlock);
            for (std::size_t q = q0; q < q1; ++q) {
                Neighbor* top = best.data() + q * kk;
                const float* qrow = m.values.data() + q * cols;
                for (std::size_t r = r0; r < r1; ++r) {
                    if (r == q) continue;
                    const float d = dist2(qrow, m.values.data() + r * cols, cols);
                    Neighbor& worst = top[kk - 1];
                    if (d > worst.d || (d == worst.d && r > worst.idx)) continue;
                    // sorted insertion by (distance, index)
                    std::size_t pos = kk - 1;
                    while (pos > 0 &&
                           (d < top[pos - 1].d || (d == top[pos - 1].d && r < top[pos - 1].idx))) {
                        top[pos] = top[pos - 1];
                        --pos;
                    }
                    top[pos] = Neighbor{d, static_cast<std::uint32_t>(r)};
                }
            }
        }
    }
    std::vector<std::uint32_t> out(n * kk);
    for (std::size_t i = 0; i < n * kk; ++i) out[i] = best[i].idx;
    return out;
}

}  // namespace

ResampledSet smote(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                   const ResampleConfig& cfg) {
    if (x.rows() != y.size()) throw ContractError("smote: rows/labels mismatch");
    if (cfg.smote_k < 1) throw ContractError("smote: smote_k must be >= 1");

    std::size_t count1 = 0;
    for (const auto label : y) count1 += label;
    const std::size_t count0 = y.size() - count1;
    const std::uint8_t minority_label = count1 < count0 ? 1 : 0;
    const std::size_t minority = std::min(count0, count1);
    const std::size_t majority = std::max(count0, count1);

    ResampledSet out;
    out.x = FeatureMatrix(x.cols);
    out.x.values = x.values;
    out.y.assign(y.begin(), y.end());
    out.origin.assign(y.size(), RowOrigin::real);
    if (minority == majority) return out;  // balanced: nothing to synthesize
    if (minority < 2) throw ResampleError("smote: minority class has fewer than 2 members");

    // compact minority matrix for the neighbor search
    std::vector<std::uint32_t> minority_rows;
    minority_rows.reserve(minority);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == minority_label) minority_rows.push_back(static_cast<std::uint32_t>(i));
    }
    FeatureMatrix mx(x.cols);
    mx.reserve_rows(minority);
    for (const auto row : minority_rows) mx.push_row(x.row(row));

    const int k = std::min<int>(cfg.smote_k, static_cast<int>(minority) - 1);
    const std::vector<std::uint32_t> neighbors = knn_all(mx, k);

    Rng rng(derive_seed(cfg.rng_seed, "smote"));
    const std::size_t need = majority - minority;
    out.x.reserve_rows(need);
    std::vector<float> synth(x.cols);
    for (std::size_t g = 0; g < need; ++g) {
        const std::size_t base = rng.bounded(minority);
        const std::uint32_t nb = neighbors[base * k + rng.bounded(k)];
        const auto lambda = static_cast<float>(rng.uniform());
        const auto brow = mx.row(base);
        const auto nrow = mx.row(nb);
        for (std::size_t c = 0; c < x.cols; ++c) {
            synth[c] = brow[c] + lambda * (nrow[c] - brow[c]);
        }
        out.x.push_row(synth);
        out.y.push_back(minority_label);
        out.origin.push_back(RowOrigin::synthetic);
    }
    return out;
}

ResampledSet enn_clean(const ResampledSet& data, const ResampleConfig& cfg) {
    if (cfg.enn_k < 1 || cfg.enn_k % 2 == 0) throw ContractError("enn_clean: enn_k must be odd");
    const std::size_t n = data.rows();
    if (n < static_cast<std::size_t>(cfg.enn_k) + 1) {
        throw ContractError("enn_clean: need at least enn_k + 1 rows");
    }

    const std::vector<std::uint32_t> neighbors = knn_all(data.x, cfg.enn_k);
    std::vector<bool> keep(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        int votes1 = 0;
        for (int j = 0; j < cfg.enn_k; ++j) votes1 += data.y[neighbors[i * cfg.enn_k + j]];
        const std::uint8_t majority = votes1 * 2 > cfg.enn_k ? 1 : 0;
        keep[i] = majority == data.y[i];
    }

    ResampledSet out;
    out.x = FeatureMatrix(data.x.cols);
    std::size_t kept1 = 0;
    std::size_t kept0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!keep[i]) {
            out.removed.push_back(static_cast<std::uint32_t>(i));
            continue;
        }
        out.x.push_row(data.x.row(i));
        out.y.push_back(data.y[i]);
        out.origin.push_back(data.origin[i]);
        (data.y[i] ? kept1 : kept0)++;
    }
    if (kept0 == 0 || kept1 == 0) {
        throw ResampleError("enn_clean: removed every row of class " +
                            std::string(kept0 == 0 ? "0" : "1"));
    }
    return out;
}

ResampledSet smote_enn(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                       const ResampleConfig& cfg) {
    ResampledSet oversampled = smote(x, y, cfg);
    return enn_clean(oversampled, cfg);
}

}  // namespace placenames
