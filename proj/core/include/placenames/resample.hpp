#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "placenames/dataset.hpp"

namespace placenames {

struct ResampleConfig {
    int smote_k = 5;  // neighbors for interpolation (capped at minority-1)
    int enn_k = 3;    // must be odd
    std::uint64_t rng_seed = 0;
};

enum class RowOrigin : std::uint8_t { real, synthetic };

struct ResampledSet {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    std::vector<RowOrigin> origin;
    std::vector<std::uint32_t> removed;  // pre-removal row indices dropped by ENN

    std::size_t rows() const { return y.size(); }
};

// Grows the minority class to the majority count with synthetic points
// x + lambda * (nn - x), lambda uniform in [0,1), nn one of the smote_k
// same-class Euclidean nearest neighbors. Balanced input is a no-op.
// Minority class smaller than 2 -> ResampleError.
ResampledSet smote(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                   const ResampleConfig& cfg);

// Single-pass edited-nearest-neighbour cleaning: drops (from both classes)
// every row whose label disagrees with the majority label of its enn_k
// nearest neighbors among all other pre-removal rows. Ties in distance break
// toward the lower row index. Emptying a class -> ResampleError.
ResampledSet enn_clean(const ResampledSet& data, const ResampleConfig& cfg);

// smote followed by enn_clean; deterministic under cfg.rng_seed.
ResampledSet smote_enn(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                       const ResampleConfig& cfg);

}  // namespace placenames
