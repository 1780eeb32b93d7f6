#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "placenames/errors.hpp"

namespace placenames {

// Dense row-major float matrix. Features are 0/1 flags and small rates, so
// float keeps a full England-Sweden pair under 50 MB.
struct FeatureMatrix {
    std::vector<float> values;
    std::size_t cols = 0;

    FeatureMatrix() = default;
    explicit FeatureMatrix(std::size_t n_cols) : cols(n_cols) {}

    std::size_t rows() const { return cols == 0 ? 0 : values.size() / cols; }

    std::span<const float> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
    std::span<float> row(std::size_t i) { return {values.data() + i * cols, cols}; }

    void push_row(std::span<const float> r) {
        if (r.size() != cols) throw ContractError("push_row: width mismatch");
        values.insert(values.end(), r.begin(), r.end());
    }

    void reserve_rows(std::size_t n) { values.reserve(values.size() + n * cols); }
};

// Feature rows + binary labels (1 = England) + back-reference of every row
// to its PlaceName (index into the owning corpus' names vector).
struct LabeledDataset {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    std::vector<std::int32_t> name_ref;

    std::size_t rows() const { return y.size(); }
};

}  // namespace placenames
