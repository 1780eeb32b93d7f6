#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "placenames/dataset.hpp"
#include "placenames/rng.hpp"

namespace placenames {

struct ForestConfig {
    enum class FeatureRule : std::uint8_t { sqrt_total, all };

    int n_trees = 100;
    std::optional<int> max_depth;  // nullopt = unbounded
    int min_samples_split = 5;
    FeatureRule features_per_split = FeatureRule::sqrt_total;
    bool bootstrap = true;
    std::uint64_t rng_seed = 0;
};

// Flat node arena; node 0 is the root. Split nodes route x[feature] <=
// threshold to `left`. Leaves have feature == kLeafMarker and store the
// class counts in (left, right) = (count0, count1).
struct TreeNode {
    std::int32_t feature = kLeafMarker;
    float threshold = 0.0f;
    std::uint32_t left = 0;
    std::uint32_t right = 0;

    static constexpr std::int32_t kLeafMarker = -1;
    bool is_leaf() const { return feature == kLeafMarker; }
};

struct Tree {
    std::vector<TreeNode> nodes;

    // probability of class 1 at the leaf x falls into
    double predict_proba(std::span<const float> x) const;
};

struct ForestModel {
    std::vector<Tree> trees;
    ForestConfig config;
    std::string schema_version;
    std::uint32_t n_features = 0;

    // mean over trees of the leaf class-1 frequency; x must have n_features
    // entries (ContractError otherwise)
    double predict_proba(std::span<const float> x) const;
};

// CART impurity 1 - sum(p_i^2) for a two-class count pair.
double gini(std::int64_t count0, std::int64_t count1);

// Grows one CART tree on the full row set. Split search: per node, a random
// subset of features (sqrt(263) = 16 by default; features constant within
// the node do not use up the budget), candidate thresholds at midpoints of
// consecutive distinct values, minimize weighted child Gini; ties break to
// the lowest feature slot, then the lowest threshold. Stops on purity, node
// size < min_samples_split, or depth.
Tree fit_tree(const FeatureMatrix& x, std::span<const std::uint8_t> y, const ForestConfig& cfg,
              Rng& rng);

// Bags cfg.n_trees trees, each on its own bootstrap sample (n draws with
// replacement) and its own RNG stream derived from cfg.rng_seed. Requires
// both classes present.
ForestModel fit_forest(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                       const ForestConfig& cfg, std::string schema_version = "raw");

// Self-describing little-endian binary serialization; bit-exact round trip.
void save_forest(const ForestModel& model, std::ostream& out);
ForestModel load_forest(std::istream& in);
void save_forests(std::span<const ForestModel> models, const std::filesystem::path& path);
std::vector<ForestModel> load_forests(const std::filesystem::path& path);

}  // namespace placenames
