#include "placenames/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "placenames/errors.hpp"

namespace placenames {

double gini(std::int64_t count0, std::int64_t count1) {
    if (count0 < 0 || count1 < 0 || count0 + count1 < 1) {
        throw ContractError("gini: counts must be non-negative with positive total");
    }
    const double n = static_cast<double>(count0 + count1);
    const double p0 = static_cast<double>(count0) / n;
    const double p1 = static_cast<double>(count1) / n;
    return 1.0 - (p0 * p0 + p1 * p1);
}

namespace {

struct ValueLabel {
    float value;
    std::int32_t label;
};

struct BestSplit {
    double score = std::numeric_limits<double>::infinity();
    int feature = -1;
    float threshold = 0.0f;

    // minimize score; ties break to the lowest slot, then lowest threshold
    void offer(double s, int f, float t) {
        if (s < score || (s == score && (f < feature || (f == feature && t < threshold)))) {
            score = s;
            feature = f;
            threshold = t;
        }
    }
};

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, std::span<const std::uint8_t> y, const ForestConfig& cfg,
                Rng& rng)
        : x_(x), y_(y), cfg_(cfg), rng_(rng), feature_order_(x.cols) {
        want_features_ = cfg.features_per_split == ForestConfig::FeatureRule::all
                             ? static_cast<int>(x.cols)
                             : std::max(1, static_cast<int>(std::sqrt(static_cast<double>(x.cols))));
        scratch_.reserve(256);
    }

    Tree build(std::vector<std::uint32_t> rows) {
        Tree tree;
        struct Task {
            std::uint32_t node;
            std::uint32_t begin;
            std::uint32_t end;
            std::int32_t depth;
        };
        rows_ = std::move(rows);
        tree.nodes.emplace_back();
        std::vector<Task> stack;
        stack.push_back({0, 0, static_cast<std::uint32_t>(rows_.size()), 0});
        while (!stack.empty()) {
            const Task task = stack.back();
            stack.pop_back();
            const std::uint32_t size = task.end - task.begin;
            std::int64_t c1 = 0;
            for (std::uint32_t i = task.begin; i < task.end; ++i) c1 += y_[rows_[i]];
            const std::int64_t c0 = static_cast<std::int64_t>(size) - c1;

            const bool depth_stop = cfg_.max_depth && task.depth >= *cfg_.max_depth;
            const bool size_stop = size < static_cast<std::uint32_t>(cfg_.min_samples_split);
            const bool pure = c0 == 0 || c1 == 0;
            BestSplit best;
            if (!depth_stop && !size_stop && !pure) {
                best = find_best_split(task.begin, task.end, c0, c1);
            }
            if (best.feature < 0) {
                make_leaf(tree.nodes[task.node], c0, c1);
                continue;
            }
            const std::uint32_t mid = partition(task.begin, task.end, best);
            // a valid threshold always separates at least one row per side
            const auto left_idx = static_cast<std::uint32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            TreeNode& node = tree.nodes[task.node];
            node.feature = best.feature;
            node.threshold = best.threshold;
            node.left = left_idx;
            node.right = left_idx + 1;
            stack.push_back({left_idx, task.begin, mid, task.depth + 1});
            stack.push_back({left_idx + 1, mid, task.end, task.depth + 1});
        }
        return tree;
    }

private:
    static void make_leaf(TreeNode& node, std::int64_t c0, std::int64_t c1) {
        node.feature = TreeNode::kLeafMarker;
        node.left = static_cast<std::uint32_t>(c0);
        node.right = static_cast<std::uint32_t>(c1);
    }

    BestSplit find_best_split(std::uint32_t begin, std::uint32_t end, std::int64_t c0,
                              std::int64_t c1) {
        BestSplit best;
        const std::size_t n_features = x_.cols;
        std::iota(feature_order_.begin(), feature_order_.end(), 0);
        int evaluated = 0;
        // draw without replacement; constant features do not use up the
        // budget, so a splittable feature is always found if one exists
        for (std::size_t drawn = 0; drawn < n_features && evaluated < want_features_; ++drawn) {
            const std::size_t pick = drawn + rng_.bounded(n_features - drawn);
            std::swap(feature_order_[drawn], feature_order_[pick]);
            const int feature = static_cast<int>(feature_order_[drawn]);
            if (evaluate_feature(feature, begin, end, c0, c1, best)) ++evaluated;
        }
        return best;
    }

    // returns false if the feature is constant within the node
    bool evaluate_feature(int feature, std::uint32_t begin, std::uint32_t end, std::int64_t c0,
                          std::int64_t c1, BestSplit& best) {
        const std::uint32_t size = end - begin;
        scratch_.clear();
        scratch_.reserve(size);
        const float* col_base = x_.values.data() + feature;
        float lo = std::numeric_limits<float>::infinity();
        float hi = -std::numeric_limits<float>::infinity();
        for (std::uint32_t i = begin; i < end; ++i) {
            const std::uint32_t row = rows_[i];
            const float v = col_base[static_cast<std::size_t>(row) * x_.cols];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            scratch_.push_back({v, y_[row]});
        }
        if (lo == hi) return false;
        std::sort(scratch_.begin(), scratch_.end(),
                  [](const ValueLabel& a, const ValueLabel& b) { return a.value < b.value; });

        std::int64_t l0 = 0;
        std::int64_t l1 = 0;
        for (std::uint32_t i = 0; i + 1 < size; ++i) {
            (scratch_[i].label ? l1 : l0)++;
            if (scratch_[i].value == scratch_[i + 1].value) continue;
            float threshold = scratch_[i].value + (scratch_[i + 1].value - scratch_[i].value) * 0.5f;
            if (threshold >= scratch_[i + 1].value) threshold = scratch_[i].value;
            const std::int64_t nl = l0 + l1;
            const std::int64_t nr = static_cast<std::int64_t>(size) - nl;
            const double score = static_cast<double>(nl) * gini(l0, l1) +
                                 static_cast<double>(nr) * gini(c0 - l0, c1 - l1);
            best.offer(score, feature, threshold);
        }
        return true;
    }

    std::uint32_t partition(std::uint32_t begin, std::uint32_t end, const BestSplit& split) {
        const float* col_base = x_.values.data() + split.feature;
        auto* first = rows_.data() + begin;
        auto* last = rows_.data() + end;
        auto* mid = std::partition(first, last, [&](std::uint32_t row) {
            return col_base[static_cast<std::size_t>(row) * x_.cols] <= split.threshold;
        });
        return static_cast<std::uint32_t>(mid - rows_.data());
    }

    const FeatureMatrix& x_;
    std::span<const std::uint8_t> y_;
    const ForestConfig& cfg_;
    Rng& rng_;
    int want_features_;
    std::vector<std::uint32_t> rows_;
    std::vector<std::uint32_t> feature_order_;
    std::vector<ValueLabel> scratch_;
};

}  // namespace

Tree fit_tree(const FeatureMatrix& x, std::span<const std::uint8_t> y, const ForestConfig& cfg,
              Rng& rng) {
    if (x.rows() == 0 || x.rows() != y.size()) throw ContractError("fit_tree: bad inputs");
    if (cfg.min_samples_split < 2) throw ContractError("fit_tree: min_samples_split must be >= 2");
    std::vector<std::uint32_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    TreeBuilder builder(x, y, cfg, rng);
    return builder.build(std::move(rows));
}

double Tree::predict_proba(std::span<const float> x) const {
    const TreeNode* node = nodes.data();
    while (!node->is_leaf()) {
        node = nodes.data() + (x[node->feature] <= node->threshold ? node->left : node->right);
    }
    const double total = static_cast<double>(node->left) + static_cast<double>(node->right);
    return static_cast<double>(node->right) / total;
}

double ForestModel::predict_proba(std::span<const float> x) const {
    if (x.size() != n_features) throw ContractError("predict_proba: feature width mismatch");
    double sum = 0.0;
    for (const Tree& tree : trees) sum += tree.predict_proba(x);
    return sum / static_cast<double>(trees.size());
}

ForestModel fit_forest(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                       const ForestConfig& cfg, std::string schema_version) {
    if (x.rows() < 2 || x.rows() != y.size()) throw ContractError("fit_forest: bad inputs");
    if (cfg.n_trees < 1) throw ContractError("fit_forest: n_trees must be >= 1");
    const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
    const bool has1 = std::find(y.begin(), y.end(), 1) != y.end();
    if (!has0 || !has1) throw DataError("fit_forest: training data has a single class");

    ForestModel model;
    model.config = cfg;
    model.schema_version = std::move(schema_version);
    model.n_features = static_cast<std::uint32_t>(x.cols);
    model.trees.resize(cfg.n_trees);
    const std::size_t n = x.rows();
    for (int t = 0; t < cfg.n_trees; ++t) {
        Rng tree_rng(derive_seed(cfg.rng_seed, "tree", static_cast<std::uint64_t>(t)));
        std::vector<std::uint32_t> rows(n);
        if (cfg.bootstrap) {
            for (auto& r : rows) r = static_cast<std::uint32_t>(tree_rng.bounded(n));
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        TreeBuilder builder(x, y, cfg, tree_rng);
        model.trees[t] = builder.build(std::move(rows));
    }
    return model;
}

// --- serialization ---

namespace {

constexpr char kForestMagic[8] = {'P', 'N', 'F', 'O', 'R', 'S', 'T', '1'};
constexpr char kPackMagic[8] = {'P', 'N', 'F', 'P', 'A', 'C', 'K', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, 8);
}

void put_i32(std::ostream& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& in) {
    char b[4];
    in.read(b, 4);
    if (!in) throw DataError("forest file: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    char b[8];
    in.read(b, 8);
    if (!in) throw DataError("forest file: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

std::int32_t get_i32(std::istream& in) { return static_cast<std::int32_t>(get_u32(in)); }

std::string get_string(std::istream& in) {
    const std::uint32_t len = get_u32(in);
    if (len > (1u << 20)) throw DataError("forest file: implausible string length");
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw DataError("forest file: truncated");
    return s;
}

}  // namespace

void save_forest(const ForestModel& model, std::ostream& out) {
    out.write(kForestMagic, 8);
    put_u32(out, 1);  // format version
    put_string(out, model.schema_version);
    put_u32(out, model.n_features);
    put_i32(out, model.config.n_trees);
    out.put(model.config.max_depth ? 1 : 0);
    put_i32(out, model.config.max_depth.value_or(0));
    put_i32(out, model.config.min_samples_split);
    out.put(static_cast<char>(model.config.features_per_split));
    out.put(model.config.bootstrap ? 1 : 0);
    put_u64(out, model.config.rng_seed);
    put_u32(out, static_cast<std::uint32_t>(model.trees.size()));
    for (const Tree& tree : model.trees) {
        put_u64(out, tree.nodes.size());
        for (const TreeNode& node : tree.nodes) {
            put_i32(out, node.feature);
            put_u32(out, std::bit_cast<std::uint32_t>(node.threshold));
            put_u32(out, node.left);
            put_u32(out, node.right);
        }
    }
    if (!out) throw ConfigError("forest serialization: write failed");
}

ForestModel load_forest(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kForestMagic, 8) != 0) {
        throw DataError("forest file: bad magic");
    }
    const std::uint32_t version = get_u32(in);
    if (version != 1) throw DataError("forest file: unsupported version");
    ForestModel model;
    model.schema_version = get_string(in);
    model.n_features = get_u32(in);
    model.config.n_trees = get_i32(in);
    const bool has_depth = in.get() == 1;
    const std::int32_t depth = get_i32(in);
    if (has_depth) model.config.max_depth = depth;
    model.config.min_samples_split = get_i32(in);
    model.config.features_per_split = static_cast<ForestConfig::FeatureRule>(in.get());
    model.config.bootstrap = in.get() == 1;
    model.config.rng_seed = get_u64(in);
    const std::uint32_t n_trees = get_u32(in);
    model.trees.resize(n_trees);
    for (auto& tree : model.trees) {
        const std::uint64_t n_nodes = get_u64(in);
        tree.nodes.resize(n_nodes);
        for (auto& node : tree.nodes) {
            node.feature = get_i32(in);
            node.threshold = std::bit_cast<float>(get_u32(in));
            node.left = get_u32(in);
            node.right = get_u32(in);
        }
    }
    return model;
}

void save_forests(std::span<const ForestModel> models, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out.write(kPackMagic, 8);
    put_u32(out, static_cast<std::uint32_t>(models.size()));
    for (const ForestModel& m : models) save_forest(m, out);
    if (!out) throw ConfigError("write failed: " + path.string());
}

std::vector<ForestModel> load_forests(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kPackMagic, 8) != 0) {
        throw DataError("model pack: bad magic in " + path.string());
    }
    const std::uint32_t count = get_u32(in);
    std::vector<ForestModel> models;
    models.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) models.push_back(load_forest(in));
    return models;
}

}  // namespace placenames
