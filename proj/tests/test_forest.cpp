#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "placenames/errors.hpp"
#include "placenames/forest.hpp"
#include "support/synthetic.hpp"

using namespace placenames;

namespace {

FeatureMatrix column(std::initializer_list<float> values) {
    FeatureMatrix m(1);
    for (const float v : values) m.push_row({&v, 1});
    return m;
}

// exhaustive split search mirroring the documented scoring: minimize
// nl*gini(left) + nr*gini(right) over every (feature, midpoint threshold),
// ties to the lowest feature slot then the lowest threshold
struct OracleSplit {
    double score = std::numeric_limits<double>::infinity();
    int feature = -1;
    float threshold = 0.0f;
};

OracleSplit oracle_best_split(const FeatureMatrix& x, const std::vector<std::uint8_t>& y) {
    OracleSplit best;
    for (std::size_t f = 0; f < x.cols; ++f) {
        std::vector<float> values;
        for (std::size_t i = 0; i < x.rows(); ++i) values.push_back(x.row(i)[f]);
        std::vector<float> sorted(values);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t v = 0; v + 1 < sorted.size(); ++v) {
            float threshold = sorted[v] + (sorted[v + 1] - sorted[v]) * 0.5f;
            if (threshold >= sorted[v + 1]) threshold = sorted[v];
            std::int64_t l0 = 0, l1 = 0, r0 = 0, r1 = 0;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                if (values[i] <= threshold) {
                    (y[i] ? l1 : l0)++;
                } else {
                    (y[i] ? r1 : r0)++;
                }
            }
            const double score = static_cast<double>(l0 + l1) * gini(l0, l1) +
                                 static_cast<double>(r0 + r1) * gini(r0, r1);
            const bool better =
                score < best.score ||
                (score == best.score && (static_cast<int>(f) < best.feature ||
                                         (static_cast<int>(f) == best.feature &&
                                          threshold < best.threshold)));
            if (better) best = {score, static_cast<int>(f), threshold};
        }
    }
    return best;
}

}  // namespace

TEST_SUITE_BEGIN("forest");

TEST_CASE("gini impurity") {
    CHECK(gini(5, 5) == 0.5);
    CHECK(gini(10, 0) == 0.0);
    CHECK(gini(3, 1) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK_THROWS_AS(gini(0, 0), ContractError);
    CHECK_THROWS_AS(gini(-1, 2), ContractError);
}

TEST_CASE("perfectly separable 1-D data yields a depth-1 tree") {
    const FeatureMatrix x = column({0.1f, 0.2f, 0.3f, 0.6f, 0.7f, 0.8f});
    const std::vector<std::uint8_t> y = {0, 0, 0, 1, 1, 1};
    ForestConfig cfg;
    cfg.features_per_split = ForestConfig::FeatureRule::all;
    cfg.min_samples_split = 2;
    Rng rng(1);
    const Tree tree = fit_tree(x, y, cfg, rng);
    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[0].feature == 0);
    CHECK(tree.nodes[0].threshold > 0.3f);
    CHECK(tree.nodes[0].threshold <= 0.6f);
    CHECK(tree.nodes[1].is_leaf());
    CHECK(tree.nodes[2].is_leaf());
    CHECK(tree.predict_proba(x.row(0)) == 0.0);
    CHECK(tree.predict_proba(x.row(5)) == 1.0);
}

TEST_CASE("root split equals the exhaustive-search optimum (oracle)") {
    Rng seeds(17);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t rows = 3 + seeds.bounded(6);   // <= 8 rows
        const std::size_t cols = 1 + seeds.bounded(3);   // <= 3 features
        FeatureMatrix x(cols);
        std::vector<std::uint8_t> y;
        std::vector<float> row(cols);
        bool has0 = false, has1 = false;
        for (std::size_t r = 0; r < rows; ++r) {
            for (auto& v : row) v = static_cast<float>(seeds.bounded(5)) * 0.25f;
            x.push_row(row);
            const auto label = static_cast<std::uint8_t>(seeds.bounded(2));
            has0 |= label == 0;
            has1 |= label == 1;
            y.push_back(label);
        }
        if (!has0 || !has1) continue;
        const OracleSplit expected = oracle_best_split(x, y);
        ForestConfig cfg;
        cfg.features_per_split = ForestConfig::FeatureRule::all;
        cfg.min_samples_split = 2;
        Rng rng(trial);
        const Tree tree = fit_tree(x, y, cfg, rng);
        if (expected.feature < 0) {
            CHECK(tree.nodes[0].is_leaf());
            continue;
        }
        // all-constant-feature instances aside, the root must match
        REQUIRE_FALSE(tree.nodes[0].is_leaf());
        CHECK(tree.nodes[0].feature == expected.feature);
        CHECK(tree.nodes[0].threshold == expected.threshold);
    }
}

TEST_CASE("stops: purity and min_samples_split") {
    const FeatureMatrix x = column({0.0f, 1.0f, 2.0f, 3.0f});
    ForestConfig cfg;
    Rng rng(2);
    const Tree pure = fit_tree(x, std::vector<std::uint8_t>{1, 1, 1, 1}, cfg, rng);
    CHECK(pure.nodes.size() == 1);
    CHECK(pure.predict_proba(x.row(0)) == 1.0);

    cfg.min_samples_split = 5;
    const Tree small = fit_tree(x, std::vector<std::uint8_t>{0, 0, 1, 1}, cfg, rng);
    CHECK(small.nodes.size() == 1);
    CHECK(small.predict_proba(x.row(0)) == 0.5);
}

TEST_CASE("max_depth of one produces at most a single split") {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(20, 3, 2.0, 5, x, y);
    ForestConfig cfg;
    cfg.max_depth = 1;
    cfg.min_samples_split = 2;
    Rng rng(3);
    const Tree tree = fit_tree(x, y, cfg, rng);
    CHECK(tree.nodes.size() <= 3);
    for (const TreeNode& n : tree.nodes) {
        if (!n.is_leaf()) {
            CHECK(tree.nodes[n.left].is_leaf());
            CHECK(tree.nodes[n.right].is_leaf());
        }
    }
}

TEST_CASE("memorization: unbounded depth with min split 2 is exact on distinct rows") {
    Rng data_rng(31);
    FeatureMatrix x(5);
    std::vector<std::uint8_t> y;
    for (int i = 0; i < 40; ++i) {
        float row[5];
        for (auto& v : row) v = static_cast<float>(data_rng.uniform());
        x.push_row(row);
        y.push_back(static_cast<std::uint8_t>(data_rng.bounded(2)));
    }
    y[0] = 0;
    y[1] = 1;  // both classes present
    ForestConfig cfg;
    cfg.n_trees = 5;
    cfg.min_samples_split = 2;
    cfg.bootstrap = false;  // every tree sees every distinct row
    cfg.rng_seed = 7;
    const ForestModel model = fit_forest(x, y, cfg);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        CHECK(model.predict_proba(x.row(i)) == static_cast<double>(y[i]));
    }
}

TEST_CASE("same seed gives identical predictions; permuting rows does not matter") {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(30, 4, 1.0, 13, x, y);
    ForestConfig cfg;
    cfg.n_trees = 15;
    cfg.rng_seed = 99;
    const ForestModel a = fit_forest(x, y, cfg);
    const ForestModel b = fit_forest(x, y, cfg);
    FeatureMatrix probes;
    std::vector<std::uint8_t> ignored;
    testsupport::gaussian_blobs(10, 4, 1.0, 14, probes, ignored);
    for (std::size_t i = 0; i < probes.rows(); ++i) {
        CHECK(a.predict_proba(probes.row(i)) == b.predict_proba(probes.row(i)));
    }

    // with the bootstrap disabled the fit is row-order invariant
    cfg.bootstrap = false;
    const ForestModel c = fit_forest(x, y, cfg);
    FeatureMatrix xp(x.cols);
    std::vector<std::uint8_t> yp;
    for (std::size_t i = x.rows(); i-- > 0;) {
        xp.push_row(x.row(i));
        yp.push_back(y[i]);
    }
    const ForestModel d = fit_forest(xp, yp, cfg);
    for (std::size_t i = 0; i < probes.rows(); ++i) {
        CHECK(c.predict_proba(probes.row(i)) == d.predict_proba(probes.row(i)));
    }
}

TEST_CASE("single unbagged tree forest reduces to CART") {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(25, 3, 2.0, 19, x, y);
    ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    cfg.features_per_split = ForestConfig::FeatureRule::all;
    cfg.rng_seed = 5;
    const ForestModel forest = fit_forest(x, y, cfg);
    Rng rng(derive_seed(cfg.rng_seed, "tree", 0));
    const Tree tree = fit_tree(x, y, cfg, rng);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        CHECK(forest.predict_proba(x.row(i)) == tree.predict_proba(x.row(i)));
    }
}

TEST_CASE("two separated blobs train to at least 99% accuracy") {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(100, 5, 6.0, 7, x, y);
    ForestConfig cfg;  // paper defaults: 100 trees, no depth cap, min split 5
    cfg.rng_seed = 11;
    const ForestModel model = fit_forest(x, y, cfg);
    int correct = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double p = model.predict_proba(x.row(i));
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        correct += (p >= 0.5) == (y[i] == 1);
    }
    CHECK(static_cast<double>(correct) / static_cast<double>(x.rows()) >= 0.99);
}

TEST_CASE("leaf probability is the class frequency") {
    Tree tree;
    tree.nodes.push_back(TreeNode{TreeNode::kLeafMarker, 0.0f, 3, 1});  // counts (3,1)
    const float probe = 0.0f;
    CHECK(tree.predict_proba({&probe, 1}) == 0.25);
}

TEST_CASE("serialization round-trips bit-exactly") {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(30, 4, 2.0, 23, x, y);
    ForestConfig cfg;
    cfg.n_trees = 10;
    cfg.max_depth = 7;
    cfg.rng_seed = 1234;
    const ForestModel model = fit_forest(x, y, cfg, "fv1");

    std::stringstream buffer;
    save_forest(model, buffer);
    const ForestModel loaded = load_forest(buffer);
    CHECK(loaded.schema_version == "fv1");
    CHECK(loaded.n_features == 4);
    CHECK(loaded.config.n_trees == 10);
    CHECK(loaded.config.max_depth == 7);
    CHECK(loaded.config.min_samples_split == cfg.min_samples_split);
    CHECK(loaded.config.rng_seed == 1234);
    REQUIRE(loaded.trees.size() == model.trees.size());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double a = model.predict_proba(x.row(i));
        const double b = loaded.predict_proba(x.row(i));
        CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
    }
}

TEST_CASE("contract errors") {
    FeatureMatrix x;
    std::vector<std::uint8_t> y;
    testsupport::gaussian_blobs(5, 3, 2.0, 29, x, y);
    std::fill(y.begin(), y.end(), 1);
    CHECK_THROWS_AS(fit_forest(x, y, ForestConfig{}), DataError);  // single class

    testsupport::gaussian_blobs(5, 3, 2.0, 29, x, y);
    const ForestModel model = fit_forest(x, y, ForestConfig{});
    const float short_probe[2] = {0.0f, 0.0f};
    CHECK_THROWS_AS(model.predict_proba({short_probe, 2}), ContractError);
}

TEST_SUITE_END();
