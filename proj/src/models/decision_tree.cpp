#include "tree_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bitsentry::detail {

namespace {

double gini(const std::vector<double>& class_weights, double total) {
    if (total <= 0.0) return 0.0;
    double acc = 0.0;
    for (double w : class_weights) {
        const double p = w / total;
        acc += p * p;
    }
    return 1.0 - acc;
}

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

struct Builder {
    const Matrix& x;
    const std::vector<int>& y;
    const std::vector<double>& weights;
    const TreeFitConfig& cfg;
    DecisionTreeModel model;

    double weight_of(std::size_t selected) const {
        return weights.empty() ? 1.0 : weights[selected];
    }

    std::vector<std::size_t> candidate_features() const {
        std::vector<std::size_t> features(x.cols);
        std::iota(features.begin(), features.end(), 0);
        if (cfg.features_per_split == 0 || cfg.features_per_split >= x.cols) return features;
        // Partial Fisher-Yates draw without replacement, then ascending order
        // so the lowest-feature-index tie rule applies within the subset.
        for (std::size_t i = 0; i < cfg.features_per_split; ++i) {
            const std::size_t j = i + cfg.rng->next_below(features.size() - i);
            std::swap(features[i], features[j]);
        }
        features.resize(cfg.features_per_split);
        std::sort(features.begin(), features.end());
        return features;
    }

    // selected[i] indexes into `rows`/`weights`; rows[selected[i]] is the row in x.
    SplitChoice best_split(const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& selected,
                           const std::vector<double>& node_class_weights,
                           double node_weight) const {
        const double node_impurity = gini(node_class_weights, node_weight);
        SplitChoice best;

        std::vector<std::pair<double, std::size_t>> order(selected.size());
        std::vector<double> left_weights(cfg.n_classes);
        for (std::size_t f : candidate_features()) {
            for (std::size_t i = 0; i < selected.size(); ++i)
                order[i] = {x(rows[selected[i]], f), selected[i]};
            std::sort(order.begin(), order.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (order.front().first == order.back().first) continue;

            std::fill(left_weights.begin(), left_weights.end(), 0.0);
            double left_weight = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const auto& [value, sel] = order[i];
                left_weights[static_cast<std::size_t>(y[rows[sel]])] += weight_of(sel);
                left_weight += weight_of(sel);
                const double next_value = order[i + 1].first;
                if (value == next_value) continue;

                double threshold = 0.5 * (value + next_value);
                if (!(threshold < next_value)) threshold = value;

                const double right_weight = node_weight - left_weight;
                if (left_weight <= 0.0 || right_weight <= 0.0) continue;
                double left_impurity = 0.0, right_impurity = 0.0;
                {
                    double acc_l = 0.0, acc_r = 0.0;
                    for (std::size_t c = 0; c < cfg.n_classes; ++c) {
                        const double wl = left_weights[c];
                        const double wr = node_class_weights[c] - wl;
                        acc_l += wl * wl;
                        acc_r += wr * wr;
                    }
                    left_impurity = 1.0 - acc_l / (left_weight * left_weight);
                    right_impurity = 1.0 - acc_r / (right_weight * right_weight);
                }
                const double gain = node_impurity -
                                    (left_weight / node_weight) * left_impurity -
                                    (right_weight / node_weight) * right_impurity;
                if (gain > best.gain) {
                    best = {true, f, threshold, gain};
                }
            }
        }
        return best;
    }

    int make_leaf(const std::vector<double>& class_weights, double total) {
        TreeNode node;
        node.class_probs.resize(cfg.n_classes, 0.0);
        if (total > 0.0) {
            for (std::size_t c = 0; c < cfg.n_classes; ++c)
                node.class_probs[c] = class_weights[c] / total;
        } else {
            std::fill(node.class_probs.begin(), node.class_probs.end(),
                      1.0 / static_cast<double>(cfg.n_classes));
        }
        model.nodes.push_back(std::move(node));
        return static_cast<int>(model.nodes.size() - 1);
    }

    int build(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& selected,
              std::size_t depth) {
        std::vector<double> class_weights(cfg.n_classes, 0.0);
        double node_weight = 0.0;
        for (std::size_t sel : selected) {
            class_weights[static_cast<std::size_t>(y[rows[sel]])] += weight_of(sel);
            node_weight += weight_of(sel);
        }

        std::size_t present = 0;
        for (double w : class_weights)
            if (w > 0.0) ++present;
        const bool depth_capped = cfg.max_depth != 0 && depth >= cfg.max_depth;
        if (present <= 1 || depth_capped || selected.size() < cfg.min_samples_split)
            return make_leaf(class_weights, node_weight);

        const SplitChoice split = best_split(rows, selected, class_weights, node_weight);
        if (!split.found || split.gain <= 0.0) return make_leaf(class_weights, node_weight);

        std::vector<std::size_t> left_sel, right_sel;
        for (std::size_t sel : selected) {
            if (x(rows[sel], split.feature) <= split.threshold)
                left_sel.push_back(sel);
            else
                right_sel.push_back(sel);
        }

        const int node_id = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();
        model.nodes[node_id].feature = static_cast<int>(split.feature);
        model.nodes[node_id].threshold = split.threshold;
        const int left_id = build(rows, left_sel, depth + 1);
        const int right_id = build(rows, right_sel, depth + 1);
        model.nodes[node_id].left = left_id;
        model.nodes[node_id].right = right_id;
        return node_id;
    }
};

}  // namespace

DecisionTreeModel fit_tree(const Matrix& x, const std::vector<int>& y,
                           const std::vector<std::size_t>& rows,
                           const std::vector<double>& weights, const TreeFitConfig& cfg) {
    Builder builder{x, y, weights, cfg, {}};
    std::vector<std::size_t> selected(rows.size());
    std::iota(selected.begin(), selected.end(), 0);
    builder.build(rows, selected, 0);
    return std::move(builder.model);
}

const TreeNode& tree_leaf_for(const DecisionTreeModel& tree, std::span<const double> row) {
    std::size_t node = 0;
    while (tree.nodes[node].feature >= 0) {
        const TreeNode& n = tree.nodes[node];
        node = static_cast<std::size_t>(
            row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return tree.nodes[node];
}

}  // namespace bitsentry::detail
