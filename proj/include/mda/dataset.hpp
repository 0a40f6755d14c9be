#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mda/errors.hpp"
#include "mda/rng.hpp"

namespace mda::dataset {

struct SampleKey {
    std::int64_t cik = 0;
    std::string accession;

    auto operator<=>(const SampleKey&) const = default;
};

struct LabeledSample {
    SampleKey key;
    std::vector<double> features;
    int label = 0;
};

struct Dataset {
    std::vector<LabeledSample> samples;
    std::vector<std::string> feature_names;
    std::uint64_t seed = 0;

    std::size_t count_label(int label) const;
};

struct FeatureRow {
    SampleKey key;
    std::vector<std::string> feature_names;
    std::vector<double> values;
};

struct AssembleResult {
    Dataset data;
    std::size_t dropped = 0;  // feature rows without a label or universe entry
};

// Inner join of feature rows with labeled keys. Rows absent from `labels`
// get label 0 only when listed in the optional non-bankrupt universe;
// otherwise they are dropped (and counted).
AssembleResult assemble(const std::vector<FeatureRow>& features,
                        const std::vector<std::pair<SampleKey, int>>& labels,
                        const std::set<SampleKey>* universe = nullptr);

// Keep all positives; down-sample negatives uniformly without replacement
// to the positive count. Deterministic in `seed`.
Dataset balanced_sample(const Dataset& data, std::uint64_t seed);

// Stratified split: each class split independently at train_fraction (train
// size floored), deterministic in `seed`. Partitions disjoint, exhaustive.
std::pair<Dataset, Dataset> train_test_split(const Dataset& data,
                                             double train_fraction,
                                             std::uint64_t seed);

}  // namespace mda::dataset
