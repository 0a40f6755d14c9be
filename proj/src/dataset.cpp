#include "mda/dataset.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mda {

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    Lcg64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(std::min(k, n));
    return idx;
}

}  // namespace mda

namespace mda::dataset {

std::size_t Dataset::count_label(int label) const {
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(),
                      [&](const LabeledSample& s) { return s.label == label; }));
}

AssembleResult assemble(const std::vector<FeatureRow>& features,
                        const std::vector<std::pair<SampleKey, int>>& labels,
                        const std::set<SampleKey>* universe) {
    AssembleResult result;
    std::map<SampleKey, int> label_map;
    for (const auto& [key, value] : labels) label_map[key] = value;

    std::set<SampleKey> seen;
    for (const auto& row : features) {
        if (!seen.insert(row.key).second)
            throw DuplicateKey(row.key.accession + " (cik " +
                               std::to_string(row.key.cik) + ")");
        if (result.data.feature_names.empty()) {
            result.data.feature_names = row.feature_names;
        } else if (row.feature_names != result.data.feature_names) {
            throw SchemaMismatch("feature names differ at " + row.key.accession);
        }
        auto it = label_map.find(row.key);
        int label;
        if (it != label_map.end()) {
            label = it->second;
        } else if (universe && universe->count(row.key)) {
            label = 0;
        } else {
            ++result.dropped;
            continue;
        }
        result.data.samples.push_back(LabeledSample{row.key, row.values, label});
    }
    return result;
}

Dataset balanced_sample(const Dataset& data, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < data.samples.size(); ++i)
        (data.samples[i].label == 1 ? pos : neg).push_back(i);
    if (pos.empty()) throw Insufficient("no positive samples");
    if (neg.size() < pos.size())
        throw Insufficient("negatives (" + std::to_string(neg.size()) +
                           ") fewer than positives (" + std::to_string(pos.size()) +
                           ")");
    Lcg64 rng(seed);
    auto chosen = sample_without_replacement(neg.size(), pos.size(), rng);
    std::vector<std::size_t> keep = pos;
    for (auto c : chosen) keep.push_back(neg[c]);
    std::sort(keep.begin(), keep.end());  // stable original order

    Dataset out;
    out.feature_names = data.feature_names;
    out.seed = seed;
    for (auto i : keep) out.samples.push_back(data.samples[i]);
    return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data,
                                             double train_fraction,
                                             std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Insufficient("train_fraction outside (0,1)");
    Lcg64 rng(seed);
    std::vector<bool> in_train(data.samples.size(), false);
    for (int label : {1, 0}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.samples.size(); ++i)
            if (data.samples[i].label == label) members.push_back(i);
        auto n_train = static_cast<std::size_t>(
            static_cast<double>(members.size()) * train_fraction);
        if (members.empty() || n_train == 0 || n_train == members.size())
            throw Insufficient("class " + std::to_string(label) +
                               " empty in one partition");
        auto chosen = sample_without_replacement(members.size(), n_train, rng);
        for (auto c : chosen) in_train[members[c]] = true;
    }
    Dataset train, test;
    train.feature_names = test.feature_names = data.feature_names;
    train.seed = test.seed = seed;
    for (std::size_t i = 0; i < data.samples.size(); ++i)
        (in_train[i] ? train : test).samples.push_back(data.samples[i]);
    return {std::move(train), std::move(test)};
}

}  // namespace mda::dataset
