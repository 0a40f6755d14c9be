#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mda/dataset.hpp"
#include "mda/errors.hpp"
#include "mda/eval.hpp"
#include "mda/glm.hpp"
#include "mda/ingest.hpp"
#include "mda/lexicon.hpp"

namespace mda::pipeline {

struct PipelineConfig {
    std::filesystem::path cache_dir = "cache";
    std::string user_agent;   // operator contact, required for live fetches
    double rate_limit = 10.0;  // requests per second
    int horizon_days = 365;
    std::size_t min_mda_words = 100;
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    double cutoff = 0.5;
    std::vector<std::string> lexicon_paths;
};

// Flat key-value JSON; unknown keys and out-of-range values raise
// ConfigError naming the key. `overrides` (from CLI flags) win over file
// values, which win over defaults. MDA_CACHE_DIR wins over everything for
// cache_dir.
PipelineConfig load_config(const std::optional<std::filesystem::path>& file,
                           const std::map<std::string, std::string>& overrides);

std::string config_json(const PipelineConfig& config);
void echo_config(const PipelineConfig& config);  // cache_dir/effective_config.json

// ---------------------------------------------------------------------------
// Stage file formats

// filings.csv: cik,company_name,form_type,date_filed,path
std::string filings_csv(const std::vector<ingest::FilingRecord>& records);
std::vector<ingest::FilingRecord> read_filings_csv(const std::filesystem::path& file);

// Feature CSV: cik,accession,label,wc,wps,sixltr,allpunc,<categories>,
// fixed 4-decimal formatting.
struct FeatureCsvRow {
    dataset::SampleKey key;
    int label = 0;
    lexicon::FeatureVector features;
};
std::string feature_csv(const std::vector<std::string>& category_names,
                        const std::vector<FeatureCsvRow>& rows);
std::vector<dataset::FeatureRow> read_feature_csv(const std::filesystem::path& file,
                                                  std::vector<int>* labels = nullptr);

std::string dataset_csv(const dataset::Dataset& data);
dataset::Dataset read_dataset_csv(const std::filesystem::path& file);

// ---------------------------------------------------------------------------
// Built-in model specs (feature-name sets over the dataset columns).
// "stress" is backed by the bundled lexicon; "liwc" and "lm" need the
// matching user-supplied lexicon files to have produced those columns.
const std::map<std::string, std::vector<std::string>>& model_specs();
std::vector<std::string> resolve_model_features(const std::string& model_name,
                                                const dataset::Dataset& data);

// Lexicon stack for featurize: the bundled stress lexicon plus any files
// listed in config.lexicon_paths.
std::vector<lexicon::Lexicon> load_lexicons(const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Stages. Each reads its inputs from under config.cache_dir (or explicit
// paths), writes outputs there, and returns a one-line summary.

std::string stage_index(const PipelineConfig& config,
                        const std::filesystem::path& index_file,
                        const std::string& form_type);
std::string stage_fetch(const PipelineConfig& config, ingest::Transport& transport,
                        ingest::Clock& clock);
std::string stage_clean(const PipelineConfig& config);
std::string stage_extract_mda(const PipelineConfig& config);
std::string stage_featurize(const PipelineConfig& config);
std::string stage_assemble(const PipelineConfig& config,
                           const std::filesystem::path& events_file,
                           const std::optional<std::filesystem::path>& universe_file);
std::string stage_split(const PipelineConfig& config, bool balance);
std::string stage_train(const PipelineConfig& config, const std::string& model_name);
std::string stage_evaluate(const PipelineConfig& config, const std::string& model_name);
std::string stage_compare(const PipelineConfig& config,
                          const std::vector<std::string>& model_names);
std::string stage_ttest(const PipelineConfig& config);
std::string stage_trend(const PipelineConfig& config,
                        const std::filesystem::path& events_file,
                        const std::optional<std::string>& reference_date);
std::string stage_report(const PipelineConfig& config);

}  // namespace mda::pipeline
