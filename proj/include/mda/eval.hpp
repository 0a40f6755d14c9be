#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mda/dataset.hpp"
#include "mda/errors.hpp"
#include "mda/glm.hpp"
#include "mda/lexicon.hpp"

namespace mda::eval {

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double cutoff = 0.5;

    std::size_t n() const { return tp + fp + tn + fn; }
};

// Metrics with zero denominators are reported as nullopt, not errors.
struct ClassificationMetrics {
    ConfusionMatrix matrix;
    std::optional<double> accuracy;
    std::optional<double> misclassification;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> prevalence;
};

struct RocPoint {
    double threshold = 0.0;
    double fpf = 0.0;
    double tpf = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // threshold descending, (0,0) .. (1,1)
    double auc_trapezoid = 0.0;
    double auc_rank = 0.0;  // pair-counting (Mann-Whitney) route
};

struct TTestResult {
    double t = 0.0;
    double df = 0.0;  // Welch-Satterthwaite, fractional
    double p_value = 1.0;
    double mean_a = 0.0, mean_b = 0.0;
    double sd_a = 0.0, sd_b = 0.0;
};

// Predicted positive iff p > cutoff (strict; ties classify as 0).
ClassificationMetrics confusion(const std::vector<int>& y,
                                const std::vector<double>& p, double cutoff);

RocCurve roc(const std::vector<int>& y, const std::vector<double>& scores);

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct GroupMeansRow {
    std::string feature;
    std::optional<double> all, bankrupt, healthy;
};
std::vector<GroupMeansRow> group_means(const dataset::Dataset& data);

struct CorrelationResult {
    std::vector<std::string> features;
    std::vector<std::vector<double>> r;       // symmetric, unit diagonal
    std::vector<bool> zero_variance;          // flagged, r set to 0 off-diagonal
};
CorrelationResult correlation_matrix(const dataset::Dataset& data,
                                     const std::vector<std::string>& feature_subset = {});

struct CohortSample {
    int years_before = 0;  // 0..5
    lexicon::FeatureVector features;
    int label = 0;
};
struct CohortCell {
    int label = 0;
    int years_before = 0;
    std::size_t count = 0;
    std::vector<std::optional<double>> mean_percent;  // per category, empty cell -> nullopt
};
struct CohortTrend {
    std::vector<std::string> category_names;
    std::vector<CohortCell> cells;  // label x years_before grid
};
CohortTrend cohort_trend(const std::vector<CohortSample>& samples);

struct ModelComparisonRow {
    std::string name;
    std::optional<double> train_accuracy;
    std::optional<double> test_accuracy;
    double log_lik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double auc = 0.0;
    double deviance = 0.0;
    int parameters = 0;  // slope count, matching the reporting convention
};

struct ModelEval {
    ClassificationMetrics metrics;
    RocCurve roc;
};

// One row per model, sorted by descending training accuracy.
std::vector<ModelComparisonRow> compare_models(
    const std::vector<std::tuple<std::string, glm::FittedLogit, ModelEval, ModelEval>>&
        models);

std::string comparison_csv(const std::vector<ModelComparisonRow>& rows);
std::string comparison_text(const std::vector<ModelComparisonRow>& rows);
std::string roc_csv(const RocCurve& curve);

}  // namespace mda::eval
