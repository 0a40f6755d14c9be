#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mda/dataset.hpp"
#include "mda/errors.hpp"

namespace mda::glm {

// n x (k+1) predictor matrix with a leading intercept column of ones.
struct DesignMatrix {
    Eigen::MatrixXd X;
    std::vector<std::string> feature_names;  // slope names, no intercept

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index n_params() const { return X.cols(); }  // k+1
};

// Build a design matrix from dataset columns (all features, or a subset by
// name). Throws DimensionMismatch on an unknown name or non-finite value.
DesignMatrix make_design(const dataset::Dataset& data,
                         const std::vector<std::string>& feature_subset = {});
Eigen::VectorXd labels_vector(const dataset::Dataset& data);

struct FitConfig {
    double tol = 1e-10;
    int max_iter = 100;
};

struct FittedLogit {
    Eigen::VectorXd coefficients;  // intercept first
    Eigen::MatrixXd covariance;    // inverse observed information
    std::vector<std::string> feature_names;
    double log_likelihood = 0.0;
    double deviance = 0.0;  // -2 LL
    double aic = 0.0;       // deviance + 2(k+1)
    double bic = 0.0;       // deviance + (k+1) ln n
    std::size_t n_train = 0;
    int iterations = 0;
    bool converged = false;
};

struct WaldRow {
    std::string name;
    double coefficient = 0.0;
    double se = 0.0;
    double z = 0.0;
    double p_value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double odds_ratio = 1.0;
};

struct InfoCriteria {
    double aic = 0.0;
    double bic = 0.0;
    double deviance = 0.0;
};

struct LrtResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

// Overflow-safe sigmoid 1 / (1 + e^-x).
double logistic(double x);

// Binomial log-likelihood, computed in log-space-stable form.
double log_likelihood(const Eigen::VectorXd& beta, const DesignMatrix& X,
                      const Eigen::VectorXd& y);

// Newton-Raphson with step-halving. Throws Separation, Singular,
// NotConverged per the documented conditions.
FittedLogit fit(const DesignMatrix& X, const Eigen::VectorXd& y,
                const FitConfig& config = {});

std::vector<WaldRow> wald_inference(const FittedLogit& model, double level = 0.95);

InfoCriteria information_criteria(const FittedLogit& model);
// The same arithmetic from raw ingredients (log-likelihood, slope count,
// training size); intercept is included in the penalty term.
InfoCriteria information_criteria(double log_lik, int n_slopes, std::size_t n);

LrtResult likelihood_ratio_test(const FittedLogit& nested, const FittedLogit& full);

Eigen::VectorXd predict_prob(const FittedLogit& model, const DesignMatrix& X);

// Self-describing JSON record; numbers round-trip exactly.
std::string serialize_model(const FittedLogit& model);
FittedLogit deserialize_model(const std::string& json_text);

}  // namespace mda::glm
