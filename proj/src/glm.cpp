#include "mda/glm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "mda/stats.hpp"

namespace mda::glm {

namespace {

constexpr double kSeparationBound = 15.0;
constexpr double kPivotTol = 1e-12;
constexpr int kMaxHalvings = 30;

Eigen::MatrixXd neg_hessian(const DesignMatrix& X, const Eigen::VectorXd& p) {
    Eigen::VectorXd w = p.array() * (1.0 - p.array());
    return X.X.transpose() * w.asDiagonal() * X.X;
}

// LDLT solve with a condition check on the pivots.
Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw Singular("LDLT factorization failed");
    Eigen::VectorXd d = ldlt.vectorD();
    double dmax = d.cwiseAbs().maxCoeff();
    if (dmax <= 0.0 || d.minCoeff() <= dmax * kPivotTol)
        throw Singular("information matrix numerically singular");
    return ldlt.solve(B);
}

}  // namespace

DesignMatrix make_design(const dataset::Dataset& data,
                         const std::vector<std::string>& feature_subset) {
    std::vector<std::string> names =
        feature_subset.empty() ? data.feature_names : feature_subset;
    std::vector<Eigen::Index> cols;
    for (const auto& name : names) {
        auto it = std::find(data.feature_names.begin(), data.feature_names.end(), name);
        if (it == data.feature_names.end())
            throw DimensionMismatch("unknown feature '" + name + "'");
        cols.push_back(it - data.feature_names.begin());
    }
    DesignMatrix design;
    design.feature_names = names;
    design.X.resize(static_cast<Eigen::Index>(data.samples.size()),
                    static_cast<Eigen::Index>(names.size() + 1));
    for (Eigen::Index i = 0; i < design.X.rows(); ++i) {
        design.X(i, 0) = 1.0;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double v = data.samples[i].features.at(cols[j]);
            if (!std::isfinite(v))
                throw DimensionMismatch("non-finite value in feature '" + names[j] + "'");
            design.X(i, static_cast<Eigen::Index>(j + 1)) = v;
        }
    }
    return design;
}

Eigen::VectorXd labels_vector(const dataset::Dataset& data) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.samples.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = data.samples[i].label;
    return y;
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

double log_likelihood(const Eigen::VectorXd& beta, const DesignMatrix& X,
                      const Eigen::VectorXd& y) {
    if (beta.size() != X.n_params() || y.size() != X.n())
        throw DimensionMismatch("log_likelihood: shape mismatch");
    Eigen::VectorXd eta = X.X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        double e = eta(i);
        // y*eta - log(1 + exp(eta)), kept stable for large |eta|
        double log1pexp = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += y(i) * e - log1pexp;
    }
    return ll;
}

FittedLogit fit(const DesignMatrix& X, const Eigen::VectorXd& y,
                const FitConfig& config) {
    if (y.size() != X.n()) throw DimensionMismatch("fit: y length != rows");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 0.0 && y(i) != 1.0)
            throw DimensionMismatch("fit: y must be binary");
    double ybar = y.mean();
    if (ybar <= 0.0 || ybar >= 1.0) throw Separation("single-class outcome");

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.n_params());
    double ll = log_likelihood(beta, X, y);
    int iter = 0;
    bool converged = false;
    Eigen::VectorXd p;

    for (; iter < config.max_iter; ++iter) {
        Eigen::VectorXd eta = X.X * beta;
        p = eta.unaryExpr([](double e) { return logistic(e); });
        Eigen::VectorXd grad = X.X.transpose() * (y - p);
        Eigen::MatrixXd info = neg_hessian(X, p);
        Eigen::VectorXd step;
        try {
            step = solve_spd(info, grad);
        } catch (const Singular&) {
            // weights collapse to zero when the data are separable
            if (beta.cwiseAbs().maxCoeff() > kSeparationBound)
                throw Separation("weights degenerate; data likely separable");
            throw;
        }

        // step-halving: shrink until the log-likelihood does not decrease
        double scale = 1.0;
        double ll_new = ll;
        Eigen::VectorXd beta_new = beta;
        for (int h = 0; h <= kMaxHalvings; ++h) {
            beta_new = beta + scale * step;
            ll_new = log_likelihood(beta_new, X, y);
            if (ll_new >= ll) break;
            scale *= 0.5;
        }
        beta = beta_new;
        double delta = ll_new - ll;
        ll = ll_new;
        if (std::fabs(delta) < config.tol) {
            converged = true;
            ++iter;
            break;
        }
    }
    if (!converged) {
        if (beta.cwiseAbs().maxCoeff() > kSeparationBound)
            throw Separation("coefficients diverging; data likely separable");
        throw NotConverged("no convergence in " + std::to_string(config.max_iter) +
                           " iterations");
    }
    if (beta.cwiseAbs().maxCoeff() > kSeparationBound)
        throw Separation("|beta| > " + std::to_string(kSeparationBound) +
                         " at convergence");

    FittedLogit model;
    model.coefficients = beta;
    model.feature_names = X.feature_names;
    Eigen::VectorXd eta = X.X * beta;
    p = eta.unaryExpr([](double e) { return logistic(e); });
    Eigen::MatrixXd info = neg_hessian(X, p);
    model.covariance =
        solve_spd(info, Eigen::MatrixXd::Identity(info.rows(), info.cols()));
    model.log_likelihood = ll;
    model.deviance = -2.0 * ll;
    model.n_train = static_cast<std::size_t>(X.n());
    auto ic = information_criteria(ll, static_cast<int>(X.n_params()) - 1,
                                   model.n_train);
    model.aic = ic.aic;
    model.bic = ic.bic;
    model.iterations = iter;
    model.converged = true;
    return model;
}

std::vector<WaldRow> wald_inference(const FittedLogit& model, double level) {
    if (!model.converged) throw NotConverged("wald_inference on unconverged model");
    double zstar = stats::normal_quantile(0.5 + level / 2.0);
    std::vector<WaldRow> rows;
    for (Eigen::Index j = 0; j < model.coefficients.size(); ++j) {
        WaldRow row;
        row.name = j == 0 ? "Intercept" : model.feature_names.at(j - 1);
        row.coefficient = model.coefficients(j);
        row.se = std::sqrt(model.covariance(j, j));
        row.z = row.se > 0 ? row.coefficient / row.se : 0.0;
        row.p_value = row.se > 0 ? stats::normal_two_sided_p(row.z) : 1.0;
        row.ci_low = row.coefficient - zstar * row.se;
        row.ci_high = row.coefficient + zstar * row.se;
        row.odds_ratio = std::exp(row.coefficient);
        rows.push_back(std::move(row));
    }
    return rows;
}

InfoCriteria information_criteria(const FittedLogit& model) {
    return information_criteria(model.log_likelihood,
                                static_cast<int>(model.coefficients.size()) - 1,
                                model.n_train);
}

InfoCriteria information_criteria(double log_lik, int n_slopes, std::size_t n) {
    InfoCriteria ic;
    ic.deviance = -2.0 * log_lik;
    double k1 = n_slopes + 1;  // intercept counts toward the penalty
    ic.aic = ic.deviance + 2.0 * k1;
    ic.bic = ic.deviance + k1 * std::log(static_cast<double>(n));
    return ic;
}

LrtResult likelihood_ratio_test(const FittedLogit& nested, const FittedLogit& full) {
    std::set<std::string> a(nested.feature_names.begin(), nested.feature_names.end());
    std::set<std::string> b(full.feature_names.begin(), full.feature_names.end());
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end()))
        throw NotNested("nested predictors are not a subset of the full model's");
    if (nested.n_train != full.n_train)
        throw NotNested("models fitted on different observation counts");

    LrtResult result;
    result.statistic = nested.deviance - full.deviance;
    if (result.statistic < 0.0) {
        if (result.statistic > -1e-9) result.statistic = 0.0;
        else throw std::logic_error("likelihood_ratio_test: negative statistic");
    }
    result.df = static_cast<int>(full.coefficients.size() - nested.coefficients.size());
    result.p_value =
        result.df == 0 ? 1.0 : stats::chi2_sf(result.statistic, result.df);
    return result;
}

Eigen::VectorXd predict_prob(const FittedLogit& model, const DesignMatrix& X) {
    if (X.n_params() != model.coefficients.size() ||
        X.feature_names != model.feature_names)
        throw DimensionMismatch("predict_prob: design does not match model");
    Eigen::VectorXd eta = X.X * model.coefficients;
    return eta.unaryExpr([](double e) { return logistic(e); });
}

std::string serialize_model(const FittedLogit& model) {
    nlohmann::ordered_json j;
    j["feature_names"] = model.feature_names;
    j["coefficients"] = std::vector<double>(
        model.coefficients.data(), model.coefficients.data() + model.coefficients.size());
    std::vector<std::vector<double>> cov;
    for (Eigen::Index r = 0; r < model.covariance.rows(); ++r) {
        cov.emplace_back(model.covariance.row(r).begin(), model.covariance.row(r).end());
    }
    j["covariance"] = cov;
    j["log_likelihood"] = model.log_likelihood;
    j["deviance"] = model.deviance;
    j["aic"] = model.aic;
    j["bic"] = model.bic;
    j["n_train"] = model.n_train;
    j["iterations"] = model.iterations;
    j["converged"] = model.converged;
    return j.dump(2) + "\n";
}

FittedLogit deserialize_model(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    FittedLogit model;
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    auto coef = j.at("coefficients").get<std::vector<double>>();
    model.coefficients = Eigen::Map<Eigen::VectorXd>(coef.data(),
                                                     static_cast<Eigen::Index>(coef.size()));
    auto cov = j.at("covariance").get<std::vector<std::vector<double>>>();
    model.covariance.resize(static_cast<Eigen::Index>(cov.size()),
                            static_cast<Eigen::Index>(cov.size()));
    for (std::size_t r = 0; r < cov.size(); ++r)
        for (std::size_t c = 0; c < cov[r].size(); ++c)
            model.covariance(static_cast<Eigen::Index>(r),
                             static_cast<Eigen::Index>(c)) = cov[r][c];
    model.log_likelihood = j.at("log_likelihood").get<double>();
    model.deviance = j.at("deviance").get<double>();
    model.aic = j.at("aic").get<double>();
    model.bic = j.at("bic").get<double>();
    model.n_train = j.at("n_train").get<std::size_t>();
    model.iterations = j.at("iterations").get<int>();
    model.converged = j.at("converged").get<bool>();
    return model;
}

}  // namespace mda::glm
