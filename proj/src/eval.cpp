#include "mda/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mda/stats.hpp"

namespace mda::eval {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v, const char* spec) {
    return v ? fmt(*v, spec) : "NA";
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

ClassificationMetrics confusion(const std::vector<int>& y,
                                const std::vector<double>& p, double cutoff) {
    if (y.size() != p.size()) throw DimensionMismatch("confusion: length mismatch");
    if (!(cutoff > 0.0 && cutoff < 1.0))
        throw DimensionMismatch("confusion: cutoff outside (0,1)");
    ClassificationMetrics m;
    m.matrix.cutoff = cutoff;
    for (std::size_t i = 0; i < y.size(); ++i) {
        bool predicted = p[i] > cutoff;  // strict; ties classify as 0
        if (y[i] == 1)
            predicted ? ++m.matrix.tp : ++m.matrix.fn;
        else
            predicted ? ++m.matrix.fp : ++m.matrix.tn;
    }
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    std::size_t n = m.matrix.n();
    m.accuracy = ratio(m.matrix.tp + m.matrix.tn, n);
    if (m.accuracy) m.misclassification = 1.0 - *m.accuracy;
    m.sensitivity = ratio(m.matrix.tp, m.matrix.tp + m.matrix.fn);
    m.specificity = ratio(m.matrix.tn, m.matrix.tn + m.matrix.fp);
    m.prevalence = ratio(m.matrix.tp + m.matrix.fn, n);
    return m;
}

RocCurve roc(const std::vector<int>& y, const std::vector<double>& scores) {
    if (y.size() != scores.size()) throw DimensionMismatch("roc: length mismatch");
    std::size_t pos = 0, neg = 0;
    for (int v : y) (v == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0) throw OneClass("roc needs both classes");

    // ties grouped into single steps: one point per unique score
    std::map<double, std::pair<std::size_t, std::size_t>, std::greater<>> by_score;
    for (std::size_t i = 0; i < y.size(); ++i) {
        auto& [p_count, n_count] = by_score[scores[i]];
        (y[i] == 1 ? p_count : n_count)++;
    }

    RocCurve curve;
    double inf = std::numeric_limits<double>::infinity();
    curve.points.push_back({inf, 0.0, 0.0});
    std::size_t cum_tp = 0, cum_fp = 0;
    for (const auto& [score, counts] : by_score) {
        cum_tp += counts.first;
        cum_fp += counts.second;
        curve.points.push_back({score, static_cast<double>(cum_fp) / neg,
                                static_cast<double>(cum_tp) / pos});
    }

    double auc = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        auc += (b.fpf - a.fpf) * (a.tpf + b.tpf) / 2.0;
    }
    curve.auc_trapezoid = auc;

    // pair-counting route (Mann-Whitney)
    double credit = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] == 1) continue;
            if (scores[i] > scores[j]) credit += 1.0;
            else if (scores[i] == scores[j]) credit += 0.5;
        }
    }
    curve.auc_rank = credit / (static_cast<double>(pos) * static_cast<double>(neg));
    return curve;
}

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw DimensionMismatch("welch_t_test: need at least 2 per sample");
    TTestResult r;
    r.mean_a = mean_of(a);
    r.mean_b = mean_of(b);
    double va = sample_var(a, r.mean_a);
    double vb = sample_var(b, r.mean_b);
    if (va == 0.0 && vb == 0.0) throw Degenerate("both sample variances are zero");
    r.sd_a = std::sqrt(va);
    r.sd_b = std::sqrt(vb);
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double sa = va / na, sb = vb / nb;
    r.t = (r.mean_a - r.mean_b) / std::sqrt(sa + sb);
    r.df = (sa + sb) * (sa + sb) /
           (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    r.p_value = stats::t_two_sided_p(r.t, r.df);
    return r;
}

std::vector<GroupMeansRow> group_means(const dataset::Dataset& data) {
    if (data.samples.empty()) throw DimensionMismatch("group_means: empty dataset");
    std::vector<GroupMeansRow> rows;
    for (std::size_t f = 0; f < data.feature_names.size(); ++f) {
        GroupMeansRow row;
        row.feature = data.feature_names[f];
        double sum_all = 0.0, sum_pos = 0.0, sum_neg = 0.0;
        std::size_t n_pos = 0, n_neg = 0;
        for (const auto& s : data.samples) {
            double v = s.features.at(f);
            sum_all += v;
            if (s.label == 1) {
                sum_pos += v;
                ++n_pos;
            } else {
                sum_neg += v;
                ++n_neg;
            }
        }
        row.all = sum_all / static_cast<double>(data.samples.size());
        if (n_pos) row.bankrupt = sum_pos / static_cast<double>(n_pos);
        if (n_neg) row.healthy = sum_neg / static_cast<double>(n_neg);
        rows.push_back(std::move(row));
    }
    return rows;
}

CorrelationResult correlation_matrix(const dataset::Dataset& data,
                                     const std::vector<std::string>& feature_subset) {
    if (data.samples.size() < 2)
        throw DimensionMismatch("correlation_matrix: need >= 2 samples");
    CorrelationResult result;
    result.features = feature_subset.empty() ? data.feature_names : feature_subset;
    std::vector<std::size_t> cols;
    for (const auto& name : result.features) {
        auto it = std::find(data.feature_names.begin(), data.feature_names.end(), name);
        if (it == data.feature_names.end())
            throw DimensionMismatch("unknown feature '" + name + "'");
        cols.push_back(static_cast<std::size_t>(it - data.feature_names.begin()));
    }
    std::size_t k = cols.size();
    std::size_t n = data.samples.size();
    std::vector<std::vector<double>> x(k, std::vector<double>(n));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
            x[j][i] = data.samples[i].features.at(cols[j]);
    std::vector<double> mean(k), sd(k);
    result.zero_variance.assign(k, false);
    for (std::size_t j = 0; j < k; ++j) {
        mean[j] = mean_of(x[j]);
        double v = sample_var(x[j], mean[j]);
        sd[j] = std::sqrt(v);
        if (v == 0.0) result.zero_variance[j] = true;
    }
    result.r.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a) {
        result.r[a][a] = 1.0;
        for (std::size_t b = a + 1; b < k; ++b) {
            if (result.zero_variance[a] || result.zero_variance[b]) continue;
            double cov = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                cov += (x[a][i] - mean[a]) * (x[b][i] - mean[b]);
            cov /= static_cast<double>(n - 1);
            double r = cov / (sd[a] * sd[b]);
            r = std::clamp(r, -1.0, 1.0);
            result.r[a][b] = result.r[b][a] = r;
        }
    }
    return result;
}

CohortTrend cohort_trend(const std::vector<CohortSample>& samples) {
    CohortTrend trend;
    if (!samples.empty()) trend.category_names = samples.front().features.category_names;
    std::size_t ncat = trend.category_names.size();
    for (int label : {0, 1}) {
        for (int years = 0; years <= 5; ++years) {
            CohortCell cell;
            cell.label = label;
            cell.years_before = years;
            std::vector<double> sums(ncat, 0.0);
            for (const auto& s : samples) {
                if (s.label != label || s.years_before != years) continue;
                ++cell.count;
                for (std::size_t c = 0; c < ncat; ++c)
                    sums[c] += s.features.category_percent.at(c);
            }
            cell.mean_percent.resize(ncat);
            for (std::size_t c = 0; c < ncat; ++c)
                cell.mean_percent[c] =
                    cell.count ? std::optional<double>(sums[c] / cell.count)
                               : std::nullopt;
            trend.cells.push_back(std::move(cell));
        }
    }
    return trend;
}

std::vector<ModelComparisonRow> compare_models(
    const std::vector<std::tuple<std::string, glm::FittedLogit, ModelEval, ModelEval>>&
        models) {
    std::vector<ModelComparisonRow> rows;
    for (const auto& [name, model, train_eval, test_eval] : models) {
        ModelComparisonRow row;
        row.name = name;
        row.train_accuracy = train_eval.metrics.accuracy;
        row.test_accuracy = test_eval.metrics.accuracy;
        row.log_lik = model.log_likelihood;
        row.aic = model.aic;
        row.bic = model.bic;
        row.auc = test_eval.roc.auc_trapezoid;
        row.deviance = model.deviance;
        row.parameters = static_cast<int>(model.coefficients.size()) - 1;
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ModelComparisonRow& a, const ModelComparisonRow& b) {
                         return a.train_accuracy.value_or(-1.0) >
                                b.train_accuracy.value_or(-1.0);
                     });
    return rows;
}

std::string comparison_csv(const std::vector<ModelComparisonRow>& rows) {
    std::ostringstream out;
    out << "model,training_accuracy,test_accuracy,loglik,aic,bic,auc,deviance,parameters\n";
    for (const auto& r : rows) {
        out << r.name << ',' << fmt_opt(r.train_accuracy, "%.17g") << ','
            << fmt_opt(r.test_accuracy, "%.17g") << ',' << fmt(r.log_lik) << ','
            << fmt(r.aic) << ',' << fmt(r.bic) << ',' << fmt(r.auc) << ','
            << fmt(r.deviance) << ',' << r.parameters << '\n';
    }
    return out.str();
}

std::string comparison_text(const std::vector<ModelComparisonRow>& rows) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-18s %9s %9s %10s %9s %9s %6s %9s %6s\n",
                  "Model", "TrainAcc", "TestAcc", "LogLik", "AIC", "BIC", "AUC",
                  "Deviance", "Params");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line,
                      "%-18s %9s %9s %10.2f %9.2f %9.2f %6.2f %9.2f %6d\n",
                      r.name.c_str(), fmt_opt(r.train_accuracy, "%.2f").c_str(),
                      fmt_opt(r.test_accuracy, "%.2f").c_str(), r.log_lik, r.aic,
                      r.bic, r.auc, r.deviance, r.parameters);
        out << line;
    }
    return out.str();
}

std::string roc_csv(const RocCurve& curve) {
    std::ostringstream out;
    out << "threshold,fpf,tpf\n";
    for (const auto& p : curve.points)
        out << (std::isinf(p.threshold) ? "inf" : fmt(p.threshold)) << ','
            << fmt(p.fpf) << ',' << fmt(p.tpf) << '\n';
    return out.str();
}

}  // namespace mda::eval
