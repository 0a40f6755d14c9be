// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Reference numbers are frozen from the published tables.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mda/dataset.hpp"
#include "mda/eval.hpp"
#include "mda/glm.hpp"
#include "mda/lexicon.hpp"
#include "mda/pipeline.hpp"
#include "mda/rng.hpp"
#include "mda/textprep.hpp"

namespace fs = std::filesystem;
using namespace mda;

namespace {

int failures = 0;

void report(int num, const char* desc, bool ok) {
    std::printf("criterion %d: %s - %s\n", num, ok ? "PASS" : "FAIL", desc);
    if (!ok) ++failures;
}

bool check(bool ok, const std::string& detail) {
    if (!ok) std::fprintf(stderr, "  detail: %s\n", detail.c_str());
    return ok;
}

glm::DesignMatrix design_from(const Eigen::MatrixXd& predictors,
                              std::vector<std::string> names = {}) {
    glm::DesignMatrix d;
    d.X.resize(predictors.rows(), predictors.cols() + 1);
    d.X.col(0).setOnes();
    d.X.rightCols(predictors.cols()) = predictors;
    if (names.empty())
        for (Eigen::Index j = 0; j < predictors.cols(); ++j)
            names.push_back("x" + std::to_string(j + 1));
    d.feature_names = std::move(names);
    return d;
}

// ---------------------------------------------------------------------------
// 1. Information-criteria ledger over the six comparison-table rows.

struct ComparisonRow {
    const char* name;
    double log_lik, aic, bic, deviance;
    int parameters;
};

const ComparisonRow kComparisonRows[] = {
    {"LIWC_LM_Stress", -366.95, 787.89, 914.38, 733.89, 26},
    {"LIWC_Stress", -374.89, 797.78, 910.21, 749.78, 23},
    {"LM_Stress", -410.58, 837.17, 874.64, 821.17, 7},
    {"Stress_Diction", -428.09, 866.18, 889.61, 856.18, 4},
    {"LIWC", -470.61, 981.22, 1074.92, 941.22, 19},
    {"LM", -489.88, 987.75, 1006.49, 979.75, 3},
};

bool criterion_information_criteria() {
    bool ok = true;
    for (const auto& row : kComparisonRows) {
        auto ic = glm::information_criteria(row.log_lik, row.parameters, 800);
        // the table carries two-decimal values; 0.011 covers rounding drift
        ok &= check(std::fabs(ic.aic - row.aic) <= 0.011,
                    std::string(row.name) + ": computed AIC " +
                        std::to_string(ic.aic) + " vs printed " +
                        std::to_string(row.aic));
        double n = std::exp((row.bic - row.deviance) / (row.parameters + 1));
        long rounded = std::lround(n);
        ok &= check(std::labs(rounded - 800) <= 1,
                    std::string(row.name) + ": recovered n " + std::to_string(n));
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 2. Odds-ratio ledger over every coefficient row of the three tables.

struct CoefficientRow {
    const char* name;
    double coefficient, odds_ratio;
};

const CoefficientRow kLiwcTable[] = {
    {"Intercept", 2.75, 15.68}, {"WPS", 0.08, 1.08},
    {"WC", 0.00, 1.00},         {"Sixltr", -0.07, 0.93},
    {"Dic", -0.16, 0.85},       {"function.", 0.60, 1.82},
    {"affect", -0.60, 0.55},    {"social", 0.37, 1.45},
    {"cogproc", -0.34, 0.71},   {"percept", 0.73, 2.07},
    {"bio", -0.05, 0.95},       {"drives", 0.30, 1.35},
    {"relativ", -0.06, 0.94},   {"AllPunc", -0.08, 0.92},
    {"focuspast", 1.10, 3.00},  {"focuspresent", 0.06, 1.06},
    {"focusfuture", 1.65, 5.20}, {"anger", 0.68, 1.98},
    {"posemo", 1.15, 3.17},     {"negemo", 1.34, 3.81},
};

const CoefficientRow kLmTable[] = {
    {"Intercept", 0.56, 1.75},
    {"negative", 1.41, 4.10},
    {"positive", -2.88, 0.06},
    {"uncertainty", -0.64, 0.53},
};

const CoefficientRow kStressTable[] = {
    {"Intercept", -3.36, 0.03},  {"debt", 0.36, 1.44},
    {"distress", 5.03, 153.66},  {"restructure", 2.96, 19.39},
    {"healthy", 0.23, 1.26},
};

double round2(double v) { return std::llround(v * 100.0) / 100.0; }

bool criterion_odds_ratios() {
    bool ok = true;
    auto check_table = [&](const char* table, const CoefficientRow* rows,
                           std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            double lo = std::exp(rows[i].coefficient - 0.005);
            double hi = std::exp(rows[i].coefficient + 0.005);
            bool strict = lo <= rows[i].odds_ratio && rows[i].odds_ratio <= hi;
            // the printed odds ratio itself carries only two decimals, so
            // accept when the interval endpoints round onto it
            bool rounded = round2(lo) <= rows[i].odds_ratio &&
                           rows[i].odds_ratio <= round2(hi);
            ok &= check(strict || rounded,
                        std::string(table) + " " + rows[i].name + ": [" +
                            std::to_string(lo) + ", " + std::to_string(hi) +
                            "] vs printed " + std::to_string(rows[i].odds_ratio));
        }
    };
    check_table("LIWC", kLiwcTable, std::size(kLiwcTable));
    check_table("LM", kLmTable, std::size(kLmTable));
    check_table("Stress", kStressTable, std::size(kStressTable));
    return ok;
}

// ---------------------------------------------------------------------------
// 3. GLM closed forms and finite-difference derivative checks.

bool criterion_glm_oracles() {
    bool ok = true;

    Eigen::MatrixXd pred(80, 1);
    Eigen::VectorXd y(80);
    Eigen::Index r = 0;
    auto add = [&](double x, double label, int count) {
        for (int i = 0; i < count; ++i, ++r) {
            pred(r, 0) = x;
            y(r) = label;
        }
    };
    add(0, 1, 10);
    add(0, 0, 30);
    add(1, 1, 30);
    add(1, 0, 10);
    auto two_by_two = glm::fit(design_from(pred), y);
    ok &= check(std::fabs(two_by_two.coefficients(1) - std::log(9.0)) < 1e-6,
                "2x2 slope vs ln 9");
    ok &= check(std::fabs(two_by_two.coefficients(0) - std::log(1.0 / 3.0)) < 1e-6,
                "2x2 intercept vs ln(1/3)");

    glm::DesignMatrix ones;
    ones.X = Eigen::MatrixXd::Ones(1000, 1);
    Eigen::VectorXd y2(1000);
    for (Eigen::Index i = 0; i < 1000; ++i) y2(i) = i < 600 ? 1.0 : 0.0;
    auto intercept_only = glm::fit(ones, y2);
    ok &= check(
        std::fabs(intercept_only.coefficients(0) - std::log(600.0 / 400.0)) < 1e-8,
        "intercept-only vs ln(ybar/(1-ybar))");

    std::mt19937 gen(404);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::Index n = 10 + static_cast<Eigen::Index>(gen() % 41);  // <= 50
        Eigen::Index k = 1 + static_cast<Eigen::Index>(gen() % 4);    // <= 4
        Eigen::MatrixXd p(n, k);
        Eigen::VectorXd yy(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < k; ++j) p(i, j) = normal(gen);
            yy(i) = coin(gen) ? 1.0 : 0.0;
        }
        auto X = design_from(p);
        Eigen::VectorXd beta(k + 1);
        for (Eigen::Index j = 0; j <= k; ++j) beta(j) = 0.3 * normal(gen);

        Eigen::VectorXd probs(n);
        for (Eigen::Index i = 0; i < n; ++i)
            probs(i) = glm::logistic(X.X.row(i).dot(beta));
        Eigen::VectorXd grad = X.X.transpose() * (yy - probs);
        Eigen::MatrixXd hess =
            -(X.X.transpose() *
              (probs.array() * (1.0 - probs.array())).matrix().asDiagonal() * X.X);

        for (Eigen::Index j = 0; j <= k; ++j) {
            Eigen::VectorXd bp = beta, bm = beta;
            bp(j) += h;
            bm(j) -= h;
            double fd =
                (glm::log_likelihood(bp, X, yy) - glm::log_likelihood(bm, X, yy)) /
                (2 * h);
            double scale = std::max(1.0, std::fabs(grad(j)));
            ok &= check(std::fabs(fd - grad(j)) / scale < 1e-5,
                        "gradient trial " + std::to_string(trial));

            Eigen::VectorXd pp(n), pm(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                pp(i) = glm::logistic(X.X.row(i).dot(bp));
                pm(i) = glm::logistic(X.X.row(i).dot(bm));
            }
            Eigen::VectorXd col =
                (X.X.transpose() * (yy - pp) - X.X.transpose() * (yy - pm)) / (2 * h);
            for (Eigen::Index row_i = 0; row_i <= k; ++row_i) {
                double hscale = std::max(1.0, std::fabs(hess(row_i, j)));
                ok &= check(std::fabs(col(row_i) - hess(row_i, j)) / hscale < 1e-4,
                            "hessian trial " + std::to_string(trial));
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 4. Trapezoid AUC == pair-counting AUC on 200 random instances.

bool criterion_auc_equivalence() {
    bool ok = true;
    std::mt19937 gen(808);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 10 + gen() % 191;  // <= 200
        std::vector<int> y;
        std::vector<double> s;
        bool with_ties = trial % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            y.push_back(static_cast<int>(gen() % 2));
            s.push_back(with_ties ? static_cast<double>(gen() % 8) / 8.0
                                  : unif(gen));
        }
        std::size_t pos = static_cast<std::size_t>(
            std::count(y.begin(), y.end(), 1));
        if (pos == 0 || pos == n) {
            --trial;  // redraw: roc requires both classes
            continue;
        }
        auto curve = eval::roc(y, s);
        ok &= check(std::fabs(curve.auc_trapezoid - curve.auc_rank) <= 1e-12,
                    "trial " + std::to_string(trial) + ": trapezoid " +
                        std::to_string(curve.auc_trapezoid) + " vs rank " +
                        std::to_string(curve.auc_rank));
    }
    ok &= check(eval::roc({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9}).auc_trapezoid == 1.0,
                "perfect separation AUC");
    ok &= check(std::fabs(eval::roc({0, 1, 0, 1}, {0.3, 0.3, 0.3, 0.3})
                              .auc_trapezoid -
                          0.5) <= 1e-15,
                "constant scores AUC");
    return ok;
}

// ---------------------------------------------------------------------------
// 5. Accuracy identity and cutoff monotonicity.

bool criterion_metric_identities() {
    bool ok = true;
    std::mt19937 gen(505);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 20 + gen() % 181;
        std::vector<int> y;
        std::vector<double> p;
        for (std::size_t i = 0; i < n; ++i) {
            y.push_back(static_cast<int>(gen() % 2));
            p.push_back(unif(gen));
        }
        if (std::count(y.begin(), y.end(), 1) == 0 ||
            std::count(y.begin(), y.end(), 0) == 0) {
            --trial;
            continue;
        }
        auto m = eval::confusion(y, p, 0.3 + 0.4 * unif(gen));
        double recomposed = *m.prevalence * *m.sensitivity +
                            (1.0 - *m.prevalence) * *m.specificity;
        ok &= check(std::fabs(recomposed - *m.accuracy) <= 1e-12,
                    "accuracy identity trial " + std::to_string(trial));

        double prev_sens = 2.0, prev_spec = -1.0;
        for (int c = 1; c <= 99; ++c) {
            auto g = eval::confusion(y, p, c / 100.0);
            ok &= check(*g.sensitivity <= prev_sens + 1e-15,
                        "sensitivity monotone at cutoff " + std::to_string(c));
            ok &= check(*g.specificity >= prev_spec - 1e-15,
                        "specificity monotone at cutoff " + std::to_string(c));
            prev_sens = *g.sensitivity;
            prev_spec = *g.specificity;
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 6. Synthetic end-to-end recovery at the published group means.

std::string synthesize_document(bool bankrupt, Lcg64& rng) {
    // Per-token planting rates are the published group means (percent / 100),
    // jittered per document by a uniform 0.8-1.2 multiplier.
    const double debt = bankrupt ? 3.04 : 2.58;
    const double distress = bankrupt ? 0.33 : 0.21;
    const double restructure = bankrupt ? 0.09 : 0.07;
    const double healthy = bankrupt ? 0.55 : 0.54;
    double jitter = 0.8 + 0.4 * rng.uniform();

    std::ostringstream doc;
    for (int t = 0; t < 1500; ++t) {
        double roll = 100.0 * rng.uniform();
        double acc = debt * jitter;
        if (roll < acc) {
            doc << "borrowings ";
            continue;
        }
        acc += distress * jitter;
        if (roll < acc) {
            doc << "covenant ";
            continue;
        }
        acc += restructure * jitter;
        if (roll < acc) {
            doc << "restructuring ";
            continue;
        }
        acc += healthy * jitter;
        if (roll < acc) {
            doc << "profitable ";
            continue;
        }
        // filler vocabulary chosen to miss every lexicon entry
        doc << "filler" << rng.below(500) << ' ';
    }
    return doc.str();
}

bool criterion_synthetic_recovery() {
    bool ok = true;
    Lcg64 rng(606);
    dataset::Dataset data;
    data.feature_names = {"debt", "distress", "restructure", "healthy"};
    std::vector<lexicon::Lexicon> lexicons{lexicon::stress_lexicon()};
    for (int i = 0; i < 1000; ++i) {
        bool bankrupt = i < 500;
        auto fv = lexicon::featurize_text(synthesize_document(bankrupt, rng),
                                          lexicons);
        data.samples.push_back({{i, "synthetic-" + std::to_string(i)},
                                fv.category_percent,
                                bankrupt ? 1 : 0});
    }
    auto [train, test] = dataset::train_test_split(data, 0.8, 1);
    auto model = glm::fit(glm::make_design(train), glm::labels_vector(train));
    ok &= check(model.converged, "synthetic fit converged");
    // sign structure from the published table: debt, distress, restructure > 0
    for (int j : {1, 2, 3})
        ok &= check(model.coefficients(j) > 0.0,
                    "sign of " + data.feature_names[static_cast<std::size_t>(j - 1)] +
                        " coefficient = " + std::to_string(model.coefficients(j)));

    Eigen::VectorXd p = glm::predict_prob(model, glm::make_design(test));
    std::vector<double> probs(p.data(), p.data() + p.size());
    std::vector<int> y;
    for (const auto& s : test.samples) y.push_back(s.label);
    auto curve = eval::roc(y, probs);
    ok &= check(curve.auc_trapezoid > 0.75,
                "held-out AUC = " + std::to_string(curve.auc_trapezoid));
    return ok;
}

// ---------------------------------------------------------------------------
// 7. Extraction fixtures: every scenario must resolve exactly as labeled.

std::string filler_words(int n) {
    std::ostringstream out;
    for (int i = 0; i < n; ++i) out << "segment" << i << ' ';
    return out.str();
}

bool criterion_extraction_fixtures() {
    using textprep::ExtractionRule;
    struct Fixture {
        const char* label;
        std::string text;
        const char* expect;  // "7a", "8", or an error name
        const char* must_contain;
        const char* must_exclude;
    };
    std::string body = filler_words(150);
    std::vector<Fixture> fixtures = {
        {"plain 7 to 7A",
         "ITEM 7. MANAGEMENT'S DISCUSSION " + body + "ITEM 7A. MARKET RISK",
         "7a", "MANAGEMENT'S DISCUSSION", "MARKET RISK"},
        {"fallback to item 8",
         "Item 7. Management's Discussion " + body + "Item 8. Financial Statements",
         "8", "Management's Discussion", "Financial Statements"},
        {"toc decoy before the real section",
         "ITEM 7 Management's Discussion 24\nITEM 7A Quantitative 55\n"
         "ITEM 7. MANAGEMENT'S DISCUSSION " + body + "ITEM 7A. MARKET RISK",
         "7a", "MANAGEMENT'S DISCUSSION", "MARKET RISK"},
        {"dash separator", "Item 7 - Discussion " + body + "Item 7A - Risk",
         "7a", "Discussion", "Risk"},
        {"colon separator", "ITEM  7: DISCUSSION " + body + "ITEM 7A: RISK",
         "7a", "DISCUSSION", "RISK"},
        {"newline after the number", "item 7\nDiscussion " + body + "item 7a\nRisk",
         "7a", "Discussion", "Risk"},
        {"interior space in 7 A",
         "ITEM 7. DISCUSSION " + body + "ITEM 7 A. RISK",
         "7a", "DISCUSSION", "RISK"},
        {"lowercase anchors", "item 7. discussion " + body + "item 7a. risk",
         "7a", "discussion", "risk"},
        {"item 17 and 70 are not anchors",
         "ITEM 17 registrant " + filler_words(30) + "ITEM 70 other " +
             filler_words(30) + "ITEM 7. REAL SECTION " + body + "ITEM 7A. RISK",
         "7a", "REAL SECTION", "registrant"},
        {"second item 7 yields the longer span",
         "ITEM 7. short preamble ITEM 7. MAIN DISCUSSION " + body +
             "ITEM 7A. RISK",
         "7a", "MAIN DISCUSSION", nullptr},
        {"no section at all", "Annual report " + filler_words(60), "SectionNotFound",
         nullptr, nullptr},
        {"under the word threshold",
         "ITEM 7. Discussion " + filler_words(40) + "ITEM 7A. Risk", "TooShort",
         nullptr, nullptr},
        {"incorporated by reference",
         "ITEM 7. The information required is incorporated by reference to "
         "the annual report. ITEM 7A. Risk",
         "IncorporatedByReference", nullptr, nullptr},
    };

    bool ok = true;
    for (const auto& f : fixtures) {
        textprep::CleanFiling clean;
        clean.record.cik = 1;
        clean.record.path = "fixture";
        clean.text = f.text;
        std::string got;
        std::string span;
        try {
            auto doc = textprep::extract_mda(clean);
            got = doc.extraction_rule == ExtractionRule::kItem7To7a ? "7a" : "8";
            span = doc.text;
        } catch (const Error& e) {
            got = e.name();
        }
        bool match = got == f.expect;
        if (match && f.must_contain)
            match = span.find(f.must_contain) != std::string::npos;
        if (match && f.must_exclude)
            match = span.find(f.must_exclude) == std::string::npos;
        ok &= check(match, std::string(f.label) + ": expected " + f.expect +
                               ", got " + got);
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 8. Byte-identical reruns of split / balanced_sample / train.

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

dataset::Dataset determinism_dataset() {
    dataset::Dataset data;
    data.feature_names = {"wc",   "wps",      "sixltr",      "allpunc",
                          "debt", "distress", "restructure", "healthy"};
    Lcg64 rng(909);
    for (int i = 0; i < 90; ++i) {
        double distress = 0.05 + 0.5 * rng.uniform();
        // noisy labels: overlap keeps the downstream fit well away from
        // separation on a small balanced subset
        double p = 1.0 / (1.0 + std::exp(-(-2.0 + 6.0 * distress)));
        int label = rng.uniform() < p ? 1 : 0;
        data.samples.push_back(
            {{2000 + i, "det-" + std::to_string(i)},
             {1200.0 + i, 18.0 + rng.uniform(), 26.0 + 4.0 * rng.uniform(),
              5.0 + rng.uniform(), 2.4 + rng.uniform(), distress,
              0.05 + 0.1 * rng.uniform(), 0.5 + 0.1 * rng.uniform()},
             label});
    }
    return data;
}

bool criterion_determinism() {
    auto data = determinism_dataset();
    bool ok = true;
    std::string first_train, first_test, first_model;
    for (int run = 0; run < 2; ++run) {
        auto dir = fs::temp_directory_path() /
                   ("mda_accept_det" + std::to_string(run) + "_" +
                    std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        pipeline::PipelineConfig config;
        config.cache_dir = dir;
        config.seed = 17;
        {
            std::ofstream out(dir / "dataset.csv", std::ios::binary);
            out << pipeline::dataset_csv(data);
        }
        pipeline::stage_split(config, /*balance=*/true);
        pipeline::stage_train(config, "stress");
        auto train_bytes = slurp(dir / "train.csv");
        auto test_bytes = slurp(dir / "test.csv");
        auto model_bytes = slurp(dir / "models" / "stress.json");
        if (run == 0) {
            first_train = train_bytes;
            first_test = test_bytes;
            first_model = model_bytes;
            ok &= check(!first_train.empty() && !first_model.empty(),
                        "first run produced artifacts");
        } else {
            ok &= check(train_bytes == first_train, "train.csv byte-identical");
            ok &= check(test_bytes == first_test, "test.csv byte-identical");
            ok &= check(model_bytes == first_model,
                        "models/stress.json byte-identical");
        }
        fs::remove_all(dir);
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 9. Welch t-test oracle and invariances.

bool criterion_welch() {
    bool ok = true;
    auto fixture = eval::welch_t_test({1, 2, 3}, {4, 5, 6});
    ok &= check(std::fabs(fixture.t - (-3.6742)) <= 1e-4,
                "fixture t = " + std::to_string(fixture.t));
    ok &= check(std::fabs(fixture.df - 4.0) <= 1e-4,
                "fixture df = " + std::to_string(fixture.df));

    std::mt19937 gen(303);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t na = 3 + gen() % 18, nb = 3 + gen() % 18;
        std::vector<double> a, b;
        for (std::size_t i = 0; i < na; ++i) a.push_back(normal(gen));
        for (std::size_t i = 0; i < nb; ++i) b.push_back(1.0 + 2.0 * normal(gen));
        auto ab = eval::welch_t_test(a, b);
        auto ba = eval::welch_t_test(b, a);
        ok &= check(std::fabs(ab.t + ba.t) <= 1e-10 &&
                        std::fabs(ab.df - ba.df) <= 1e-10 &&
                        std::fabs(ab.p_value - ba.p_value) <= 1e-10,
                    "antisymmetry trial " + std::to_string(trial));

        double c = 0.5 + 3.0 * std::fabs(normal(gen));
        auto scale_vec = [c](std::vector<double> v) {
            for (double& x : v) x *= c;
            return v;
        };
        auto scaled = eval::welch_t_test(scale_vec(a), scale_vec(b));
        ok &= check(std::fabs(scaled.t - ab.t) <= 1e-9 &&
                        std::fabs(scaled.df - ab.df) <= 1e-9 &&
                        std::fabs(scaled.p_value - ab.p_value) <= 1e-9,
                    "scale equivariance trial " + std::to_string(trial));
    }
    return ok;
}

}  // namespace

int main() {
    report(1, "information-criteria ledger (6 comparison rows, n recovered)",
           criterion_information_criteria());
    report(2, "odds-ratio ledger (all coefficient tables)",
           criterion_odds_ratios());
    report(3, "GLM closed forms and finite-difference derivatives",
           criterion_glm_oracles());
    report(4, "trapezoid AUC equals pair-counting AUC",
           criterion_auc_equivalence());
    report(5, "accuracy identity and cutoff monotonicity",
           criterion_metric_identities());
    report(6, "synthetic end-to-end recovery at published group means",
           criterion_synthetic_recovery());
    report(7, "extraction fixtures resolve exactly as labeled",
           criterion_extraction_fixtures());
    report(8, "split/balanced_sample/train reruns byte-identical",
           criterion_determinism());
    report(9, "Welch t-test oracle, antisymmetry, scale equivariance",
           criterion_welch());
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
