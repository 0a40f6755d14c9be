#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mda/pipeline.hpp"

using namespace mda;
using namespace mda::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
    auto dir = fs::temp_directory_path() /
               (std::string("mda_pipe_") + tag + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << body;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

std::string repeat_words(int n, const std::string& stem) {
    std::ostringstream out;
    for (int i = 0; i < n; ++i) out << stem << i << ' ';
    return out.str();
}

// 120-row synthetic dataset over the stress columns, informative in distress.
// Labels are noisy enough that the logit fit stays away from separation.
dataset::Dataset synthetic_dataset() {
    dataset::Dataset data;
    data.feature_names = {"wc",   "wps",      "sixltr",      "allpunc",
                          "debt", "distress", "restructure", "healthy"};
    std::mt19937 gen(2718);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 120; ++i) {
        double distress = 0.05 + 0.5 * unif(gen);
        double p = 1.0 / (1.0 + std::exp(-(-1.5 + 5.0 * distress)));
        int label = unif(gen) < p ? 1 : 0;
        data.samples.push_back(
            {{1000 + i, "acc-" + std::to_string(i)},
             {1500.0 + i, 20.0 + unif(gen), 25.0 + 5.0 * unif(gen),
              4.0 + unif(gen), 2.0 + unif(gen), distress, 0.1 * unif(gen),
              0.5 + 0.2 * unif(gen)},
             label});
    }
    return data;
}

}  // namespace

TEST_CASE("load_config defaults, file values, and flag precedence") {
    auto defaults = load_config(std::nullopt, {});
    CHECK(defaults.rate_limit == doctest::Approx(10.0));
    CHECK(defaults.horizon_days == 365);
    CHECK(defaults.min_mda_words == 100);
    CHECK(defaults.train_fraction == doctest::Approx(0.8));
    CHECK(defaults.cutoff == doctest::Approx(0.5));
    CHECK(defaults.seed == 0);

    auto dir = temp_dir("config");
    write_file(dir / "c.json",
               "{\"horizon_days\": 730, \"cutoff\": 0.4, \"seed\": 7,\n"
               " \"cache_dir\": \"" + (dir / "cache").string() + "\"}\n");
    auto from_file = load_config(dir / "c.json", {});
    CHECK(from_file.horizon_days == 730);
    CHECK(from_file.cutoff == doctest::Approx(0.4));
    CHECK(from_file.seed == 7);

    // flags beat the file
    auto overridden = load_config(dir / "c.json", {{"cutoff", "0.6"}});
    CHECK(overridden.cutoff == doctest::Approx(0.6));
    CHECK(overridden.horizon_days == 730);
    fs::remove_all(dir);
}

TEST_CASE("load_config rejects bad values and names the offending key") {
    for (const auto& [key, value] :
         std::vector<std::pair<std::string, std::string>>{
             {"cutoff", "1.5"},
             {"cutoff", "0"},
             {"train_fraction", "1.0"},
             {"rate_limit", "-1"},
             {"horizon_days", "0"},
             {"min_mda_words", "0"},
             {"seed", "banana"},
             {"no_such_key", "1"}}) {
        try {
            load_config(std::nullopt, {{key, value}});
            FAIL("expected ConfigError for ", key, "=", value);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(key) != std::string::npos);
        }
    }
}

TEST_CASE("MDA_CACHE_DIR wins over file and flags") {
    ::setenv("MDA_CACHE_DIR", "/tmp/env-cache", 1);
    auto config = load_config(std::nullopt, {{"cache_dir", "/tmp/flag-cache"}});
    CHECK(config.cache_dir == fs::path("/tmp/env-cache"));
    ::unsetenv("MDA_CACHE_DIR");
    auto config2 = load_config(std::nullopt, {{"cache_dir", "/tmp/flag-cache"}});
    CHECK(config2.cache_dir == fs::path("/tmp/flag-cache"));
}

TEST_CASE("config_json round-trips through load_config") {
    PipelineConfig config;
    config.cutoff = 0.37;
    config.seed = 99;
    config.lexicon_paths = {"a.dic", "b.dic"};
    auto dir = temp_dir("cfgjson");
    write_file(dir / "echo.json", config_json(config));
    auto back = load_config(dir / "echo.json", {});
    CHECK(back.cutoff == doctest::Approx(0.37));
    CHECK(back.seed == 99);
    CHECK(back.lexicon_paths == config.lexicon_paths);
    fs::remove_all(dir);
}

TEST_CASE("feature and dataset CSV round trips") {
    auto data = synthetic_dataset();
    auto dir = temp_dir("csv");
    write_file(dir / "dataset.csv", dataset_csv(data));
    auto back = read_dataset_csv(dir / "dataset.csv");
    REQUIRE(back.samples.size() == data.samples.size());
    CHECK(back.feature_names == data.feature_names);
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        CHECK(back.samples[i].key == data.samples[i].key);
        CHECK(back.samples[i].label == data.samples[i].label);
        // 4-decimal fixed format: round trip to within half an ulp of 1e-4
        for (std::size_t f = 0; f < data.feature_names.size(); ++f)
            CHECK(std::fabs(back.samples[i].features[f] -
                            data.samples[i].features[f]) <= 5.1e-5);
    }
    CHECK_THROWS_AS(read_feature_csv(dir / "missing.csv"), ConfigError);
    write_file(dir / "bad.csv", "not,a,header\n");
    CHECK_THROWS_AS(read_feature_csv(dir / "bad.csv"), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("model_specs and feature resolution") {
    const auto& specs = model_specs();
    CHECK(specs.count("stress") == 1);
    CHECK(specs.count("liwc_lm_stress") == 1);
    CHECK(specs.at("stress") ==
          std::vector<std::string>{"debt", "distress", "restructure", "healthy"});
    CHECK(specs.at("liwc").size() == 19);
    CHECK(specs.at("liwc_lm_stress").size() == 19 + 3 + 4);

    auto data = synthetic_dataset();
    CHECK(resolve_model_features("stress", data).size() == 4);
    CHECK_THROWS_AS(resolve_model_features("nope", data), ConfigError);
    CHECK_THROWS_AS(resolve_model_features("lm", data), SchemaMismatch);
}

TEST_CASE("stage_index writes filings.csv and reads back") {
    auto dir = temp_dir("index");
    PipelineConfig config;
    config.cache_dir = dir;
    write_file(dir / "master.idx",
               "CIK|Company Name|Form Type|Date Filed|Filename\n"
               "----\n"
               "11|ACME, INC|10-K|2001-03-15|edgar/data/11/0000000011-01-000001.txt\n"
               "11|ACME, INC|8-K|2001-04-01|edgar/data/11/0000000011-01-000002.txt\n"
               "22|ZENITH CO|10-K|2001-02-20|edgar/data/22/0000000022-01-000003.txt\n");
    auto summary = stage_index(config, dir / "master.idx", "10-K");
    CHECK(summary.find("2 filings") != std::string::npos);
    auto records = read_filings_csv(dir / "filings.csv");
    REQUIRE(records.size() == 2);
    CHECK(records[0].cik == 11);
    // comma in the company name must not break the CSV
    CHECK(records[0].company_name.find(',') == std::string::npos);
    CHECK(records[1].accession() == "0000000022-01-000003");
    fs::remove_all(dir);
}

TEST_CASE("extract and featurize stages over a small corpus") {
    auto dir = temp_dir("extract");
    PipelineConfig config;
    config.cache_dir = dir;
    config.min_mda_words = 20;

    std::string good1 = "ITEM 7. DISCUSSION default covenant breach " +
                        repeat_words(40, "alpha") + "ITEM 7A. RISK tail";
    std::string good2 = "Item 7: Overview cash dividend profit " +
                        repeat_words(40, "beta") + "Item 8. Financial Statements";
    std::string short_one = "ITEM 7. Brief " + repeat_words(5, "x") + "ITEM 7A. RISK";
    write_file(dir / "clean" / "11" / "acc-1.txt", good1);
    write_file(dir / "clean" / "22" / "acc-2.txt", good2);
    write_file(dir / "clean" / "33" / "acc-3.txt", short_one);

    auto summary = stage_extract_mda(config);
    CHECK(summary.find("2 extracted") != std::string::npos);
    CHECK(summary.find("1 TooShort") != std::string::npos);
    CHECK(fs::exists(dir / "mda" / "11" / "acc-1.txt"));
    CHECK(fs::exists(dir / "mda" / "22" / "acc-2.txt"));
    CHECK(!fs::exists(dir / "mda" / "33" / "acc-3.txt"));

    auto feat_summary = stage_featurize(config);
    CHECK(feat_summary.find("2 documents") != std::string::npos);
    auto features = read_feature_csv(dir / "features.csv");
    REQUIRE(features.size() == 2);
    CHECK(features[0].key == dataset::SampleKey{11, "acc-1"});
    // distress words appear only in the first document
    auto distress_col = std::find(features[0].feature_names.begin(),
                                  features[0].feature_names.end(), "distress") -
                        features[0].feature_names.begin();
    CHECK(features[0].values[distress_col] > 0.0);
    CHECK(features[1].values[distress_col] == doctest::Approx(0.0));
    fs::remove_all(dir);
}

TEST_CASE("assemble stage joins filings, events, and features") {
    auto dir = temp_dir("assemble");
    PipelineConfig config;
    config.cache_dir = dir;
    config.horizon_days = 365;

    write_file(dir / "filings.csv",
               "cik,company_name,form_type,date_filed,path\n"
               "11,ACME,10-K,2000-03-01,edgar/data/11/acc-1.txt\n"
               "22,ZEN,10-K,2000-03-01,edgar/data/22/acc-2.txt\n");
    write_file(dir / "features.csv",
               "cik,accession,label,wc,wps,sixltr,allpunc,debt,distress\n"
               "11,acc-1,0,100,20.0000,25.0000,4.0000,3.0000,0.4000\n"
               "22,acc-2,0,100,20.0000,25.0000,4.0000,2.5000,0.2000\n");
    write_file(dir / "events.csv",
               "cik,petition_date,chapter\n11,2000-09-01,11\n");

    auto summary = stage_assemble(config, dir / "events.csv", std::nullopt);
    CHECK(summary.find("2 samples") != std::string::npos);
    CHECK(summary.find("(1 positive)") != std::string::npos);
    auto data = read_dataset_csv(dir / "dataset.csv");
    REQUIRE(data.samples.size() == 2);
    CHECK(data.samples[0].label == 1);   // cik 11 went bankrupt within horizon
    CHECK(data.samples[1].label == 0);
    fs::remove_all(dir);
}

TEST_CASE("split, train, evaluate, compare, ttest, report stage chain") {
    auto dir = temp_dir("chain");
    PipelineConfig config;
    config.cache_dir = dir;
    config.seed = 5;
    config.train_fraction = 0.8;

    auto data = synthetic_dataset();
    write_file(dir / "dataset.csv", dataset_csv(data));

    auto split_summary = stage_split(config, false);
    CHECK(split_summary.find("train /") != std::string::npos);
    auto train = read_dataset_csv(dir / "train.csv");
    auto test = read_dataset_csv(dir / "test.csv");
    CHECK(train.samples.size() + test.samples.size() == 120);
    // per-class floor(0.8 n) puts the train share within 2 of 96
    CHECK(train.samples.size() >= 94);
    CHECK(train.samples.size() <= 96);
    for (int label : {0, 1}) {
        CHECK(train.count_label(label) >= 2);
        CHECK(test.count_label(label) >= 1);
    }

    auto train_summary = stage_train(config, "stress");
    CHECK(train_summary.find("model stress") != std::string::npos);
    CHECK(fs::exists(dir / "models" / "stress.json"));
    auto coef = slurp(dir / "models" / "stress_coefficients.csv");
    CHECK(coef.rfind("name,coefficient", 0) == 0);
    CHECK(coef.find("Intercept") != std::string::npos);
    CHECK(coef.find("distress") != std::string::npos);

    auto eval_summary = stage_evaluate(config, "stress");
    CHECK(eval_summary.find("AUC=") != std::string::npos);
    CHECK(fs::exists(dir / "roc_stress.csv"));
    CHECK(fs::exists(dir / "eval_stress.json"));
    CHECK(slurp(dir / "roc_stress.csv").rfind("threshold,fpf,tpf", 0) == 0);
    auto eval_json = slurp(dir / "eval_stress.json");
    CHECK(eval_json.find("\"auc\"") != std::string::npos);

    auto compare_summary = stage_compare(config, {"stress"});
    CHECK(compare_summary.find("1 models") != std::string::npos);
    CHECK(slurp(dir / "comparison.csv")
              .rfind("model,training_accuracy", 0) == 0);
    CHECK(fs::exists(dir / "comparison.txt"));

    auto ttest_summary = stage_ttest(config);
    CHECK(ttest_summary.find("-> ttest.csv") != std::string::npos);
    auto ttest = slurp(dir / "ttest.csv");
    CHECK(ttest.rfind("feature,t,df,p_value", 0) == 0);
    CHECK(ttest.find("distress,") != std::string::npos);

    echo_config(config);
    auto report_summary = stage_report(config);
    CHECK(report_summary.find("report/") != std::string::npos);
    for (const char* f : {"comparison.csv", "comparison.txt", "ttest.csv",
                          "roc_stress.csv", "effective_config.json"})
        CHECK(fs::exists(dir / "report" / f));
    fs::remove_all(dir);
}

TEST_CASE("rerunning split and train is byte-identical") {
    auto data = synthetic_dataset();
    std::string first_train, first_model;
    for (int run = 0; run < 2; ++run) {
        auto dir = temp_dir(run == 0 ? "det0" : "det1");
        PipelineConfig config;
        config.cache_dir = dir;
        config.seed = 42;
        write_file(dir / "dataset.csv", dataset_csv(data));
        stage_split(config, false);
        stage_train(config, "stress");
        auto train_bytes = slurp(dir / "train.csv");
        auto model_bytes = slurp(dir / "models" / "stress.json");
        if (run == 0) {
            first_train = train_bytes;
            first_model = model_bytes;
        } else {
            CHECK(train_bytes == first_train);
            CHECK(model_bytes == first_model);
        }
        fs::remove_all(dir);
    }
}

TEST_CASE("balanced split equalizes classes before partitioning") {
    dataset::Dataset data = synthetic_dataset();
    // force a known imbalance: first 10 positive, rest negative
    for (std::size_t i = 0; i < data.samples.size(); ++i)
        data.samples[i].label = i < 10 ? 1 : 0;
    auto dir = temp_dir("balance");
    PipelineConfig config;
    config.cache_dir = dir;
    config.train_fraction = 0.8;
    write_file(dir / "dataset.csv", dataset_csv(data));
    stage_split(config, true);
    auto train = read_dataset_csv(dir / "train.csv");
    auto test = read_dataset_csv(dir / "test.csv");
    CHECK(train.samples.size() + test.samples.size() == 20);
    CHECK(train.count_label(1) == train.count_label(0));
    fs::remove_all(dir);
}
