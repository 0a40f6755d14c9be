#include <cstdio>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mda/pipeline.hpp"

namespace {

using mda::pipeline::PipelineConfig;

struct CommonFlags {
    std::optional<std::string> config_file;
    std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option_function<std::string>(
        "--config", [&](const std::string& v) { flags.config_file = v; },
        "flat JSON config file");
    for (const char* key :
         {"cache-dir", "user-agent", "rate-limit", "horizon-days", "min-mda-words",
          "train-fraction", "seed", "cutoff", "lexicon-paths"}) {
        std::string config_key(key);
        std::replace(config_key.begin(), config_key.end(), '-', '_');
        cmd->add_option_function<std::string>(
            "--" + std::string(key),
            [&flags, config_key](const std::string& v) {
                flags.overrides[config_key] = v;
            },
            "override config key " + config_key);
    }
}

PipelineConfig make_config(const CommonFlags& flags) {
    std::optional<std::filesystem::path> file;
    if (flags.config_file) file = *flags.config_file;
    auto config = mda::pipeline::load_config(file, flags.overrides);
    std::filesystem::create_directories(config.cache_dir);
    mda::pipeline::echo_config(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disclosure-text bankruptcy analytics pipeline"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string summary;

    std::string index_file, form_type = "10-K";
    auto* index = app.add_subcommand("index", "parse a quarterly master index");
    add_common(index, flags);
    index->add_option("--input", index_file, "master index file")->required();
    index->add_option("--form-type", form_type, "form type filter");
    index->callback([&] {
        auto config = make_config(flags);
        summary = mda::pipeline::stage_index(config, index_file, form_type);
    });

    auto* fetch = app.add_subcommand("fetch", "download filings listed in filings.csv");
    add_common(fetch, flags);
    fetch->callback([&] {
        auto config = make_config(flags);
        if (config.user_agent.empty())
            throw mda::ConfigError("user_agent (EDGAR requires an operator contact)");
        mda::ingest::EdgarTransport transport(config.user_agent);
        mda::ingest::SystemClock clock;
        summary = mda::pipeline::stage_fetch(config, transport, clock);
    });

    auto* clean = app.add_subcommand("clean", "strip markup from raw filings");
    add_common(clean, flags);
    clean->callback([&] { summary = mda::pipeline::stage_clean(make_config(flags)); });

    auto* extract = app.add_subcommand("extract-mda", "extract the MD&A section");
    add_common(extract, flags);
    extract->callback(
        [&] { summary = mda::pipeline::stage_extract_mda(make_config(flags)); });

    auto* featurize = app.add_subcommand("featurize", "compute linguistic features");
    add_common(featurize, flags);
    featurize->callback(
        [&] { summary = mda::pipeline::stage_featurize(make_config(flags)); });

    std::string events_file, universe_file;
    auto* assemble = app.add_subcommand("assemble", "join features with labels");
    add_common(assemble, flags);
    assemble->add_option("--events", events_file, "bankruptcy label file")->required();
    assemble->add_option("--universe", universe_file, "non-bankrupt universe CSV");
    assemble->callback([&] {
        std::optional<std::filesystem::path> universe;
        if (!universe_file.empty()) universe = universe_file;
        summary = mda::pipeline::stage_assemble(make_config(flags), events_file,
                                                universe);
    });

    bool no_balance = false;
    auto* split = app.add_subcommand("split", "balanced sample + train/test split");
    add_common(split, flags);
    split->add_flag("--no-balance", no_balance, "skip negative down-sampling");
    split->callback([&] {
        summary = mda::pipeline::stage_split(make_config(flags), !no_balance);
    });

    std::string model_name;
    auto* train = app.add_subcommand("train", "fit a logit model");
    add_common(train, flags);
    train->add_option("--model", model_name,
                      "stress | lm | liwc | liwc_stress | lm_stress | liwc_lm_stress")
        ->required();
    train->callback([&] {
        summary = mda::pipeline::stage_train(make_config(flags), model_name);
    });

    auto* evaluate = app.add_subcommand("evaluate", "metrics + ROC on the test set");
    add_common(evaluate, flags);
    evaluate->add_option("--model", model_name, "model name")->required();
    evaluate->callback([&] {
        summary = mda::pipeline::stage_evaluate(make_config(flags), model_name);
    });

    std::vector<std::string> model_names;
    auto* compare = app.add_subcommand("compare", "model comparison table");
    add_common(compare, flags);
    compare->add_option("--models", model_names, "trained model names")->required();
    compare->callback([&] {
        summary = mda::pipeline::stage_compare(make_config(flags), model_names);
    });

    auto* ttest = app.add_subcommand("ttest", "per-feature Welch t-tests");
    add_common(ttest, flags);
    ttest->callback([&] { summary = mda::pipeline::stage_ttest(make_config(flags)); });

    std::string reference_date;
    auto* trend = app.add_subcommand("trend", "feature means by years before event");
    add_common(trend, flags);
    trend->add_option("--events", events_file, "bankruptcy label file")->required();
    trend->add_option("--reference-date", reference_date,
                      "cohort anchor for non-bankrupt filings (default: latest event)");
    trend->callback([&] {
        std::optional<std::string> ref;
        if (!reference_date.empty()) ref = reference_date;
        summary = mda::pipeline::stage_trend(make_config(flags), events_file, ref);
    });

    auto* report = app.add_subcommand("report", "bundle tables and ROC files");
    add_common(report, flags);
    report->callback([&] { summary = mda::pipeline::stage_report(make_config(flags)); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const mda::Error& e) {
        std::fprintf(stderr, "error %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error Internal: %s\n", e.what());
        return 1;
    }
    std::printf("%s\n", summary.c_str());
    return 0;
}
