#include "mda/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mda/textprep.hpp"

namespace mda::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

std::vector<std::string> split_char(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string fixed4(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// Sorted listing of <cik>/<accession>.txt files under a stage directory.
std::vector<fs::path> stage_files(const fs::path& dir) {
    std::vector<fs::path> files;
    if (!fs::exists(dir)) return files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

dataset::SampleKey key_from_stage_path(const fs::path& file) {
    dataset::SampleKey key;
    key.accession = file.stem().string();
    key.cik = std::stoll(file.parent_path().filename().string());
    return key;
}

double parse_double_field(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad number '" + s + "' in " + context);
    }
}

}  // namespace

PipelineConfig load_config(const std::optional<fs::path>& file,
                           const std::map<std::string, std::string>& overrides) {
    PipelineConfig config;

    std::map<std::string, std::string> values;
    if (file) {
        json j;
        try {
            j = json::parse(read_file(*file));
        } catch (const json::parse_error& e) {
            throw ConfigError(file->string() + ": " + e.what());
        }
        if (!j.is_object()) throw ConfigError("config must be a flat JSON object");
        for (auto& [key, value] : j.items()) {
            if (value.is_string()) values[key] = value.get<std::string>();
            else if (value.is_array()) {
                std::string joined;
                for (auto& v : value) {
                    if (!joined.empty()) joined += ',';
                    joined += v.get<std::string>();
                }
                values[key] = joined;
            } else values[key] = value.dump();
        }
    }
    for (const auto& [key, value] : overrides) values[key] = value;

    for (const auto& [key, value] : values) {
        try {
            if (key == "cache_dir") config.cache_dir = value;
            else if (key == "user_agent") config.user_agent = value;
            else if (key == "rate_limit") config.rate_limit = std::stod(value);
            else if (key == "horizon_days") config.horizon_days = std::stoi(value);
            else if (key == "min_mda_words") config.min_mda_words = std::stoul(value);
            else if (key == "train_fraction") config.train_fraction = std::stod(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "cutoff") config.cutoff = std::stod(value);
            else if (key == "lexicon_paths") {
                config.lexicon_paths.clear();
                for (auto& p : split_char(value, ','))
                    if (!p.empty()) config.lexicon_paths.push_back(p);
            } else throw ConfigError(key);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(key);
        }
    }
    if (const char* env = std::getenv("MDA_CACHE_DIR")) config.cache_dir = env;

    if (config.rate_limit <= 0.0) throw ConfigError("rate_limit");
    if (config.horizon_days <= 0) throw ConfigError("horizon_days");
    if (config.min_mda_words == 0) throw ConfigError("min_mda_words");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw ConfigError("train_fraction");
    if (!(config.cutoff > 0.0 && config.cutoff < 1.0)) throw ConfigError("cutoff");
    return config;
}

std::string config_json(const PipelineConfig& config) {
    nlohmann::ordered_json j;
    j["cache_dir"] = config.cache_dir.string();
    j["user_agent"] = config.user_agent;
    j["rate_limit"] = config.rate_limit;
    j["horizon_days"] = config.horizon_days;
    j["min_mda_words"] = config.min_mda_words;
    j["train_fraction"] = config.train_fraction;
    j["seed"] = config.seed;
    j["cutoff"] = config.cutoff;
    j["lexicon_paths"] = config.lexicon_paths;
    return j.dump(2) + "\n";
}

void echo_config(const PipelineConfig& config) {
    ingest::atomic_write(config.cache_dir / "effective_config.json",
                         config_json(config));
}

// ---------------------------------------------------------------------------

std::string filings_csv(const std::vector<ingest::FilingRecord>& records) {
    std::ostringstream out;
    out << "cik,company_name,form_type,date_filed,path\n";
    for (const auto& r : records) {
        std::string name = r.company_name;
        std::replace(name.begin(), name.end(), ',', ' ');
        out << r.cik << ',' << name << ',' << r.form_type << ','
            << ingest::format_date(r.date_filed) << ',' << r.path << '\n';
    }
    return out.str();
}

std::vector<ingest::FilingRecord> read_filings_csv(const fs::path& file) {
    std::vector<ingest::FilingRecord> records;
    std::istringstream in(read_file(file));
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++row;
        if (row == 1 || line.empty()) continue;
        auto fields = split_char(line, ',');
        if (fields.size() != 5)
            throw ParseError(file.string() + " row " + std::to_string(row));
        records.push_back(ingest::FilingRecord{
            std::stoll(fields[0]), fields[1], fields[2],
            ingest::parse_date(fields[3]), fields[4]});
    }
    return records;
}

std::string feature_csv(const std::vector<std::string>& category_names,
                        const std::vector<FeatureCsvRow>& rows) {
    std::ostringstream out;
    out << "cik,accession,label,wc,wps,sixltr,allpunc";
    for (const auto& c : category_names) out << ',' << c;
    out << '\n';
    for (const auto& r : rows) {
        out << r.key.cik << ',' << r.key.accession << ',' << r.label << ','
            << r.features.wc << ',' << fixed4(r.features.wps) << ','
            << fixed4(r.features.sixltr) << ',' << fixed4(r.features.allpunc);
        for (double p : r.features.category_percent) out << ',' << fixed4(p);
        out << '\n';
    }
    return out.str();
}

std::vector<dataset::FeatureRow> read_feature_csv(const fs::path& file,
                                                  std::vector<int>* labels) {
    std::vector<dataset::FeatureRow> rows;
    std::istringstream in(read_file(file));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(file.string() + ": empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_char(line, ',');
    if (header.size() < 7 || header[0] != "cik" || header[1] != "accession" ||
        header[2] != "label")
        throw ParseError(file.string() + ": unexpected header");
    std::vector<std::string> feature_names(header.begin() + 3, header.end());

    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++row_no;
        if (line.empty()) continue;
        auto fields = split_char(line, ',');
        if (fields.size() != header.size())
            throw ParseError(file.string() + " row " + std::to_string(row_no));
        dataset::FeatureRow row;
        row.key.cik = std::stoll(fields[0]);
        row.key.accession = fields[1];
        row.feature_names = feature_names;
        for (std::size_t i = 3; i < fields.size(); ++i)
            row.values.push_back(parse_double_field(
                fields[i], file.string() + " row " + std::to_string(row_no)));
        if (labels) labels->push_back(std::stoi(fields[2]));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string dataset_csv(const dataset::Dataset& data) {
    std::ostringstream out;
    out << "cik,accession,label";
    for (const auto& f : data.feature_names) out << ',' << f;
    out << '\n';
    for (const auto& s : data.samples) {
        out << s.key.cik << ',' << s.key.accession << ',' << s.label;
        for (std::size_t i = 0; i < s.features.size(); ++i) {
            // wc stays integral; everything else fixed 4-decimal
            if (data.feature_names[i] == "wc")
                out << ',' << static_cast<long long>(std::llround(s.features[i]));
            else
                out << ',' << fixed4(s.features[i]);
        }
        out << '\n';
    }
    return out.str();
}

dataset::Dataset read_dataset_csv(const fs::path& file) {
    std::vector<int> labels;
    auto rows = read_feature_csv(file, &labels);
    dataset::Dataset data;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (data.feature_names.empty()) data.feature_names = rows[i].feature_names;
        data.samples.push_back(
            dataset::LabeledSample{rows[i].key, rows[i].values, labels[i]});
    }
    return data;
}

// ---------------------------------------------------------------------------

const std::map<std::string, std::vector<std::string>>& model_specs() {
    static const std::vector<std::string> stress = {"debt", "distress",
                                                    "restructure", "healthy"};
    static const std::vector<std::string> lm = {"negative", "positive",
                                                "uncertainty"};
    static const std::vector<std::string> liwc = {
        "wps",       "wc",       "sixltr",      "dic",          "function.",
        "affect",    "social",   "cogproc",     "percept",      "bio",
        "drives",    "relativ",  "allpunc",     "focuspast",    "focuspresent",
        "focusfuture", "anger",  "posemo",      "negemo"};
    static const std::map<std::string, std::vector<std::string>> specs = [] {
        auto join = [](std::initializer_list<const std::vector<std::string>*> parts) {
            std::vector<std::string> out;
            for (auto* p : parts) out.insert(out.end(), p->begin(), p->end());
            return out;
        };
        std::map<std::string, std::vector<std::string>> m;
        m["stress"] = stress;
        m["lm"] = lm;
        m["liwc"] = liwc;
        m["liwc_stress"] = join({&liwc, &stress});
        m["lm_stress"] = join({&lm, &stress});
        m["liwc_lm_stress"] = join({&liwc, &lm, &stress});
        return m;
    }();
    return specs;
}

std::vector<std::string> resolve_model_features(const std::string& model_name,
                                                const dataset::Dataset& data) {
    auto it = model_specs().find(model_name);
    if (it == model_specs().end())
        throw ConfigError("unknown model '" + model_name + "'");
    for (const auto& f : it->second)
        if (std::find(data.feature_names.begin(), data.feature_names.end(), f) ==
            data.feature_names.end())
            throw SchemaMismatch("model '" + model_name + "' needs feature '" + f +
                                 "' (supply the matching lexicon file)");
    return it->second;
}

std::vector<lexicon::Lexicon> load_lexicons(const PipelineConfig& config) {
    std::vector<lexicon::Lexicon> lexicons{lexicon::stress_lexicon()};
    for (const auto& path : config.lexicon_paths)
        lexicons.push_back(
            lexicon::parse_lexicon(read_file(path), fs::path(path).stem().string()));
    return lexicons;
}

// ---------------------------------------------------------------------------

std::string stage_index(const PipelineConfig& config, const fs::path& index_file,
                        const std::string& form_type) {
    auto result = ingest::parse_master_index(read_file(index_file), form_type);
    ingest::atomic_write(config.cache_dir / "filings.csv",
                         filings_csv(result.records));
    std::ostringstream out;
    out << "index: " << result.records.size() << " filings ("
        << result.header_lines << " header, " << result.skipped_lines
        << " skipped of " << result.total_lines << " lines) -> filings.csv";
    return out.str();
}

std::string stage_fetch(const PipelineConfig& config, ingest::Transport& transport,
                        ingest::Clock& clock) {
    auto records = read_filings_csv(config.cache_dir / "filings.csv");
    ingest::FetchOptions options;
    options.rate_limit = config.rate_limit;
    ingest::FilingFetcher fetcher(config.cache_dir, options, transport, clock);
    std::size_t fetched = 0, failed = 0;
    for (const auto& r : records) {
        try {
            fetcher.fetch(r);
            ++fetched;
        } catch (const Error& e) {
            ++failed;
            std::fprintf(stderr, "fetch: %s\n", e.what());
        }
    }
    std::ostringstream out;
    out << "fetch: " << fetched << " ok, " << failed << " failed -> raw/";
    return out.str();
}

std::string stage_clean(const PipelineConfig& config) {
    std::size_t cleaned = 0, empty = 0;
    for (const auto& file : stage_files(config.cache_dir / "raw")) {
        auto key = key_from_stage_path(file);
        ingest::RawFiling raw;
        raw.record.cik = key.cik;
        raw.record.path = file.string();
        raw.body = read_file(file);
        raw.byte_length = raw.body.size();
        try {
            auto clean = textprep::strip_markup(raw);
            ingest::atomic_write(config.cache_dir / "clean" /
                                     std::to_string(key.cik) / (key.accession + ".txt"),
                                 clean.text);
            std::fprintf(stderr, "clean: %s removed_fraction=%.3f\n",
                         key.accession.c_str(), clean.removed_fraction);
            ++cleaned;
        } catch (const EmptyAfterClean&) {
            ++empty;
            std::fprintf(stderr, "clean: EmptyAfterClean %s\n", key.accession.c_str());
        }
    }
    std::ostringstream out;
    out << "clean: " << cleaned << " cleaned, " << empty << " empty -> clean/";
    return out.str();
}

std::string stage_extract_mda(const PipelineConfig& config) {
    std::size_t extracted = 0, too_short = 0, not_found = 0, by_reference = 0;
    for (const auto& file : stage_files(config.cache_dir / "clean")) {
        auto key = key_from_stage_path(file);
        textprep::CleanFiling clean;
        clean.record.cik = key.cik;
        clean.record.path = file.string();
        clean.text = read_file(file);
        try {
            auto mda = textprep::extract_mda(clean, config.min_mda_words);
            ingest::atomic_write(config.cache_dir / "mda" / std::to_string(key.cik) /
                                     (key.accession + ".txt"),
                                 mda.text);
            ++extracted;
        } catch (const TooShort& e) {
            ++too_short;
            std::fprintf(stderr, "extract-mda: TooShort %s\n", e.what());
        } catch (const SectionNotFound& e) {
            ++not_found;
            std::fprintf(stderr, "extract-mda: SectionNotFound %s\n", e.what());
        } catch (const IncorporatedByReference& e) {
            ++by_reference;
            std::fprintf(stderr, "extract-mda: IncorporatedByReference %s\n", e.what());
        }
    }
    std::ostringstream out;
    out << "extract-mda: " << extracted << " extracted, " << too_short
        << " TooShort, " << not_found << " SectionNotFound, " << by_reference
        << " IncorporatedByReference -> mda/";
    return out.str();
}

std::string stage_featurize(const PipelineConfig& config) {
    auto lexicons = load_lexicons(config);
    std::vector<FeatureCsvRow> rows;
    std::vector<std::string> category_names;
    for (const auto& file : stage_files(config.cache_dir / "mda")) {
        FeatureCsvRow row;
        row.key = key_from_stage_path(file);
        row.features = lexicon::featurize_text(read_file(file), lexicons);
        if (category_names.empty()) category_names = row.features.category_names;
        rows.push_back(std::move(row));
    }
    ingest::atomic_write(config.cache_dir / "features.csv",
                         feature_csv(category_names, rows));
    std::ostringstream out;
    out << "featurize: " << rows.size() << " documents, "
        << category_names.size() << " categories -> features.csv";
    return out.str();
}

std::string stage_assemble(const PipelineConfig& config, const fs::path& events_file,
                           const std::optional<fs::path>& universe_file) {
    auto features = read_feature_csv(config.cache_dir / "features.csv");
    auto filings = read_filings_csv(config.cache_dir / "filings.csv");
    auto events = ingest::load_bankruptcy_labels(read_file(events_file));
    auto labeled = ingest::label_filings(filings, events, config.horizon_days);

    std::vector<std::pair<dataset::SampleKey, int>> labels;
    for (const auto& [record, label] : labeled)
        labels.emplace_back(dataset::SampleKey{record.cik, record.accession()},
                            label.value);

    std::set<dataset::SampleKey> universe;
    if (universe_file) {
        std::istringstream in(read_file(*universe_file));
        std::string line;
        std::size_t row = 0;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            ++row;
            if (row == 1 || line.empty()) continue;
            auto fields = split_char(line, ',');
            if (fields.size() != 2)
                throw ParseError(universe_file->string() + " row " +
                                 std::to_string(row));
            universe.insert({std::stoll(fields[0]), fields[1]});
        }
    }

    auto result = dataset::assemble(features, labels,
                                    universe_file ? &universe : nullptr);
    ingest::atomic_write(config.cache_dir / "dataset.csv",
                         dataset_csv(result.data));
    std::ostringstream out;
    out << "assemble: " << result.data.samples.size() << " samples ("
        << result.data.count_label(1) << " positive), " << result.dropped
        << " dropped -> dataset.csv";
    return out.str();
}

std::string stage_split(const PipelineConfig& config, bool balance) {
    auto data = read_dataset_csv(config.cache_dir / "dataset.csv");
    if (balance) data = dataset::balanced_sample(data, config.seed);
    auto [train, test] =
        dataset::train_test_split(data, config.train_fraction, config.seed);
    ingest::atomic_write(config.cache_dir / "train.csv", dataset_csv(train));
    ingest::atomic_write(config.cache_dir / "test.csv", dataset_csv(test));
    std::ostringstream out;
    out << "split: " << train.samples.size() << " train / " << test.samples.size()
        << " test (balanced=" << (balance ? "yes" : "no") << ", seed="
        << config.seed << ")";
    return out.str();
}

std::string stage_train(const PipelineConfig& config, const std::string& model_name) {
    auto train = read_dataset_csv(config.cache_dir / "train.csv");
    auto features = resolve_model_features(model_name, train);
    auto design = glm::make_design(train, features);
    auto model = glm::fit(design, glm::labels_vector(train));
    ingest::atomic_write(config.cache_dir / "models" / (model_name + ".json"),
                         glm::serialize_model(model));

    std::ostringstream coef;
    coef << "name,coefficient,se,z,p_value,ci_low,ci_high,odds_ratio\n";
    for (const auto& row : glm::wald_inference(model)) {
        char buf[320];
        std::snprintf(buf, sizeof buf,
                      "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      row.name.c_str(), row.coefficient, row.se, row.z, row.p_value,
                      row.ci_low, row.ci_high, row.odds_ratio);
        coef << buf;
    }
    ingest::atomic_write(
        config.cache_dir / "models" / (model_name + "_coefficients.csv"),
        coef.str());
    std::ostringstream out;
    out << "train: model " << model_name << " LL=" << model.log_likelihood
        << " AIC=" << model.aic << " BIC=" << model.bic << " iters="
        << model.iterations << " -> models/" << model_name << ".json";
    return out.str();
}

namespace {

eval::ModelEval evaluate_on(const glm::FittedLogit& model,
                            const dataset::Dataset& data, double cutoff) {
    auto design = glm::make_design(data, model.feature_names);
    Eigen::VectorXd p = glm::predict_prob(model, design);
    std::vector<double> probs(p.data(), p.data() + p.size());
    std::vector<int> y;
    for (const auto& s : data.samples) y.push_back(s.label);
    eval::ModelEval ev;
    ev.metrics = eval::confusion(y, probs, cutoff);
    ev.roc = eval::roc(y, probs);
    return ev;
}

}  // namespace

std::string stage_evaluate(const PipelineConfig& config,
                           const std::string& model_name) {
    auto model = glm::deserialize_model(
        read_file(config.cache_dir / "models" / (model_name + ".json")));
    auto test = read_dataset_csv(config.cache_dir / "test.csv");
    auto ev = evaluate_on(model, test, config.cutoff);
    ingest::atomic_write(config.cache_dir / ("roc_" + model_name + ".csv"),
                         eval::roc_csv(ev.roc));

    nlohmann::ordered_json j;
    j["model"] = model_name;
    j["cutoff"] = config.cutoff;
    j["tp"] = ev.metrics.matrix.tp;
    j["fp"] = ev.metrics.matrix.fp;
    j["tn"] = ev.metrics.matrix.tn;
    j["fn"] = ev.metrics.matrix.fn;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
        else j[key] = nullptr;
    };
    put("accuracy", ev.metrics.accuracy);
    put("misclassification", ev.metrics.misclassification);
    put("sensitivity", ev.metrics.sensitivity);
    put("specificity", ev.metrics.specificity);
    put("prevalence", ev.metrics.prevalence);
    j["auc"] = ev.roc.auc_trapezoid;
    ingest::atomic_write(config.cache_dir / ("eval_" + model_name + ".json"),
                         j.dump(2) + "\n");
    std::ostringstream out;
    out << "evaluate: " << model_name << " AUC=" << ev.roc.auc_trapezoid
        << " -> roc_" << model_name << ".csv";
    return out.str();
}

std::string stage_compare(const PipelineConfig& config,
                          const std::vector<std::string>& model_names) {
    auto train = read_dataset_csv(config.cache_dir / "train.csv");
    auto test = read_dataset_csv(config.cache_dir / "test.csv");
    std::vector<std::tuple<std::string, glm::FittedLogit, eval::ModelEval,
                           eval::ModelEval>>
        models;
    for (const auto& name : model_names) {
        auto model = glm::deserialize_model(
            read_file(config.cache_dir / "models" / (name + ".json")));
        models.emplace_back(name, model, evaluate_on(model, train, config.cutoff),
                            evaluate_on(model, test, config.cutoff));
    }
    auto rows = eval::compare_models(models);
    ingest::atomic_write(config.cache_dir / "comparison.csv",
                         eval::comparison_csv(rows));
    ingest::atomic_write(config.cache_dir / "comparison.txt",
                         eval::comparison_text(rows));
    std::ostringstream out;
    out << "compare: " << rows.size() << " models -> comparison.csv";
    return out.str();
}

std::string stage_ttest(const PipelineConfig& config) {
    auto data = read_dataset_csv(config.cache_dir / "dataset.csv");
    std::ostringstream csv;
    csv << "feature,t,df,p_value,mean_bankrupt,mean_healthy,sd_bankrupt,sd_healthy\n";
    std::size_t tested = 0;
    for (std::size_t f = 0; f < data.feature_names.size(); ++f) {
        std::vector<double> pos, neg;
        for (const auto& s : data.samples)
            (s.label == 1 ? pos : neg).push_back(s.features.at(f));
        csv << data.feature_names[f];
        if (pos.size() < 2 || neg.size() < 2) {
            csv << ",NA,NA,NA,NA,NA,NA,NA\n";
            continue;
        }
        try {
            auto r = eval::welch_t_test(pos, neg);
            char buf[256];
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          r.t, r.df, r.p_value, r.mean_a, r.mean_b, r.sd_a, r.sd_b);
            csv << buf;
            ++tested;
        } catch (const Degenerate&) {
            csv << ",NA,NA,NA,NA,NA,NA,NA\n";
        }
    }
    ingest::atomic_write(config.cache_dir / "ttest.csv", csv.str());
    std::ostringstream out;
    out << "ttest: " << tested << " features -> ttest.csv";
    return out.str();
}

std::string stage_trend(const PipelineConfig& config, const fs::path& events_file,
                        const std::optional<std::string>& reference_date) {
    auto data = read_dataset_csv(config.cache_dir / "dataset.csv");
    auto filings = read_filings_csv(config.cache_dir / "filings.csv");
    auto events = ingest::load_bankruptcy_labels(read_file(events_file));

    std::map<dataset::SampleKey, ingest::Date> filed;
    for (const auto& f : filings)
        filed[{f.cik, f.accession()}] = f.date_filed;
    std::multimap<std::int64_t, ingest::Date> event_dates;
    ingest::Date latest_event{};
    bool have_event = false;
    for (const auto& e : events) {
        event_dates.emplace(e.cik, e.filing_date);
        if (!have_event || ingest::days_between(latest_event, e.filing_date) > 0)
            latest_event = e.filing_date;
        have_event = true;
    }
    ingest::Date reference =
        reference_date ? ingest::parse_date(*reference_date) : latest_event;

    // Category columns follow the four base measurements in the schema.
    std::vector<std::string> categories(data.feature_names.begin() + 4,
                                        data.feature_names.end());
    std::vector<eval::CohortSample> samples;
    std::size_t skipped = 0;
    for (const auto& s : data.samples) {
        auto it = filed.find(s.key);
        if (it == filed.end()) {
            ++skipped;
            continue;
        }
        long days = -1;
        if (s.label == 1) {
            auto [lo, hi] = event_dates.equal_range(s.key.cik);
            for (auto e = lo; e != hi; ++e) {
                long d = ingest::days_between(it->second, e->second);
                if (d > 0 && (days < 0 || d < days)) days = d;
            }
        } else if (have_event || reference_date) {
            days = ingest::days_between(it->second, reference);
        }
        if (days < 0) {
            ++skipped;
            continue;
        }
        int years = static_cast<int>(days / 365);
        if (years > 5) {
            ++skipped;
            continue;
        }
        eval::CohortSample cs;
        cs.years_before = years;
        cs.label = s.label;
        cs.features.category_names = categories;
        cs.features.category_percent.assign(s.features.begin() + 4, s.features.end());
        samples.push_back(std::move(cs));
    }
    auto trend = eval::cohort_trend(samples);

    std::ostringstream csv;
    csv << "label,years_before,count";
    for (const auto& c : trend.category_names) csv << ',' << c;
    csv << '\n';
    for (const auto& cell : trend.cells) {
        csv << cell.label << ',' << cell.years_before << ',' << cell.count;
        for (const auto& m : cell.mean_percent)
            csv << ',' << (m ? fixed4(*m) : "NA");
        csv << '\n';
    }
    ingest::atomic_write(config.cache_dir / "trend.csv", csv.str());
    std::ostringstream out;
    out << "trend: " << samples.size() << " samples in cohort grid, " << skipped
        << " outside -> trend.csv";
    return out.str();
}

std::string stage_report(const PipelineConfig& config) {
    fs::path report = config.cache_dir / "report";
    fs::create_directories(report);
    std::size_t copied = 0;
    auto copy_if_present = [&](const fs::path& p) {
        if (fs::exists(p)) {
            fs::copy_file(p, report / p.filename(), fs::copy_options::overwrite_existing);
            ++copied;
        }
    };
    copy_if_present(config.cache_dir / "comparison.csv");
    copy_if_present(config.cache_dir / "comparison.txt");
    copy_if_present(config.cache_dir / "ttest.csv");
    copy_if_present(config.cache_dir / "trend.csv");
    copy_if_present(config.cache_dir / "effective_config.json");
    if (fs::exists(config.cache_dir))
        for (const auto& entry : fs::directory_iterator(config.cache_dir))
            if (entry.is_regular_file() &&
                entry.path().filename().string().rfind("roc_", 0) == 0)
                copy_if_present(entry.path());
    std::ostringstream out;
    out << "report: " << copied << " artifacts -> report/";
    return out.str();
}

}  // namespace mda::pipeline
