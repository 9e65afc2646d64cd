// vbs: viewpoint-based summarization of ranked term descriptions.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vbs/vbs.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

fs::path data_dir() {
    if (const char* env = std::getenv("VBS_DATA_DIR"); env && *env) return env;
#ifdef VBS_DEFAULT_DATA_DIR
    return VBS_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

/// Settings shared by every subcommand. Flags override the config file,
/// which overrides the defaults below.
struct Settings {
    std::string patterns = (data_dir() / "patterns_en.jsonl").string();
    std::string segmenter; // empty: built-in English rules
    std::size_t top = 50;
    std::size_t reps = 1;
    std::size_t misc_count = 5;
    std::string weights = "0.5,0.3,0.2";
    bool allow_any_weights = false;
    double lead_threshold = 0.5;
    std::uint64_t seed = 0;
    std::string taxonomy;
};

std::string resolve(const fs::path& base, const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (base / p).string();
}

void apply_config_file(const fs::path& path, Settings& s) {
    std::ifstream in(path);
    if (!in) throw vbs::ConfigError("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        const auto base = path.parent_path();
        for (const auto& [key, value] : j.items()) {
            if (key == "patterns") s.patterns = resolve(base, value.get<std::string>());
            else if (key == "segmenter") s.segmenter = resolve(base, value.get<std::string>());
            else if (key == "taxonomy") s.taxonomy = resolve(base, value.get<std::string>());
            else if (key == "top") s.top = value.get<std::size_t>();
            else if (key == "reps") s.reps = value.get<std::size_t>();
            else if (key == "misc_count") s.misc_count = value.get<std::size_t>();
            else if (key == "allow_any_weights") s.allow_any_weights = value.get<bool>();
            else if (key == "lead_threshold") s.lead_threshold = value.get<double>();
            else if (key == "seed") s.seed = value.get<std::uint64_t>();
            else if (key == "weights") {
                if (value.is_string()) {
                    s.weights = value.get<std::string>();
                } else {
                    const auto w = value.get<std::vector<double>>();
                    if (w.size() != 3) throw vbs::ConfigError("config: weights needs three values");
                    std::ostringstream os;
                    os.precision(17);
                    os << w[0] << ',' << w[1] << ',' << w[2];
                    s.weights = os.str();
                }
            } else {
                throw vbs::ConfigError("config: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw vbs::ConfigError("config file " + path.string() + ": " + e.what());
    }
}

vbs::PipelineConfig make_pipeline(const Settings& s) {
    vbs::PipelineConfig cfg;
    cfg.top_k = s.top;
    cfg.selection.reps_per_group = s.reps;
    cfg.selection.misc_count = s.misc_count;
    cfg.selection.weights = vbs::ScoreWeights::parse(s.weights);
    cfg.selection.allow_any_weights = s.allow_any_weights;
    cfg.seed = s.seed;
    cfg.selection.validate();
    if (s.top < 1) throw vbs::ConfigError("--top must be at least 1");
    if (!s.segmenter.empty()) {
        cfg.segmenter = vbs::load_segmenter_config(s.segmenter);
        cfg.segmenter_source = fs::path(s.segmenter).filename().string();
    } else {
        cfg.segmenter_source = "builtin:en";
    }
    cfg.patterns = vbs::load_patterns(s.patterns);
    cfg.patterns_source = fs::path(s.patterns).filename().string();
    return cfg;
}

/// Writes to stdout, or atomically to `path` via a sibling temp file.
void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw vbs::DataError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw vbs::DataError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::vector<fs::path> jsonl_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw vbs::DataError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<vbs::TermInput> load_eval_inputs(const std::string& corpus_dir, const std::string& gold_dir,
                                             const vbs::Taxonomy& taxonomy) {
    std::map<std::string, std::vector<vbs::AnnotationSet>> gold;
    for (const auto& f : jsonl_files(gold_dir)) {
        auto set = vbs::load_annotations(f, taxonomy);
        gold[set.term].push_back(std::move(set));
    }
    std::vector<vbs::TermInput> inputs;
    for (const auto& f : jsonl_files(corpus_dir)) {
        vbs::TermInput in;
        in.corpus = vbs::load_corpus(f);
        const auto it = gold.find(in.corpus.term.surface);
        if (it == gold.end()) throw vbs::DataError("missing gold annotations for term '" + in.corpus.term.surface + "'");
        in.gold = it->second;
        std::sort(in.gold.begin(), in.gold.end(), [](const auto& a, const auto& b) { return a.annotator_id < b.annotator_id; });
        inputs.push_back(std::move(in));
    }
    if (inputs.empty()) throw vbs::DataError("no corpus files in " + corpus_dir);
    return inputs;
}

std::vector<std::size_t> parse_reps_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            std::size_t used = 0;
            const long v = std::stol(part, &used);
            if (used != part.size() || v < 1) throw std::invalid_argument(part);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw vbs::ConfigError("--reps: cannot parse '" + part + "'");
        }
    }
    if (out.empty()) throw vbs::ConfigError("--reps: empty list");
    return out;
}

std::string file_stem_for(const std::string& term) {
    std::string out;
    for (char c : term) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? vbs::text::ascii_lower(c) : '_');
    return out;
}

std::string saturation_report(const std::vector<vbs::SaturationResult>& results) {
    std::ostringstream out;
    out << "term\tannotator\tparagraphs_to_saturation\ttotal_paragraphs\n";
    double sum = 0;
    for (const auto& r : results) {
        out << r.term << '\t' << r.annotator << '\t' << r.paragraphs << '\t' << r.total_paragraphs << '\n';
        sum += static_cast<double>(r.paragraphs);
    }
    out << std::fixed << std::setprecision(2) << "mean\t-\t" << (results.empty() ? 0.0 : sum / results.size()) << "\t-\n";
    return out.str();
}

int run(int argc, char** argv) {
    CLI::App app{"Viewpoint-based summarization of ranked term descriptions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "vbs 1.0.0");

    Settings s;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (default: $VBS_CONFIG)");

    // Shared pipeline flags, registered per subcommand.
    std::map<std::string, CLI::Option*> flags;
    const auto add_pipeline_flags = [&](CLI::App* sub, bool with_reps) {
        const std::string name = sub->get_name();
        flags[name + ":patterns"] = sub->add_option("--patterns", s.patterns, "pattern file (JSONL)");
        flags[name + ":segmenter"] = sub->add_option("--segmenter", s.segmenter, "segmenter rule file (JSON)");
        flags[name + ":top"] = sub->add_option("--top", s.top, "use the top-k paragraphs")->check(CLI::PositiveNumber);
        if (with_reps)
            flags[name + ":reps"] = sub->add_option("--reps", s.reps, "representatives per viewpoint group")
                                        ->check(CLI::PositiveNumber);
        flags[name + ":misc"] = sub->add_option("--misc-count", s.misc_count, "sentences from the miscellaneous group");
        flags[name + ":weights"] = sub->add_option("--weights", s.weights, "W,R,C weights, e.g. 0.5,0.3,0.2");
        flags[name + ":any"] = sub->add_flag("--allow-any-weights", s.allow_any_weights, "skip the W>R>C check");
        flags[name + ":seed"] = sub->add_option("--seed", s.seed, "recorded in outputs; the pipeline is deterministic");
    };

    std::string corpus, out_path, format = "text", dump_groups;
    auto* summarize = app.add_subcommand("summarize", "summarize one term corpus");
    summarize->add_option("--corpus", corpus, "corpus file (JSONL)")->required();
    summarize->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    summarize->add_option("--out", out_path, "output file (default stdout)");
    summarize->add_option("--dump-groups", dump_groups, "also write viewpoint groups as JSON to this file");
    add_pipeline_flags(summarize, true);

    std::size_t lead_chars = 0;
    auto* lead = app.add_subcommand("lead", "lead baseline: the first N characters");
    lead->add_option("--corpus", corpus, "corpus file (JSONL)")->required();
    lead->add_option("--chars", lead_chars, "character budget")->required()->check(CLI::PositiveNumber);
    lead->add_option("--top", s.top, "use the top-k paragraphs")->check(CLI::PositiveNumber);
    lead->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    lead->add_option("--out", out_path, "output file (default stdout)");

    std::string corpus_dir, gold_dir, reps_list = "1,2,3";
    bool saturation_flag = false;
    bool sequential = false;
    auto* eval = app.add_subcommand("eval", "VBS vs lead coverage experiment");
    eval->add_option("--corpus-dir", corpus_dir, "directory of corpus files")->required();
    eval->add_option("--gold-dir", gold_dir, "directory of annotation files")->required();
    eval->add_option("--reps", reps_list, "comma-separated reps values");
    eval->add_option("--format", format, "tsv, table or json")->check(CLI::IsMember({"text", "tsv", "table", "json"}));
    eval->add_option("--lead-threshold", s.lead_threshold, "span fraction for a lead sentence to count")
        ->check(CLI::Range(0.0, 1.0));
    eval->add_option("--taxonomy", s.taxonomy, "label taxonomy file (JSON)");
    eval->add_flag("--viewpoint-saturation", saturation_flag, "append the viewpoint saturation analysis");
    eval->add_flag("--sequential", sequential, "evaluate terms one at a time");
    eval->add_option("--out", out_path, "output file (default stdout)");
    add_pipeline_flags(eval, false);

    auto* check = app.add_subcommand("patterns-check", "validate a pattern file and report per-viewpoint counts");
    check->add_option("--patterns", s.patterns, "pattern file (JSONL)");

    auto* groups = app.add_subcommand("dump-groups", "print the viewpoint groups of a corpus as JSON");
    groups->add_option("--corpus", corpus, "corpus file (JSONL)")->required();
    groups->add_option("--out", out_path, "output file (default stdout)");
    add_pipeline_flags(groups, false);

    auto* saturation = app.add_subcommand("saturation", "paragraphs needed to see every annotated viewpoint");
    saturation->add_option("--corpus-dir", corpus_dir, "directory of corpus files")->required();
    saturation->add_option("--gold-dir", gold_dir, "directory of annotation files")->required();
    saturation->add_option("--top", s.top, "use the top-k paragraphs")->check(CLI::PositiveNumber);
    saturation->add_option("--segmenter", s.segmenter, "segmenter rule file (JSON)");
    saturation->add_option("--taxonomy", s.taxonomy, "label taxonomy file (JSON)");

    std::string synth_dir;
    vbs::synthetic::Options synth_opts;
    auto* synth = app.add_subcommand("synth", "write the synthetic benchmark (corpora + gold)");
    synth->add_option("--out-dir", synth_dir, "output directory")->required();
    synth->add_option("--terms", synth_opts.terms, "number of terms")->check(CLI::Range(1, 1000));
    synth->add_option("--paragraphs", synth_opts.paragraphs, "paragraphs per term")->check(CLI::Range(1, 10000));
    synth->add_option("--seed", synth_opts.seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    // Config file values are applied beneath explicitly given flags.
    if (config_path.empty())
        if (const char* env = std::getenv("VBS_CONFIG"); env && *env) config_path = env;
    if (!config_path.empty()) {
        Settings from_file;
        apply_config_file(config_path, from_file);
        const auto given = [&](const char* key) {
            for (const auto& [name, opt] : flags)
                if (name.ends_with(std::string(":") + key) && opt->count() > 0) return true;
            return false;
        };
        const auto sub_given = [&](const char* opt_name) {
            for (auto* sub : app.get_subcommands())
                for (auto* opt : sub->get_options())
                    if (opt->check_lname(opt_name) && opt->count() > 0) return true;
            return false;
        };
        if (!given("patterns") && !sub_given("patterns")) s.patterns = from_file.patterns;
        if (!given("segmenter") && !sub_given("segmenter")) s.segmenter = from_file.segmenter;
        if (!given("top") && !sub_given("top")) s.top = from_file.top;
        if (!given("reps")) s.reps = from_file.reps;
        if (!given("misc")) s.misc_count = from_file.misc_count;
        if (!given("weights")) s.weights = from_file.weights;
        if (!given("any")) s.allow_any_weights = s.allow_any_weights || from_file.allow_any_weights;
        if (!given("seed")) s.seed = from_file.seed;
        if (!sub_given("lead-threshold")) s.lead_threshold = from_file.lead_threshold;
        if (!sub_given("taxonomy")) s.taxonomy = from_file.taxonomy;
    }

    if (summarize->parsed()) {
        const auto cfg = make_pipeline(s);
        const auto trace = vbs::summarize_traced(vbs::load_corpus(corpus), cfg);
        if (!dump_groups.empty())
            write_output(dump_groups, vbs::groups_to_json(trace.groups, trace.summary.term).dump(2) + "\n");
        write_output(out_path, vbs::render(trace.summary, format == "json" ? vbs::RenderFormat::json
                                                                            : vbs::RenderFormat::text));
        return 0;
    }
    if (lead->parsed()) {
        const auto top = vbs::take_top(vbs::load_corpus(corpus), s.top);
        auto summary = vbs::lead_baseline(top, lead_chars);
        summary.config_echo["top"] = s.top;
        write_output(out_path, vbs::render(summary, format == "json" ? vbs::RenderFormat::json : vbs::RenderFormat::text));
        return 0;
    }
    if (eval->parsed()) {
        vbs::ExperimentConfig cfg;
        cfg.pipeline = make_pipeline(s);
        cfg.reps = parse_reps_list(reps_list);
        cfg.lead_threshold = s.lead_threshold;
        cfg.parallel = !sequential;
        if (!s.taxonomy.empty()) cfg.taxonomy = vbs::Taxonomy::load(s.taxonomy);
        const auto inputs = load_eval_inputs(corpus_dir, gold_dir, cfg.taxonomy);
        const auto report = vbs::run_experiment(inputs, cfg);
        std::string text;
        if (format == "json") {
            nlohmann::ordered_json j;
            j["config"] = report.config_echo;
            j["config"]["reps_list"] = cfg.reps;
            j["rows"] = nlohmann::ordered_json::array();
            for (const auto& row : report.rows) {
                nlohmann::ordered_json r;
                r["reps"] = row.reps;
                r["chars"] = row.chars;
                r["compression_pct"] = row.compression_pct;
                for (const auto& a : row.annotators)
                    r["coverage"][a.annotator] = {{"12_vbs", a.cov12_vbs}, {"12_lead", a.cov12_lead},
                                                  {"28_vbs", a.cov28_vbs}, {"28_lead", a.cov28_lead}};
                j["rows"].push_back(std::move(r));
            }
            text = j.dump(2) + "\n";
        } else if (format == "table") {
            text = report.to_table();
        } else {
            text = report.to_tsv();
        }
        if (saturation_flag) text += "\n" + saturation_report(vbs::viewpoint_saturation(inputs, cfg.pipeline, cfg.taxonomy));
        write_output(out_path, text);
        return 0;
    }
    if (check->parsed()) {
        const auto set = vbs::load_patterns(s.patterns);
        std::ostringstream out;
        out << "patterns\t" << set.size() << "\nversion\t" << (set.version().empty() ? "-" : set.version()) << '\n';
        std::size_t missing = 0;
        for (const auto& [v, n] : set.per_viewpoint_counts()) {
            out << vbs::to_string(v) << '\t' << n << '\n';
            if (n == 0) ++missing;
        }
        out << "uncovered_viewpoints\t" << missing << '\n';
        write_output("", out.str());
        return 0;
    }
    if (groups->parsed()) {
        const auto cfg = make_pipeline(s);
        const auto trace = vbs::summarize_traced(vbs::load_corpus(corpus), cfg);
        auto j = vbs::groups_to_json(trace.groups, trace.summary.term);
        j["config"] = cfg.echo();
        write_output(out_path, j.dump(2) + "\n");
        return 0;
    }
    if (saturation->parsed()) {
        vbs::PipelineConfig cfg;
        cfg.top_k = s.top;
        if (!s.segmenter.empty()) cfg.segmenter = vbs::load_segmenter_config(s.segmenter);
        const auto taxonomy = s.taxonomy.empty() ? vbs::Taxonomy::standard() : vbs::Taxonomy::load(s.taxonomy);
        const auto inputs = load_eval_inputs(corpus_dir, gold_dir, taxonomy);
        write_output("", saturation_report(vbs::viewpoint_saturation(inputs, cfg, taxonomy)));
        return 0;
    }
    if (synth->parsed()) {
        const auto inputs = vbs::synthetic::generate(synth_opts);
        fs::create_directories(fs::path(synth_dir) / "corpus");
        fs::create_directories(fs::path(synth_dir) / "gold");
        for (const auto& in : inputs) {
            const auto stem = file_stem_for(in.corpus.term.surface);
            write_output((fs::path(synth_dir) / "corpus" / (stem + ".jsonl")).string(), vbs::serialize_corpus(in.corpus));
            for (const auto& g : in.gold)
                write_output((fs::path(synth_dir) / "gold" / (stem + "." + g.annotator_id + ".jsonl")).string(),
                             vbs::serialize_annotations(g));
        }
        std::cout << "wrote " << inputs.size() << " terms to " << synth_dir << '\n';
        return 0;
    }
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const vbs::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const vbs::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
