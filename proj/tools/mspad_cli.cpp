// mspad: synthetic multispectral PAD benchmark tool.
//
// Subcommands: generate, train, score, evaluate, protocol, det.
// Exit codes: 0 success, 1 usage error, 2 data/runtime error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mspad/dataset.hpp"
#include "mspad/metrics.hpp"
#include "mspad/pipelines.hpp"
#include "mspad/protocol.hpp"
#include "mspad/synthgen.hpp"

namespace fs = std::filesystem;
using namespace mspad;

namespace {

struct CsvScores {
    std::vector<ScoredSample> samples;
    ScoreSet as_score_set() const {
        ScoreSet s;
        for (const auto& x : samples) {
            if (x.species == PAISpecies::Bonafide)
                s.bonafide_scores.push_back(x.score);
            else
                s.attack_scores.push_back(x.score);
        }
        return s;
    }
};

CsvScores read_scores_csv(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open score csv: " + path.string());
    CsvScores out;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("sample_id", 0) == 0) continue;  // header
        }
        std::istringstream ls(line);
        ScoredSample s;
        std::string species, score;
        if (!std::getline(ls, s.sample_id, ',') || !std::getline(ls, species, ',') || !std::getline(ls, score))
            throw std::runtime_error("malformed score csv line: " + line);
        s.species = species_from_name(species);
        s.score = std::stod(score);
        out.samples.push_back(std::move(s));
    }
    if (out.samples.empty()) throw std::runtime_error("empty score csv: " + path.string());
    return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot write: " + path.string());
        f << content;
    }
    fs::rename(tmp, path);
}

std::vector<LabeledCube> load_labeled(const DatasetManifest& manifest) {
    std::vector<LabeledCube> out;
    out.reserve(manifest.records.size());
    for (const auto& rec : manifest.records)
        out.push_back({load_cube(rec, manifest), rec.species == PAISpecies::Bonafide ? 1 : -1});
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multispectral face PAD benchmark: synthetic data, fusion pipelines, ISO-style metrics"};
    app.require_subcommand(1);

    std::string config_path, manifest_path, pipeline_path, scores_path, out_path, method_str = "score_fusion";
    std::string dump_fused_dir;
    int64_t seed = 42;
    bool seed_given = false;
    int repeats = 5, jobs = 1;
    double C = 1.0;
    bool normalize_scores = false;

    auto* gen = app.add_subcommand("generate", "Generate a seeded synthetic multispectral dataset");
    gen->add_option("--config", config_path, "GenConfig JSON (defaults used when omitted)");
    gen->add_option("--out", out_path, "Output directory")->required();
    gen->add_option("--seed", seed, "Generator seed override")->each([&](const std::string&) { seed_given = true; });

    auto* train = app.add_subcommand("train", "Train a PAD pipeline on a dataset");
    train->add_option("--data", manifest_path, "Dataset manifest.json")->required();
    train->add_option("--out", out_path, "Pipeline JSON output path")->required();
    train->add_option("--method", method_str, "score_fusion | image_fusion");
    train->add_option("--seed", seed, "Training seed");
    train->add_option("--c", C, "SVM regularization constant");

    auto* score = app.add_subcommand("score", "Score every sample of a dataset with a trained pipeline");
    score->add_option("--pipeline", pipeline_path, "Pipeline JSON")->required();
    score->add_option("--data", manifest_path, "Dataset manifest.json")->required();
    score->add_option("--out", out_path, "Score CSV output path")->required();
    score->add_option("--dump-fused", dump_fused_dir, "Directory for fused-image PGM dumps (image_fusion only)");

    auto* eval = app.add_subcommand("evaluate", "Compute APCER/BPCER/D-EER metrics from a score CSV");
    eval->add_option("--scores", scores_path, "Score CSV (sample_id,species,score)")->required();
    eval->add_option("--out", out_path, "EvalReport JSON output path")->required();

    auto* proto = app.add_subcommand("protocol", "Run the full leave-one-PAI-out protocol");
    proto->add_option("--data", manifest_path, "Dataset manifest.json")->required();
    proto->add_option("--out", out_path, "Output directory for report + per-run CSVs")->required();
    proto->add_option("--method", method_str, "score_fusion | image_fusion");
    proto->add_option("--seed", seed, "Protocol base seed");
    proto->add_option("--repeats", repeats, "Partition repetitions per held-out species");
    proto->add_option("--c", C, "SVM regularization constant");
    proto->add_option("--jobs", jobs, "Worker threads");
    proto->add_flag("--normalize-scores", normalize_scores, "Min-max normalize per-band scores on dev before summing");

    auto* det = app.add_subcommand("det", "Emit DET curve points from a score CSV");
    det->add_option("--scores", scores_path, "Score CSV")->required();
    det->add_option("--out", out_path, "DET point CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;  // usage text on stderr; 0 only for --help
    }

    try {
        if (gen->parsed()) {
            GenConfig cfg;
            if (!config_path.empty()) cfg = load_gen_config(config_path);
            if (seed_given || config_path.empty()) cfg.seed = seed;
            const DatasetManifest manifest = generate_dataset(cfg, out_path);
            const ValidationReport report = validate_manifest(manifest);
            for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
            std::cout << "generated " << manifest.records.size() << " records under " << out_path << " ("
                      << report.violations.size() << " violations)\n";
            if (!report.ok()) return 2;
        } else if (train->parsed()) {
            const DatasetManifest manifest = load_manifest(manifest_path);
            const auto data = load_labeled(manifest);
            if (method_from_name(method_str) == Method::ScoreFusion) {
                save_score_fusion(train_score_fusion(data, C, static_cast<uint64_t>(seed)), out_path);
            } else {
                save_image_fusion(train_image_fusion(data, FusionWeights::uniform(), C, static_cast<uint64_t>(seed)),
                                  out_path);
            }
            std::cout << "trained " << method_str << " pipeline on " << data.size() << " samples -> " << out_path
                      << "\n";
        } else if (score->parsed()) {
            const DatasetManifest manifest = load_manifest(manifest_path);
            // Probe the pipeline type from the serialized envelope.
            nlohmann::json env;
            {
                std::ifstream f(pipeline_path);
                if (!f) throw std::runtime_error("cannot open pipeline: " + pipeline_path);
                f >> env;
            }
            const Method m = method_from_name(env.at("method").get<std::string>());
            std::ostringstream csv;
            csv << "sample_id,species,score\n";
            csv << std::setprecision(17);
            if (m == Method::ScoreFusion) {
                const ScoreFusionPipeline p = load_score_fusion(pipeline_path);
                for (const auto& rec : manifest.records) {
                    const SpectralCube cube = load_cube(rec, manifest);
                    csv << rec.sample_id() << "," << species_name(rec.species) << "," << score_score_fusion(p, cube)
                        << "\n";
                }
            } else {
                const ImageFusionPipeline p = load_image_fusion(pipeline_path);
                if (!dump_fused_dir.empty()) fs::create_directories(dump_fused_dir);
                for (const auto& rec : manifest.records) {
                    const SpectralCube cube = load_cube(rec, manifest);
                    const Image fused = fuse_cube(cube, p.weights);
                    if (!dump_fused_dir.empty())
                        write_pgm16(fs::path(dump_fused_dir) / (rec.sample_id() + "_fused.pgm"), to_u16(fused));
                    csv << rec.sample_id() << "," << species_name(rec.species) << ","
                        << p.model.score(lbp_histogram(fused)) << "\n";
                }
            }
            write_atomic(out_path, csv.str());
            std::cout << "scored " << manifest.records.size() << " samples -> " << out_path << "\n";
        } else if (eval->parsed()) {
            const CsvScores scores = read_scores_csv(scores_path);
            const EvalReport r = evaluate_scores(scores.as_score_set());
            nlohmann::json j;
            j["d_eer"] = r.d_eer;
            j["eer_threshold"] = r.eer_threshold;
            j["bpcer_at_apcer5"] = r.bpcer_at_apcer5;
            j["bpcer_at_apcer10"] = r.bpcer_at_apcer10;
            auto& pts = j["det_points"] = nlohmann::json::array();
            for (const auto& p : r.det_points) pts.push_back({{"apcer", p.apcer}, {"bpcer", p.bpcer}});
            write_atomic(out_path, j.dump(1) + "\n");
            std::cout << "D-EER " << r.d_eer << "% @ threshold " << r.eer_threshold << ", BPCER@5% "
                      << r.bpcer_at_apcer5 << "%, BPCER@10% " << r.bpcer_at_apcer10 << "%\n";
        } else if (proto->parsed()) {
            const DatasetManifest manifest = load_manifest(manifest_path);
            PartitionSpec spec;
            ProtocolOptions opt;
            opt.method = method_from_name(method_str);
            opt.repeats = repeats;
            opt.C = C;
            opt.base_seed = static_cast<uint64_t>(seed);
            opt.jobs = jobs;
            opt.normalize_scores = normalize_scores;
            const ProtocolReport report = run_protocol(manifest, spec, opt);
            fs::create_directories(out_path);
            write_report_json(report, fs::path(out_path) / "report.json");
            write_report_table(report, fs::path(out_path) / "report.txt");
            for (const auto& run : report.runs) write_run_scores_csv(run, out_path);
            std::cout << format_report_table(report);
        } else if (det->parsed()) {
            const CsvScores scores = read_scores_csv(scores_path);
            std::ostringstream csv;
            csv << "apcer,bpcer,threshold\n" << std::setprecision(17);
            for (const auto& p : det_points(scores.as_score_set()))
                csv << p.apcer << "," << p.bpcer << "," << p.threshold << "\n";
            write_atomic(out_path, csv.str());
            std::cout << "wrote DET points -> " << out_path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
