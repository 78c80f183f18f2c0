#include "mspad/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mspad/rng.hpp"

namespace mspad {

Method method_from_name(const std::string& name) {
    if (name == "score_fusion") return Method::ScoreFusion;
    if (name == "image_fusion") return Method::ImageFusion;
    throw std::runtime_error("unknown method: " + name + " (expected score_fusion or image_fusion)");
}

std::string method_name(Method m) { return m == Method::ScoreFusion ? "score_fusion" : "image_fusion"; }

namespace {

int sample_label(PAISpecies s) { return s == PAISpecies::Bonafide ? 1 : -1; }

std::vector<size_t> shuffled_cell(const std::vector<size_t>& indices, uint64_t seed) {
    std::vector<size_t> out = indices;
    auto rng = seeded_rng(seed);
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

void take(std::vector<size_t>& dst, const std::vector<size_t>& src, size_t& cursor, int n, const std::string& cell) {
    if (cursor + static_cast<size_t>(n) > src.size())
        throw std::runtime_error("insufficient samples in cell " + cell + ": need " +
                                 std::to_string(cursor + static_cast<size_t>(n)) + ", have " +
                                 std::to_string(src.size()));
    for (int i = 0; i < n; ++i) dst.push_back(src[cursor++]);
}

}  // namespace

Partitions make_partitions(const DatasetManifest& manifest, const PartitionSpec& spec, PAISpecies held_out) {
    if (held_out == PAISpecies::Bonafide) throw std::invalid_argument("held-out species must be an attack");

    std::map<PAISpecies, std::vector<size_t>> cells;
    for (size_t i = 0; i < manifest.records.size(); ++i) cells[manifest.records[i].species].push_back(i);

    Partitions parts;

    {
        const auto shuffled = shuffled_cell(cells[PAISpecies::Bonafide], hash_combine(spec.seed, 0xb0u));
        size_t cur = 0;
        take(parts.train, shuffled, cur, spec.train_bonafide, "Bonafide");
        take(parts.dev, shuffled, cur, spec.dev_bonafide, "Bonafide");
        take(parts.test, shuffled, cur, spec.test_bonafide, "Bonafide");
    }

    const PAIGroup held_group = species_group(held_out);
    for (PAISpecies s : kAttackSpecies) {
        const bool is_mask = species_group(s) == PAIGroup::Mask;
        const auto shuffled = shuffled_cell(cells[s], hash_combine(spec.seed, static_cast<uint64_t>(s)));
        const int dev_n = is_mask ? spec.dev_per_mask : spec.dev_per_attack;
        size_t cur = 0;
        if (species_group(s) == held_group) {
            if (s != held_out) continue;  // sibling species of the held-out group stays unused
            const int test_n = is_mask ? spec.test_per_mask : spec.test_per_attack;
            take(parts.dev, shuffled, cur, dev_n, species_name(s));
            take(parts.test, shuffled, cur, test_n, species_name(s));
        } else {
            // Masks have few samples; training takes whatever dev leaves.
            const int train_n =
                is_mask ? static_cast<int>(shuffled.size()) - dev_n : spec.train_per_attack;
            if (train_n < 1)
                throw std::runtime_error("insufficient samples in cell " + species_name(s) +
                                         ": none left for training after dev allocation");
            take(parts.train, shuffled, cur, train_n, species_name(s));
            take(parts.dev, shuffled, cur, dev_n, species_name(s));
        }
    }
    return parts;
}

FeatureCache build_feature_cache(const DatasetManifest& manifest, const FusionWeights& weights, int jobs) {
    weights.validate();
    const size_t n = manifest.records.size();
    FeatureCache cache;
    cache.band_feats.resize(n);
    cache.fused_feats.resize(n);

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) break;
            try {
                const SpectralCube cube = load_cube(manifest.records[i], manifest);
                cache.band_feats[i] = band_features(cube);
                cache.fused_feats[i] = fused_features(cube, weights);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_msg = e.what();
                failed.store(true);
            }
        }
    };
    const int nthreads = std::max(1, jobs);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed.load()) throw std::runtime_error("feature extraction failed: " + error_msg);
    return cache;
}

namespace {

ScoreSet collect_scores(const DatasetManifest& manifest, const std::vector<ScoredSample>& scored) {
    ScoreSet set;
    (void)manifest;
    for (const auto& s : scored) {
        if (s.species == PAISpecies::Bonafide)
            set.bonafide_scores.push_back(s.score);
        else
            set.attack_scores.push_back(s.score);
    }
    return set;
}

}  // namespace

RunResult run_single(const DatasetManifest& manifest, const FeatureCache& cache, const PartitionSpec& spec,
                     PAISpecies held_out, int repeat_index, const ProtocolOptions& opt) {
    PartitionSpec local = spec;
    local.seed = hash_combine(opt.base_seed, static_cast<uint64_t>(held_out), static_cast<uint64_t>(repeat_index));
    const Partitions parts = make_partitions(manifest, local, held_out);

    const uint64_t train_seed = hash_combine(local.seed, 0x5eedu);
    std::vector<int> labels;
    labels.reserve(parts.train.size());
    for (size_t i : parts.train) labels.push_back(sample_label(manifest.records[i].species));

    RunResult run;
    run.held_out = held_out;
    run.repeat_index = repeat_index;

    auto score_all = [&](const std::vector<size_t>& indices, auto&& scorer) {
        std::vector<ScoredSample> out;
        out.reserve(indices.size());
        for (size_t i : indices)
            out.push_back({manifest.records[i].sample_id(), manifest.records[i].species, scorer(i)});
        return out;
    };

    if (opt.method == Method::ScoreFusion) {
        std::vector<std::array<FeatureVector, kNumBands>> X;
        X.reserve(parts.train.size());
        for (size_t i : parts.train) X.push_back(cache.band_feats[i]);
        ScoreFusionPipeline p = train_score_fusion_features(X, labels, opt.C, train_seed);
        if (opt.normalize_scores) {
            ScoreNormStats norm;
            for (int b = 0; b < kNumBands; ++b) {
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (size_t i : parts.dev) {
                    const double s = p.per_band_models[static_cast<size_t>(b)].score(cache.band_feats[i][static_cast<size_t>(b)]);
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                }
                norm.min[static_cast<size_t>(b)] = lo;
                norm.max[static_cast<size_t>(b)] = hi;
            }
            p.norm = norm;
        }
        auto scorer = [&](size_t i) { return score_score_fusion(p, cache.band_feats[i]); };
        run.dev_scores = score_all(parts.dev, scorer);
        run.test_scores = score_all(parts.test, scorer);
    } else {
        std::vector<FeatureVector> X;
        X.reserve(parts.train.size());
        for (size_t i : parts.train) X.push_back(cache.fused_feats[i]);
        ImageFusionPipeline p = train_image_fusion_features(X, labels, opt.weights, opt.C, train_seed);
        auto scorer = [&](size_t i) { return p.model.score(cache.fused_feats[i]); };
        run.dev_scores = score_all(parts.dev, scorer);
        run.test_scores = score_all(parts.test, scorer);
    }

    const ScoreSet dev_set = collect_scores(manifest, run.dev_scores);
    const ScoreSet test_set = collect_scores(manifest, run.test_scores);

    const EerResult dev = d_eer(dev_set);
    run.dev_deer = dev.deer;
    run.dev_threshold = dev.threshold;  // frozen; test metrics never re-tune it
    run.test_deer = d_eer(test_set).deer;
    run.test_bpcer5 = bpcer_at_apcer(test_set, 5.0);
    run.test_bpcer10 = bpcer_at_apcer(test_set, 10.0);
    run.test_bpcer_at_dev_threshold = bpcer(test_set, dev.threshold);
    run.test_apcer_at_dev_threshold = apcer(test_set, dev.threshold);
    return run;
}

namespace {

MetricAggregate aggregate(const std::vector<double>& xs) {
    MetricAggregate a;
    if (xs.empty()) return a;
    for (double x : xs) a.mean += x;
    a.mean /= static_cast<double>(xs.size());
    for (double x : xs) a.stddev += (x - a.mean) * (x - a.mean);
    a.stddev = std::sqrt(a.stddev / static_cast<double>(xs.size()));
    return a;
}

}  // namespace

ProtocolReport run_protocol(const DatasetManifest& manifest, const PartitionSpec& spec, const ProtocolOptions& opt) {
    if (opt.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    const FeatureCache cache = build_feature_cache(manifest, opt.weights, opt.jobs);

    struct Unit {
        PAISpecies species;
        int repeat;
    };
    std::vector<Unit> units;
    for (PAISpecies s : kAttackSpecies)
        for (int r = 0; r < opt.repeats; ++r) units.push_back({s, r});

    ProtocolReport report;
    report.method = opt.method;
    report.repeats = opt.repeats;
    report.base_seed = opt.base_seed;
    report.runs.resize(units.size());

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t u = next.fetch_add(1);
            if (u >= units.size() || failed.load()) break;
            try {
                report.runs[u] = run_single(manifest, cache, spec, units[u].species, units[u].repeat, opt);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_msg = std::string(species_name(units[u].species)) + " repeat " +
                            std::to_string(units[u].repeat) + ": " + e.what();
                failed.store(true);
            }
        }
    };
    const int nthreads = std::max(1, opt.jobs);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed.load()) throw std::runtime_error("protocol run failed: " + error_msg);

    for (PAISpecies s : kAttackSpecies) {
        std::vector<double> dev_d, test_d, b5, b10;
        for (const auto& run : report.runs) {
            if (run.held_out != s) continue;
            dev_d.push_back(run.dev_deer);
            test_d.push_back(run.test_deer);
            b5.push_back(run.test_bpcer5);
            b10.push_back(run.test_bpcer10);
        }
        SpeciesAggregate agg;
        agg.held_out = s;
        agg.repeats = static_cast<int>(dev_d.size());
        agg.dev_deer = aggregate(dev_d);
        agg.test_deer = aggregate(test_d);
        agg.test_bpcer5 = aggregate(b5);
        agg.test_bpcer10 = aggregate(b10);
        report.aggregates.push_back(agg);
    }
    return report;
}

void write_report_json(const ProtocolReport& report, const std::filesystem::path& path) {
    nlohmann::json j;
    j["method"] = method_name(report.method);
    j["repeats"] = report.repeats;
    j["base_seed"] = report.base_seed;
    auto& runs = j["runs"] = nlohmann::json::array();
    for (const auto& run : report.runs) {
        runs.push_back({{"held_out", species_name(run.held_out)},
                        {"repeat", run.repeat_index},
                        {"dev_deer", run.dev_deer},
                        {"dev_threshold", run.dev_threshold},
                        {"test_deer", run.test_deer},
                        {"test_bpcer_at_apcer5", run.test_bpcer5},
                        {"test_bpcer_at_apcer10", run.test_bpcer10},
                        {"test_bpcer_at_dev_threshold", run.test_bpcer_at_dev_threshold},
                        {"test_apcer_at_dev_threshold", run.test_apcer_at_dev_threshold}});
    }
    auto& aggs = j["aggregates"] = nlohmann::json::array();
    for (const auto& a : report.aggregates) {
        aggs.push_back({{"held_out", species_name(a.held_out)},
                        {"repeats", a.repeats},
                        {"dev_deer", {{"mean", a.dev_deer.mean}, {"std", a.dev_deer.stddev}}},
                        {"test_deer", {{"mean", a.test_deer.mean}, {"std", a.test_deer.stddev}}},
                        {"test_bpcer_at_apcer5", {{"mean", a.test_bpcer5.mean}, {"std", a.test_bpcer5.stddev}}},
                        {"test_bpcer_at_apcer10", {{"mean", a.test_bpcer10.mean}, {"std", a.test_bpcer10.stddev}}}});
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot write report: " + path.string());
        f << j.dump(1) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

std::string format_report_table(const ProtocolReport& report) {
    std::ostringstream os;
    os << "PAD evaluation, method = " << method_name(report.method) << ", repeats = " << report.repeats
       << ", base seed = " << report.base_seed << "\n";
    os << std::left << std::setw(20) << "Held-out PAI" << std::right << std::setw(16) << "Dev D-EER"
       << std::setw(16) << "Test D-EER" << std::setw(18) << "BPCER@APCER=5%" << std::setw(18) << "BPCER@APCER=10%"
       << "\n";
    auto cell = [](const MetricAggregate& m) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(2) << m.mean << "+-" << m.stddev;
        return c.str();
    };
    for (const auto& a : report.aggregates) {
        os << std::left << std::setw(20) << species_name(a.held_out) << std::right << std::setw(16)
           << cell(a.dev_deer) << std::setw(16) << cell(a.test_deer) << std::setw(18) << cell(a.test_bpcer5)
           << std::setw(18) << cell(a.test_bpcer10) << "\n";
    }
    return os.str();
}

void write_report_table(const ProtocolReport& report, const std::filesystem::path& path) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot write report table: " + path.string());
        f << format_report_table(report);
    }
    std::filesystem::rename(tmp, path);
}

void write_run_scores_csv(const RunResult& run, const std::filesystem::path& dir) {
    const std::string base =
        "run_" + species_name(run.held_out) + "_rep" + std::to_string(run.repeat_index);
    for (const auto& [suffix, scores] :
         {std::pair<std::string, const std::vector<ScoredSample>*>{"_dev_scores.csv", &run.dev_scores},
          std::pair<std::string, const std::vector<ScoredSample>*>{"_test_scores.csv", &run.test_scores}}) {
        const auto path = dir / (base + suffix);
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream f(tmp);
            if (!f) throw std::runtime_error("cannot write score csv: " + path.string());
            f << "sample_id,species,score\n";
            f << std::setprecision(17);
            for (const auto& s : *scores) f << s.sample_id << "," << species_name(s.species) << "," << s.score << "\n";
        }
        std::filesystem::rename(tmp, path);
    }
}

}  // namespace mspad
