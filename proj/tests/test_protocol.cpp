#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "mspad/protocol.hpp"
#include "mspad/synthgen.hpp"

using namespace mspad;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

GenConfig small_config() {
    GenConfig cfg;
    cfg.n_subjects = 8;
    cfg.sessions_bonafide = 2;
    cfg.samples_per_cell = 2;   // 32 bonafide, 8 per mask species
    cfg.samples_per_attack = 3; // 24 per print/display species
    cfg.mask_subjects = 4;
    cfg.image_size = 16;
    cfg.seed = 7;
    return cfg;
}

PartitionSpec small_spec() {
    PartitionSpec spec;
    spec.train_bonafide = 12;
    spec.dev_bonafide = 8;
    spec.test_bonafide = 12;
    spec.train_per_attack = 10;
    spec.dev_per_attack = 6;
    spec.test_per_attack = 8;
    spec.dev_per_mask = 2;
    spec.test_per_mask = 4;
    spec.seed = 3;
    return spec;
}

// Generated once; the directory outlives the individual test cases.
const DatasetManifest& shared_manifest() {
    static TempDir dir("mspad_protocol_data");
    static DatasetManifest manifest = generate_dataset(small_config(), dir.path);
    return manifest;
}

}  // namespace

TEST_CASE("mask held out: training excludes every mask sample") {
    const DatasetManifest& m = shared_manifest();
    const Partitions parts = make_partitions(m, small_spec(), PAISpecies::MaskArtifact1);
    for (size_t i : parts.train) {
        CHECK(species_group(m.records[i].species) != PAIGroup::Mask);
    }
    // Test attacks are the held-out species only.
    for (size_t i : parts.test) {
        const PAISpecies s = m.records[i].species;
        CHECK((s == PAISpecies::Bonafide || s == PAISpecies::MaskArtifact1));
    }
    // Sibling mask species is absent everywhere.
    for (const auto& part : {parts.train, parts.dev, parts.test})
        for (size_t i : part) CHECK(m.records[i].species != PAISpecies::MaskArtifact2);
}

TEST_CASE("partitions are pairwise disjoint for every held-out species") {
    const DatasetManifest& m = shared_manifest();
    for (PAISpecies held_out : kAttackSpecies) {
        const Partitions parts = make_partitions(m, small_spec(), held_out);
        std::set<size_t> train(parts.train.begin(), parts.train.end());
        std::set<size_t> dev(parts.dev.begin(), parts.dev.end());
        std::set<size_t> test(parts.test.begin(), parts.test.end());
        CHECK(train.size() == parts.train.size());
        CHECK(dev.size() == parts.dev.size());
        CHECK(test.size() == parts.test.size());
        for (size_t i : dev) CHECK(train.count(i) == 0);
        for (size_t i : test) {
            CHECK(train.count(i) == 0);
            CHECK(dev.count(i) == 0);
        }
    }
}

TEST_CASE("partition counts match the closed-form composition") {
    const DatasetManifest& m = shared_manifest();
    const PartitionSpec spec = small_spec();

    SUBCASE("print species held out") {
        const Partitions parts = make_partitions(m, spec, PAISpecies::PrintArtifact1);
        // train: bonafide + 4 display species + 2 mask species (masks give all-but-dev).
        const int mask_avail = 8;
        CHECK(static_cast<int>(parts.train.size()) ==
              spec.train_bonafide + 4 * spec.train_per_attack + 2 * (mask_avail - spec.dev_per_mask));
        CHECK(static_cast<int>(parts.dev.size()) ==
              spec.dev_bonafide + 4 * spec.dev_per_attack + 2 * spec.dev_per_mask + spec.dev_per_attack);
        CHECK(static_cast<int>(parts.test.size()) == spec.test_bonafide + spec.test_per_attack);
    }
    SUBCASE("mask species held out") {
        const Partitions parts = make_partitions(m, spec, PAISpecies::MaskArtifact2);
        CHECK(static_cast<int>(parts.train.size()) == spec.train_bonafide + 6 * spec.train_per_attack);
        CHECK(static_cast<int>(parts.dev.size()) ==
              spec.dev_bonafide + 6 * spec.dev_per_attack + spec.dev_per_mask);
        CHECK(static_cast<int>(parts.test.size()) == spec.test_bonafide + spec.test_per_mask);
    }
}

TEST_CASE("insufficient samples are reported with the failing cell") {
    const DatasetManifest& m = shared_manifest();
    PartitionSpec spec = small_spec();
    spec.train_per_attack = 100;  // display cells only have 24
    try {
        make_partitions(m, spec, PAISpecies::PrintArtifact1);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("insufficient") != std::string::npos);
        CHECK(std::string(e.what()).find("Display") != std::string::npos);
    }
}

TEST_CASE("partitioning is deterministic in the seed") {
    const DatasetManifest& m = shared_manifest();
    const Partitions a = make_partitions(m, small_spec(), PAISpecies::DisplayArtifact2);
    const Partitions b = make_partitions(m, small_spec(), PAISpecies::DisplayArtifact2);
    CHECK(a.train == b.train);
    CHECK(a.dev == b.dev);
    CHECK(a.test == b.test);
    PartitionSpec other = small_spec();
    other.seed = 4;
    const Partitions c = make_partitions(m, other, PAISpecies::DisplayArtifact2);
    CHECK(a.train != c.train);
}

TEST_CASE("run_single freezes the dev threshold for the extra test columns") {
    const DatasetManifest& m = shared_manifest();
    ProtocolOptions opt;
    opt.method = Method::ScoreFusion;
    opt.repeats = 1;
    opt.base_seed = 11;
    const FeatureCache cache = build_feature_cache(m, opt.weights);
    const RunResult run = run_single(m, cache, small_spec(), PAISpecies::PrintArtifact2, 0, opt);

    ScoreSet dev_set, test_set;
    for (const auto& s : run.dev_scores)
        (s.species == PAISpecies::Bonafide ? dev_set.bonafide_scores : dev_set.attack_scores).push_back(s.score);
    for (const auto& s : run.test_scores)
        (s.species == PAISpecies::Bonafide ? test_set.bonafide_scores : test_set.attack_scores).push_back(s.score);

    const EerResult dev = d_eer(dev_set);
    CHECK(run.dev_threshold == dev.threshold);
    CHECK(run.dev_deer == dev.deer);
    CHECK(run.test_bpcer_at_dev_threshold == bpcer(test_set, dev.threshold));
    CHECK(run.test_apcer_at_dev_threshold == apcer(test_set, dev.threshold));
    CHECK(run.test_deer == d_eer(test_set).deer);
    CHECK(run.test_bpcer5 == bpcer_at_apcer(test_set, 5.0));
    CHECK(run.test_bpcer10 == bpcer_at_apcer(test_set, 10.0));
}

TEST_CASE("repeats=1 aggregates have zero std; aggregates recompute from runs") {
    const DatasetManifest& m = shared_manifest();
    ProtocolOptions opt;
    opt.method = Method::ScoreFusion;
    opt.repeats = 1;
    opt.base_seed = 5;
    const ProtocolReport report = run_protocol(m, small_spec(), opt);
    REQUIRE(report.runs.size() == 8);
    REQUIRE(report.aggregates.size() == 8);
    for (const auto& agg : report.aggregates) {
        CHECK(agg.repeats == 1);
        CHECK(agg.dev_deer.stddev == 0.0);
        CHECK(agg.test_deer.stddev == 0.0);
        const RunResult* run = nullptr;
        for (const auto& r : report.runs)
            if (r.held_out == agg.held_out) run = &r;
        REQUIRE(run != nullptr);
        CHECK(agg.test_deer.mean == run->test_deer);
        CHECK(agg.test_bpcer5.mean == run->test_bpcer5);
    }
}

TEST_CASE("aggregates equal external recomputation over repeats") {
    const DatasetManifest& m = shared_manifest();
    ProtocolOptions opt;
    opt.method = Method::ImageFusion;
    opt.repeats = 3;
    opt.base_seed = 6;
    const ProtocolReport report = run_protocol(m, small_spec(), opt);
    for (const auto& agg : report.aggregates) {
        std::vector<double> xs;
        for (const auto& r : report.runs)
            if (r.held_out == agg.held_out) xs.push_back(r.test_deer);
        REQUIRE(xs.size() == 3);
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= 3.0;
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        CHECK(agg.test_deer.mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(agg.test_deer.stddev == doctest::Approx(std::sqrt(var / 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("protocol is deterministic and job-count independent") {
    const DatasetManifest& m = shared_manifest();
    ProtocolOptions opt;
    opt.method = Method::ScoreFusion;
    opt.repeats = 2;
    opt.base_seed = 42;
    opt.jobs = 1;
    const ProtocolReport a = run_protocol(m, small_spec(), opt);
    opt.jobs = 4;
    const ProtocolReport b = run_protocol(m, small_spec(), opt);
    REQUIRE(a.runs.size() == b.runs.size());
    for (size_t i = 0; i < a.runs.size(); ++i) {
        CHECK(a.runs[i].held_out == b.runs[i].held_out);
        CHECK(a.runs[i].test_deer == b.runs[i].test_deer);
        CHECK(a.runs[i].dev_threshold == b.runs[i].dev_threshold);
        CHECK(a.runs[i].test_bpcer5 == b.runs[i].test_bpcer5);
    }
}

TEST_CASE("report emitters produce files") {
    TempDir out("mspad_protocol_report");
    const DatasetManifest& m = shared_manifest();
    ProtocolOptions opt;
    opt.repeats = 1;
    opt.base_seed = 1;
    const ProtocolReport report = run_protocol(m, small_spec(), opt);
    write_report_json(report, out.path / "report.json");
    write_report_table(report, out.path / "report.txt");
    for (const auto& run : report.runs) write_run_scores_csv(run, out.path);
    CHECK(fs::exists(out.path / "report.json"));
    CHECK(fs::exists(out.path / "report.txt"));
    CHECK(fs::exists(out.path / "run_PrintArtifact1_rep0_test_scores.csv"));
    const std::string table = format_report_table(report);
    CHECK(table.find("MaskArtifact2") != std::string::npos);
    CHECK(table.find("BPCER@APCER=5%") != std::string::npos);
}
