#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mspad/dataset.hpp"
#include "mspad/metrics.hpp"
#include "mspad/pipelines.hpp"

namespace mspad {

enum class Method { ScoreFusion, ImageFusion };

Method method_from_name(const std::string& name);
std::string method_name(Method m);

// Per-partition sample counts. Defaults are sized for the default synthetic
// dataset (40 subjects, 2 sessions). Mask species carry
// fewer samples, so they get their own dev/test counts; when masks land in
// the training side they contribute every sample not taken by dev.
struct PartitionSpec {
    int train_bonafide = 150;
    int dev_bonafide = 100;
    int test_bonafide = 150;
    int train_per_attack = 100;
    int dev_per_attack = 60;
    int test_per_attack = 80;
    int dev_per_mask = 15;
    int test_per_mask = 30;
    uint64_t seed = 0;
};

// Indices into manifest.records. Pairwise disjoint.
struct Partitions {
    std::vector<size_t> train;
    std::vector<size_t> dev;
    std::vector<size_t> test;
};

// Unseen-attack split: training excludes the held-out species' entire PAI
// group; dev adds the held-out species for thresholding; test attacks are
// the held-out species only.
Partitions make_partitions(const DatasetManifest& manifest, const PartitionSpec& spec, PAISpecies held_out);

struct ScoredSample {
    std::string sample_id;
    PAISpecies species = PAISpecies::Bonafide;
    double score = 0.0;
};

struct RunResult {
    PAISpecies held_out = PAISpecies::PrintArtifact1;
    int repeat_index = 0;
    double dev_deer = 0.0;
    double dev_threshold = 0.0;
    double test_deer = 0.0;
    double test_bpcer5 = 0.0;
    double test_bpcer10 = 0.0;
    // Extra column: test BPCER/APCER at the frozen dev-set EER threshold.
    double test_bpcer_at_dev_threshold = 0.0;
    double test_apcer_at_dev_threshold = 0.0;
    std::vector<ScoredSample> dev_scores;
    std::vector<ScoredSample> test_scores;
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;  // population std over repeats
};

struct SpeciesAggregate {
    PAISpecies held_out = PAISpecies::PrintArtifact1;
    int repeats = 0;
    MetricAggregate dev_deer, test_deer, test_bpcer5, test_bpcer10;
};

struct ProtocolReport {
    Method method = Method::ScoreFusion;
    int repeats = 0;
    uint64_t base_seed = 0;
    std::vector<RunResult> runs;
    std::vector<SpeciesAggregate> aggregates;  // one per held-out species
};

struct ProtocolOptions {
    Method method = Method::ScoreFusion;
    int repeats = 5;
    double C = 1.0;
    uint64_t base_seed = 42;
    int jobs = 1;
    bool normalize_scores = false;  // dev-set min-max before the sum rule
    FusionWeights weights = FusionWeights::uniform();
};

// LBP features per band plus fused-image features, extracted once per record.
struct FeatureCache {
    std::vector<std::array<FeatureVector, kNumBands>> band_feats;
    std::vector<FeatureVector> fused_feats;
};

FeatureCache build_feature_cache(const DatasetManifest& manifest, const FusionWeights& weights, int jobs = 1);

// One (held-out species, repeat) unit: partition with seed
// hash(base_seed, species, repeat), train, threshold on dev, report on test.
RunResult run_single(const DatasetManifest& manifest, const FeatureCache& cache, const PartitionSpec& spec,
                     PAISpecies held_out, int repeat_index, const ProtocolOptions& opt);

// All 8 held-out species x repeats, plus per-species mean/std aggregation.
ProtocolReport run_protocol(const DatasetManifest& manifest, const PartitionSpec& spec, const ProtocolOptions& opt);

void write_report_json(const ProtocolReport& report, const std::filesystem::path& path);
void write_report_table(const ProtocolReport& report, const std::filesystem::path& path);
std::string format_report_table(const ProtocolReport& report);
void write_run_scores_csv(const RunResult& run, const std::filesystem::path& dir);

}  // namespace mspad
