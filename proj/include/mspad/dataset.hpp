#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mspad/image.hpp"
#include "mspad/types.hpp"

namespace mspad {

// 9 co-registered single-channel band images of one face sample.
// Bands are ordered by wavelength index; all share the same dimensions,
// which must be divisible by 4 (2-level DWT downstream).
struct SpectralCube {
    int rows = 0;
    int cols = 0;
    std::array<ImageU16, kNumBands> bands;

    SpectralCube() = default;
    SpectralCube(int r, int c);

    // Throws std::invalid_argument on any invariant violation.
    void validate() const;

    Image band_unit(int index) const { return to_unit(bands[static_cast<size_t>(index)]); }

    bool operator==(const SpectralCube&) const = default;
};

struct SampleRecord {
    int subject_id = 0;
    int session = 1;
    int sample_index = 0;
    PAISpecies species = PAISpecies::Bonafide;
    std::array<std::string, kNumBands> files;  // relative to the manifest directory

    // Stable identifier used in score CSVs.
    std::string sample_id() const;
};

struct DatasetManifest {
    int image_height = 0;
    int image_width = 0;
    std::optional<int64_t> generator_seed;
    std::vector<SampleRecord> records;
    std::filesystem::path root;  // directory the file paths resolve against

    std::filesystem::path resolve(const std::string& rel) const { return root / rel; }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

SpectralCube load_cube(const SampleRecord& record, const DatasetManifest& manifest);
void save_cube(const SpectralCube& cube, const SampleRecord& record, const DatasetManifest& manifest);

// Checks record uniqueness, path counts, attack session rule, and that every
// referenced file exists and parses at the declared size. Violations are
// data, not errors; this never throws on bad content.
ValidationReport validate_manifest(const DatasetManifest& manifest);

// Canonical band filename: s<subject>_ses<session>_n<sample>_<species>_<wavelength>nm.pgm
std::string band_filename(const SampleRecord& record, int band_index);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& json_path);
DatasetManifest load_manifest(const std::filesystem::path& json_path);

}  // namespace mspad
