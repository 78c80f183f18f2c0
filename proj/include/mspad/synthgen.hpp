#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>

#include "mspad/dataset.hpp"
#include "mspad/types.hpp"

namespace mspad {

enum class TextureKind { Skin, Halftone, PixelGrid, Smooth };

// Class-conditional spectral and textural statistics for one PAI group.
struct SpectralProfile {
    std::array<double, kNumBands> mean_reflectance{};  // in [0,1]
    std::array<double, kNumBands> band_noise_sigma{};  // >= 0
    TextureKind texture_kind = TextureKind::Skin;

    void validate() const;
};

struct GenConfig {
    int n_subjects = 40;
    int sessions_bonafide = 2;
    int samples_per_cell = 5;    // bonafide samples per session; also mask samples per subject
    int samples_per_attack = 6;  // print/display samples per subject
    int mask_subjects = 10;      // capped at n_subjects
    int image_size = 32;         // divisible by 4
    int64_t seed = 42;
    std::map<PAIGroup, SpectralProfile> profiles;

    GenConfig();
    void validate() const;

    // Closed-form record count for this configuration.
    int expected_record_count() const;
};

// Fraction of full scale that display-class NIR band means must stay under.
inline constexpr double kNoiseFloorCeiling = 0.05;

// Group profiles for skin, print, display and mask classes. Display
// reflectance collapses in the NIR bands (770/830/950/1000nm) where skin,
// print and mask all stay bright.
std::map<PAIGroup, SpectralProfile> default_profiles();

// Writes per-band PGMs plus manifest.json under out_dir. Byte-deterministic
// for a fixed config.
DatasetManifest generate_dataset(const GenConfig& config, const std::filesystem::path& out_dir);

GenConfig load_gen_config(const std::filesystem::path& json_path);
void save_gen_config(const GenConfig& config, const std::filesystem::path& json_path);

}  // namespace mspad
