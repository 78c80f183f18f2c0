#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace mspad {

inline constexpr int kNumBands = 9;
inline constexpr std::array<int, kNumBands> kBandWavelengths{530, 590, 650, 710, 770, 830, 890, 950, 1000};

// Bands whose display-artifact response is essentially noise (NIR region
// where emissive displays radiate nothing): 770, 830, 950, 1000 nm.
inline constexpr std::array<int, 4> kDisplayDarkBands{4, 5, 7, 8};

inline int band_wavelength(int index) { return kBandWavelengths.at(static_cast<size_t>(index)); }

enum class PAISpecies {
    Bonafide = 0,
    PrintArtifact1,
    PrintArtifact2,
    DisplayArtifact1,
    DisplayArtifact2,
    DisplayArtifact3,
    DisplayArtifact4,
    MaskArtifact1,
    MaskArtifact2,
};

enum class PAIGroup { Bonafide = 0, Print, Display, Mask };

inline constexpr std::array<PAISpecies, 9> kAllSpecies{
    PAISpecies::Bonafide,         PAISpecies::PrintArtifact1,   PAISpecies::PrintArtifact2,
    PAISpecies::DisplayArtifact1, PAISpecies::DisplayArtifact2, PAISpecies::DisplayArtifact3,
    PAISpecies::DisplayArtifact4, PAISpecies::MaskArtifact1,    PAISpecies::MaskArtifact2,
};

inline constexpr std::array<PAISpecies, 8> kAttackSpecies{
    PAISpecies::PrintArtifact1,   PAISpecies::PrintArtifact2,   PAISpecies::DisplayArtifact1,
    PAISpecies::DisplayArtifact2, PAISpecies::DisplayArtifact3, PAISpecies::DisplayArtifact4,
    PAISpecies::MaskArtifact1,    PAISpecies::MaskArtifact2,
};

PAIGroup species_group(PAISpecies s);
std::string species_name(PAISpecies s);
PAISpecies species_from_name(const std::string& name);
std::string group_name(PAIGroup g);

}  // namespace mspad
