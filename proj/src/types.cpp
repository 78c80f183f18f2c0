#include "mspad/types.hpp"

#include <stdexcept>

namespace mspad {

PAIGroup species_group(PAISpecies s) {
    switch (s) {
        case PAISpecies::Bonafide:
            return PAIGroup::Bonafide;
        case PAISpecies::PrintArtifact1:
        case PAISpecies::PrintArtifact2:
            return PAIGroup::Print;
        case PAISpecies::DisplayArtifact1:
        case PAISpecies::DisplayArtifact2:
        case PAISpecies::DisplayArtifact3:
        case PAISpecies::DisplayArtifact4:
            return PAIGroup::Display;
        case PAISpecies::MaskArtifact1:
        case PAISpecies::MaskArtifact2:
            return PAIGroup::Mask;
    }
    throw std::logic_error("unknown species");
}

std::string species_name(PAISpecies s) {
    switch (s) {
        case PAISpecies::Bonafide: return "Bonafide";
        case PAISpecies::PrintArtifact1: return "PrintArtifact1";
        case PAISpecies::PrintArtifact2: return "PrintArtifact2";
        case PAISpecies::DisplayArtifact1: return "DisplayArtifact1";
        case PAISpecies::DisplayArtifact2: return "DisplayArtifact2";
        case PAISpecies::DisplayArtifact3: return "DisplayArtifact3";
        case PAISpecies::DisplayArtifact4: return "DisplayArtifact4";
        case PAISpecies::MaskArtifact1: return "MaskArtifact1";
        case PAISpecies::MaskArtifact2: return "MaskArtifact2";
    }
    throw std::logic_error("unknown species");
}

PAISpecies species_from_name(const std::string& name) {
    for (PAISpecies s : kAllSpecies)
        if (species_name(s) == name) return s;
    throw std::runtime_error("unknown species name: " + name);
}

std::string group_name(PAIGroup g) {
    switch (g) {
        case PAIGroup::Bonafide: return "Bonafide";
        case PAIGroup::Print: return "Print";
        case PAIGroup::Display: return "Display";
        case PAIGroup::Mask: return "Mask";
    }
    throw std::logic_error("unknown group");
}

}  // namespace mspad
