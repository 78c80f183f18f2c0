#include "mspad/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mspad {

SpectralCube::SpectralCube(int r, int c) : rows(r), cols(c) {
    for (auto& b : bands) b = ImageU16(r, c);
    validate();
}

void SpectralCube::validate() const {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("cube dimensions must be positive");
    if (rows % 4 != 0 || cols % 4 != 0)
        throw std::invalid_argument("cube dimensions must be divisible by 4, got " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    for (size_t i = 0; i < bands.size(); ++i) {
        if (bands[i].rows != rows || bands[i].cols != cols)
            throw std::invalid_argument("band " + std::to_string(i) + " dimension mismatch");
    }
}

std::string SampleRecord::sample_id() const {
    std::ostringstream os;
    os << "s" << subject_id << "_ses" << session << "_n" << sample_index << "_" << species_name(species);
    return os.str();
}

std::string band_filename(const SampleRecord& record, int band_index) {
    std::ostringstream os;
    os << "s" << record.subject_id << "_ses" << record.session << "_n" << record.sample_index << "_"
       << species_name(record.species) << "_" << band_wavelength(band_index) << "nm.pgm";
    return os.str();
}

SpectralCube load_cube(const SampleRecord& record, const DatasetManifest& manifest) {
    SpectralCube cube;
    cube.rows = manifest.image_height;
    cube.cols = manifest.image_width;
    for (int b = 0; b < kNumBands; ++b) {
        const auto path = manifest.resolve(record.files[static_cast<size_t>(b)]);
        if (!std::filesystem::exists(path)) throw std::runtime_error("missing band file: " + path.string());
        ImageU16 img = read_pgm16(path);
        if (img.rows != manifest.image_height || img.cols != manifest.image_width)
            throw std::runtime_error("dimension mismatch vs manifest (" + std::to_string(manifest.image_width) + "x" +
                                     std::to_string(manifest.image_height) + "): " + path.string());
        cube.bands[static_cast<size_t>(b)] = std::move(img);
    }
    cube.validate();
    return cube;
}

void save_cube(const SpectralCube& cube, const SampleRecord& record, const DatasetManifest& manifest) {
    cube.validate();
    for (int b = 0; b < kNumBands; ++b)
        write_pgm16(manifest.resolve(record.files[static_cast<size_t>(b)]), cube.bands[static_cast<size_t>(b)]);
}

ValidationReport validate_manifest(const DatasetManifest& manifest) {
    ValidationReport report;
    auto add = [&](const std::string& v) { report.violations.push_back(v); };

    if (manifest.image_height <= 0 || manifest.image_width <= 0) add("non-positive image dimensions");
    if (manifest.image_height % 4 != 0 || manifest.image_width % 4 != 0)
        add("image dimensions not divisible by 4");

    std::set<std::tuple<int, int, int, PAISpecies>> seen;
    for (const auto& rec : manifest.records) {
        const std::string id = rec.sample_id();
        auto key = std::make_tuple(rec.subject_id, rec.session, rec.sample_index, rec.species);
        if (!seen.insert(key).second) add("duplicate record: " + id);
        if (rec.species != PAISpecies::Bonafide && rec.session != 1)
            add("attack record with session != 1: " + id);
        int present_paths = 0;
        for (const auto& f : rec.files)
            if (!f.empty()) ++present_paths;
        if (present_paths != kNumBands) {
            add("record has " + std::to_string(present_paths) + " file paths, expected 9: " + id);
            continue;
        }
        for (int b = 0; b < kNumBands; ++b) {
            const auto path = manifest.resolve(rec.files[static_cast<size_t>(b)]);
            if (!std::filesystem::exists(path)) {
                add("missing file: " + path.string());
                continue;
            }
            try {
                ImageU16 img = read_pgm16(path);
                if (img.rows != manifest.image_height || img.cols != manifest.image_width)
                    add("wrong dimensions: " + path.string());
            } catch (const std::exception& e) {
                add(std::string("unreadable band image: ") + e.what());
            }
        }
    }
    return report;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& json_path) {
    nlohmann::json j;
    j["image_height"] = manifest.image_height;
    j["image_width"] = manifest.image_width;
    if (manifest.generator_seed) j["generator_seed"] = *manifest.generator_seed;
    j["record_count"] = manifest.records.size();
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& rec : manifest.records) {
        nlohmann::json r;
        r["subject_id"] = rec.subject_id;
        r["session"] = rec.session;
        r["sample_index"] = rec.sample_index;
        r["species"] = species_name(rec.species);
        r["files"] = rec.files;
        recs.push_back(std::move(r));
    }
    // write-temp-then-rename so re-runs never leave a half-written manifest
    auto tmp = json_path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot write manifest: " + json_path.string());
        f << j.dump(1) << "\n";
    }
    std::filesystem::rename(tmp, json_path);
}

DatasetManifest load_manifest(const std::filesystem::path& json_path) {
    std::ifstream f(json_path);
    if (!f) throw std::runtime_error("cannot open manifest: " + json_path.string());
    nlohmann::json j;
    f >> j;
    DatasetManifest m;
    m.image_height = j.at("image_height").get<int>();
    m.image_width = j.at("image_width").get<int>();
    if (j.contains("generator_seed")) m.generator_seed = j["generator_seed"].get<int64_t>();
    m.root = json_path.parent_path();
    for (const auto& r : j.at("records")) {
        SampleRecord rec;
        rec.subject_id = r.at("subject_id").get<int>();
        rec.session = r.at("session").get<int>();
        rec.sample_index = r.at("sample_index").get<int>();
        rec.species = species_from_name(r.at("species").get<std::string>());
        const auto& files = r.at("files");
        if (files.size() != kNumBands)
            throw std::runtime_error("record with " + std::to_string(files.size()) + " files in manifest");
        for (size_t b = 0; b < kNumBands; ++b) rec.files[b] = files[b].get<std::string>();
        m.records.push_back(std::move(rec));
    }
    return m;
}

}  // namespace mspad
