#include "mspad/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "mspad/rng.hpp"

namespace mspad {

void SpectralProfile::validate() const {
    for (double r : mean_reflectance)
        if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("reflectance out of [0,1]");
    for (double s : band_noise_sigma)
        if (!(s >= 0.0)) throw std::invalid_argument("negative noise sigma");
}

GenConfig::GenConfig() : profiles(default_profiles()) {}

void GenConfig::validate() const {
    if (n_subjects < 1 || sessions_bonafide < 1 || samples_per_cell < 1 || samples_per_attack < 1 ||
        mask_subjects < 1)
        throw std::invalid_argument("all counts must be >= 1");
    if (image_size < 4 || image_size % 4 != 0) throw std::invalid_argument("image_size must be divisible by 4");
    for (PAIGroup g : {PAIGroup::Bonafide, PAIGroup::Print, PAIGroup::Display, PAIGroup::Mask}) {
        auto it = profiles.find(g);
        if (it == profiles.end()) throw std::invalid_argument("missing profile for group " + group_name(g));
        it->second.validate();
    }
}

int GenConfig::expected_record_count() const {
    const int masks = std::min(mask_subjects, n_subjects);
    return n_subjects * sessions_bonafide * samples_per_cell  // bonafide
           + n_subjects * samples_per_attack * 6              // 2 print + 4 display species
           + masks * samples_per_cell * 2;                    // 2 mask species
}

std::map<PAIGroup, SpectralProfile> default_profiles() {
    std::map<PAIGroup, SpectralProfile> p;

    // Sensor noise doubles as the re-acquisition tell: genuine skin images are
    // nearly noise-free, while every attack instrument adds capture noise that
    // spreads LBP histogram mass across all bins.
    SpectralProfile skin;
    skin.mean_reflectance = {0.55, 0.42, 0.60, 0.65, 0.70, 0.72, 0.74, 0.73, 0.71};  // local dip at 590nm
    skin.band_noise_sigma.fill(0.002);
    skin.texture_kind = TextureKind::Skin;
    p[PAIGroup::Bonafide] = skin;

    SpectralProfile print;
    print.mean_reflectance = {0.60, 0.58, 0.62, 0.63, 0.65, 0.66, 0.67, 0.66, 0.65};
    print.band_noise_sigma.fill(0.045);
    print.texture_kind = TextureKind::Halftone;
    p[PAIGroup::Print] = print;

    // Emissive displays radiate nothing in the NIR bands: reflectance
    // collapses and the sensor sees noise.
    SpectralProfile display;
    display.mean_reflectance = {0.60, 0.58, 0.55, 0.35, 0.008, 0.008, 0.010, 0.006, 0.005};
    display.band_noise_sigma = {0.025, 0.025, 0.025, 0.025, 0.010, 0.010, 0.010, 0.010, 0.010};
    display.texture_kind = TextureKind::PixelGrid;
    p[PAIGroup::Display] = display;

    SpectralProfile mask;
    mask.mean_reflectance = {0.50, 0.49, 0.52, 0.53, 0.55, 0.56, 0.56, 0.55, 0.54};
    mask.band_noise_sigma.fill(0.025);
    mask.texture_kind = TextureKind::Smooth;
    p[PAIGroup::Mask] = mask;
    return p;
}

namespace {

Image box_blur3(const Image& in) {
    Image out(in.rows, in.cols);
    for (int r = 0; r < in.rows; ++r) {
        for (int c = 0; c < in.cols; ++c) {
            double s = 0.0;
            int n = 0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || cc < 0 || rr >= in.rows || cc >= in.cols) continue;
                    s += in.at(rr, cc);
                    ++n;
                }
            }
            out.at(r, c) = s / n;
        }
    }
    return out;
}

// Sum of 3 anisotropic Gaussian bumps, subject-seeded, mapped into [0.3, 1].
Image face_pattern(uint64_t subject_seed, int size) {
    auto rng = seeded_rng(subject_seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Image img(size, size, 0.0);
    for (int k = 0; k < 3; ++k) {
        const double cx = (0.25 + 0.5 * uni(rng)) * size;
        const double cy = (0.25 + 0.5 * uni(rng)) * size;
        const double sx = (0.12 + 0.25 * uni(rng)) * size;
        const double sy = (0.12 + 0.25 * uni(rng)) * size;
        const double theta = uni(rng) * 3.14159265358979;
        const double amp = 0.4 + 0.5 * uni(rng);
        const double ct = std::cos(theta), st = std::sin(theta);
        for (int r = 0; r < size; ++r) {
            for (int c = 0; c < size; ++c) {
                const double dx = c - cx, dy = r - cy;
                const double u = (dx * ct + dy * st) / sx;
                const double v = (-dx * st + dy * ct) / sy;
                img.at(r, c) += amp * std::exp(-0.5 * (u * u + v * v));
            }
        }
    }
    for (double& x : img.data) x = 0.3 + 0.7 * std::clamp(x, 0.0, 1.0);
    return img;
}

// Multiplicative micro-texture per texture kind, one instance per sample.
Image texture_modulation(TextureKind kind, uint64_t tex_seed, int size) {
    auto rng = seeded_rng(tex_seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Image mod(size, size, 1.0);
    switch (kind) {
        case TextureKind::Skin: {
            // Band-limited smooth noise: blurred white noise, unit-normalized.
            std::normal_distribution<double> gauss(0.0, 1.0);
            Image noise(size, size);
            for (double& x : noise.data) x = gauss(rng);
            noise = box_blur3(noise);
            double m = 0.0, s = 0.0;
            for (double x : noise.data) m += x;
            m /= noise.size();
            for (double x : noise.data) s += (x - m) * (x - m);
            s = std::sqrt(s / noise.size());
            if (s < 1e-12) s = 1.0;
            for (size_t i = 0; i < mod.data.size(); ++i)
                mod.data[i] = std::clamp(1.0 + 0.35 * (noise.data[i] - m) / s, 0.3, 1.7);
            break;
        }
        case TextureKind::Halftone: {
            // Period-4 dot grid with a random phase.
            const double px = uni(rng) * 4.0, py = uni(rng) * 4.0;
            constexpr double twopi = 6.28318530717959;
            for (int r = 0; r < size; ++r)
                for (int c = 0; c < size; ++c)
                    mod.at(r, c) = 1.0 + 0.20 * std::cos(twopi * (r + py) / 4.0) * std::cos(twopi * (c + px) / 4.0);
            break;
        }
        case TextureKind::PixelGrid: {
            // 2px square lattice of dark sub-pixel gaps.
            const int op = static_cast<int>(uni(rng) * 2.0), oq = static_cast<int>(uni(rng) * 2.0);
            for (int r = 0; r < size; ++r)
                for (int c = 0; c < size; ++c)
                    if ((r + op) % 2 == 0 && (c + oq) % 2 == 0) mod.at(r, c) = 0.70;
            break;
        }
        case TextureKind::Smooth:
            break;  // mask surface carries no micro-texture
    }
    return mod;
}

SpectralCube render_sample(const GenConfig& cfg, const SampleRecord& rec, const Image& face,
                           const SpectralProfile& profile) {
    const int size = cfg.image_size;
    const uint64_t base = hash_combine(static_cast<uint64_t>(cfg.seed), static_cast<uint64_t>(rec.subject_id),
                                       static_cast<uint64_t>(rec.session), static_cast<uint64_t>(rec.sample_index),
                                       static_cast<uint64_t>(rec.species));
    const Image tex = texture_modulation(profile.texture_kind, hash_combine(base, 0x7e57u), size);

    // Masks present a low-pass copy of the face.
    Image base_face = face;
    if (profile.texture_kind == TextureKind::Smooth) base_face = box_blur3(box_blur3(face));

    SpectralCube cube(size, size);
    for (int b = 0; b < kNumBands; ++b) {
        auto rng = seeded_rng(hash_combine(base, 0x100u + static_cast<uint64_t>(b)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double refl = profile.mean_reflectance[static_cast<size_t>(b)];
        const double sigma = profile.band_noise_sigma[static_cast<size_t>(b)];
        ImageU16& out = cube.bands[static_cast<size_t>(b)];
        for (int r = 0; r < size; ++r) {
            for (int c = 0; c < size; ++c) {
                double v = refl * base_face.at(r, c) * tex.at(r, c) + sigma * gauss(rng);
                v = std::clamp(v, 0.0, 1.0);
                out.at(r, c) = static_cast<uint16_t>(std::lround(v * 65535.0));
            }
        }
    }
    return cube;
}

}  // namespace

DatasetManifest generate_dataset(const GenConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!std::filesystem::is_directory(out_dir)) throw std::runtime_error("cannot create: " + out_dir.string());

    DatasetManifest manifest;
    manifest.image_height = config.image_size;
    manifest.image_width = config.image_size;
    manifest.generator_seed = config.seed;
    manifest.root = out_dir;

    auto add_record = [&](int subject, int session, int sample, PAISpecies species) {
        SampleRecord rec;
        rec.subject_id = subject;
        rec.session = session;
        rec.sample_index = sample;
        rec.species = species;
        for (int b = 0; b < kNumBands; ++b) rec.files[static_cast<size_t>(b)] = band_filename(rec, b);
        manifest.records.push_back(std::move(rec));
    };

    for (int subj = 1; subj <= config.n_subjects; ++subj)
        for (int ses = 1; ses <= config.sessions_bonafide; ++ses)
            for (int samp = 1; samp <= config.samples_per_cell; ++samp)
                add_record(subj, ses, samp, PAISpecies::Bonafide);

    const int mask_subjects = std::min(config.mask_subjects, config.n_subjects);
    for (PAISpecies species : kAttackSpecies) {
        const bool is_mask = species_group(species) == PAIGroup::Mask;
        const int subjects = is_mask ? mask_subjects : config.n_subjects;
        const int samples = is_mask ? config.samples_per_cell : config.samples_per_attack;
        for (int subj = 1; subj <= subjects; ++subj)
            for (int samp = 1; samp <= samples; ++samp) add_record(subj, 1, samp, species);
    }

    for (const auto& rec : manifest.records) {
        const Image face =
            face_pattern(hash_combine(static_cast<uint64_t>(config.seed), 0xfaceu, static_cast<uint64_t>(rec.subject_id)),
                         config.image_size);
        const SpectralProfile& profile = config.profiles.at(species_group(rec.species));
        const SpectralCube cube = render_sample(config, rec, face, profile);
        save_cube(cube, rec, manifest);
    }

    save_manifest(manifest, out_dir / "manifest.json");
    return manifest;
}

namespace {

std::string texture_name(TextureKind k) {
    switch (k) {
        case TextureKind::Skin: return "skin";
        case TextureKind::Halftone: return "halftone";
        case TextureKind::PixelGrid: return "pixelgrid";
        case TextureKind::Smooth: return "smooth";
    }
    throw std::logic_error("unknown texture kind");
}

TextureKind texture_from_name(const std::string& s) {
    for (TextureKind k : {TextureKind::Skin, TextureKind::Halftone, TextureKind::PixelGrid, TextureKind::Smooth})
        if (texture_name(k) == s) return k;
    throw std::runtime_error("unknown texture kind: " + s);
}

}  // namespace

void save_gen_config(const GenConfig& config, const std::filesystem::path& json_path) {
    nlohmann::json j;
    j["n_subjects"] = config.n_subjects;
    j["sessions_bonafide"] = config.sessions_bonafide;
    j["samples_per_cell"] = config.samples_per_cell;
    j["samples_per_attack"] = config.samples_per_attack;
    j["mask_subjects"] = config.mask_subjects;
    j["image_size"] = config.image_size;
    j["seed"] = config.seed;
    for (const auto& [group, prof] : config.profiles) {
        nlohmann::json p;
        p["mean_reflectance"] = prof.mean_reflectance;
        p["band_noise_sigma"] = prof.band_noise_sigma;
        p["texture_kind"] = texture_name(prof.texture_kind);
        j["profiles"][group_name(group)] = std::move(p);
    }
    std::ofstream f(json_path);
    if (!f) throw std::runtime_error("cannot write config: " + json_path.string());
    f << j.dump(1) << "\n";
}

GenConfig load_gen_config(const std::filesystem::path& json_path) {
    std::ifstream f(json_path);
    if (!f) throw std::runtime_error("cannot open config: " + json_path.string());
    nlohmann::json j;
    f >> j;
    GenConfig cfg;
    if (j.contains("n_subjects")) cfg.n_subjects = j["n_subjects"].get<int>();
    if (j.contains("sessions_bonafide")) cfg.sessions_bonafide = j["sessions_bonafide"].get<int>();
    if (j.contains("samples_per_cell")) cfg.samples_per_cell = j["samples_per_cell"].get<int>();
    if (j.contains("samples_per_attack")) cfg.samples_per_attack = j["samples_per_attack"].get<int>();
    if (j.contains("mask_subjects")) cfg.mask_subjects = j["mask_subjects"].get<int>();
    if (j.contains("image_size")) cfg.image_size = j["image_size"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<int64_t>();
    if (j.contains("profiles")) {
        for (PAIGroup g : {PAIGroup::Bonafide, PAIGroup::Print, PAIGroup::Display, PAIGroup::Mask}) {
            const std::string name = group_name(g);
            if (!j["profiles"].contains(name)) continue;
            const auto& p = j["profiles"][name];
            SpectralProfile prof = cfg.profiles[g];
            if (p.contains("mean_reflectance")) prof.mean_reflectance = p["mean_reflectance"].get<std::array<double, 9>>();
            if (p.contains("band_noise_sigma")) prof.band_noise_sigma = p["band_noise_sigma"].get<std::array<double, 9>>();
            if (p.contains("texture_kind")) prof.texture_kind = texture_from_name(p["texture_kind"].get<std::string>());
            cfg.profiles[g] = prof;
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace mspad
