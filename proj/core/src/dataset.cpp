#include "locboost/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "locboost/rng.hpp"
#include "locboost/textio.hpp"

namespace locboost {

namespace fs = std::filesystem;

std::vector<const LabeledImage*> Dataset::partition(Partition p) const {
    std::vector<const LabeledImage*> out;
    for (const LabeledImage& item : items) {
        if (item.partition == p) out.push_back(&item);
    }
    return out;
}

const char* partition_name(Partition p) {
    switch (p) {
    case Partition::Train: return "train";
    case Partition::Validation: return "validation";
    case Partition::Test: return "test";
    }
    return "train";
}

Partition partition_from_name(const std::string& name) {
    if (name == "train") return Partition::Train;
    if (name == "validation") return Partition::Validation;
    if (name == "test") return Partition::Test;
    throw std::invalid_argument("unknown partition: " + name);
}

namespace {

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in, const std::string& path) {
    std::string token;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (!std::isspace(ch)) {
            token.push_back(static_cast<char>(ch));
            while ((ch = in.get()) != EOF && !std::isspace(ch)) {
                token.push_back(static_cast<char>(ch));
            }
            return token;
        }
    }
    throw ParseError(path, 1, "truncated graymap header");
}

} // namespace

GrayImage read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image: " + path.string());
    const std::string p = path.string();
    if (pnm_token(in, p) != "P5") throw ParseError(p, 1, "not a binary graymap (expected P5)");
    const long long w = parse_int(pnm_token(in, p), p, 1);
    const long long h = parse_int(pnm_token(in, p), p, 1);
    const long long maxval = parse_int(pnm_token(in, p), p, 1);
    if (w <= 0 || h <= 0) throw ParseError(p, 1, "bad graymap extent");
    if (maxval != 255) throw ParseError(p, 1, "only 8-bit graymaps are supported");
    GrayImage image(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(image.cells().data()),
            static_cast<std::streamsize>(image.size()));
    if (in.gcount() != static_cast<std::streamsize>(image.size())) {
        throw ParseError(p, 1, "truncated graymap raster");
    }
    return image;
}

void write_pgm(const fs::path& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + path.string());
    out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.cells().data()),
              static_cast<std::streamsize>(image.size()));
    if (!out) throw std::runtime_error("failed writing image: " + path.string());
}

std::vector<Location> read_labels(const fs::path& path, int width, int height) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing label file: " + path.string());
    const std::string p = path.string();
    std::vector<Location> centers;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string xs, ys, extra;
        if (!(ss >> xs)) continue; // blank line
        if (!(ss >> ys) || (ss >> extra)) {
            throw ParseError(p, line_no, "expected 'x y'");
        }
        const long long x = parse_int(xs, p, line_no);
        const long long y = parse_int(ys, p, line_no);
        if (x < 0 || x >= width || y < 0 || y >= height) {
            throw ParseError(p, line_no, "label coordinate outside image extent");
        }
        centers.push_back({static_cast<int>(x), static_cast<int>(y)});
    }
    return centers;
}

void write_labels(const fs::path& path, std::span<const Location> centers) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write labels: " + path.string());
    for (const Location& c : centers) out << c.x << " " << c.y << "\n";
}

Dataset load_dataset(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path.string());
    const fs::path base = manifest_path.parent_path();
    const std::string p = manifest_path.string();
    Dataset dataset;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string image_path, label_path, partition;
        if (!(ss >> image_path)) continue;
        if (image_path[0] == '#') continue;
        if (!(ss >> label_path >> partition)) {
            throw ParseError(p, line_no, "expected '<image> <labels> <partition>'");
        }
        LabeledImage item;
        item.id = image_path;
        item.image = read_pgm(base / image_path);
        item.centers = read_labels(base / label_path, item.image.width(), item.image.height());
        try {
            item.partition = partition_from_name(partition);
        } catch (const std::invalid_argument& e) {
            throw ParseError(p, line_no, e.what());
        }
        dataset.items.push_back(std::move(item));
    }
    return dataset;
}

namespace {

std::vector<Location> place_centers(Rng& rng, const SynthConfig& cfg, int count,
                                    double min_separation) {
    const int margin = cfg.max_radius + 1;
    const int x_lo = margin;
    const int x_hi = cfg.width - 1 - margin;
    const int y_lo = margin;
    const int y_hi = cfg.height - 1 - margin;
    if (count > 0 && (x_hi < x_lo || y_hi < y_lo)) {
        throw std::invalid_argument("synth: image too small for the object radius");
    }
    const double sep_sq = min_separation * min_separation;
    for (int restart = 0; restart < 200; ++restart) {
        std::vector<Location> centers;
        bool ok = true;
        for (int i = 0; i < count && ok; ++i) {
            ok = false;
            for (int attempt = 0; attempt < 500; ++attempt) {
                const Location c{rng.next_int(x_lo, x_hi), rng.next_int(y_lo, y_hi)};
                bool clear = true;
                for (const Location& other : centers) {
                    if (static_cast<double>(squared_distance(c, other)) < sep_sq) {
                        clear = false;
                        break;
                    }
                }
                if (clear) {
                    centers.push_back(c);
                    ok = true;
                    break;
                }
            }
        }
        if (ok) return centers;
    }
    throw std::runtime_error("synth: cannot satisfy the center separation constraint");
}

LabeledImage synth_image(const SynthConfig& cfg, Partition partition, int index,
                         std::uint64_t stream) {
    Rng rng(Rng::mix(cfg.seed, stream));
    const int count = rng.next_int(cfg.min_objects, cfg.max_objects);
    const double min_separation = 2.0 * (cfg.max_radius + cfg.kernel_radius);

    LabeledImage item;
    item.partition = partition;
    {
        std::ostringstream name;
        name << "images/" << partition_name(partition) << "_";
        name.width(3);
        name.fill('0');
        name << index << ".pgm";
        item.id = name.str();
    }
    item.centers = place_centers(rng, cfg, count, min_separation);
    item.image = GrayImage(cfg.width, cfg.height);

    for (int y = 0; y < cfg.height; ++y) {
        for (int x = 0; x < cfg.width; ++x) {
            const int noise = rng.next_int(-cfg.noise_amplitude, cfg.noise_amplitude);
            int value = cfg.background_intensity + noise;
            item.image.at(x, y) = static_cast<std::uint8_t>(std::clamp(value, 0, 255));
        }
    }
    for (const Location& c : item.centers) {
        const int radius = rng.next_int(cfg.min_radius, cfg.max_radius);
        for (int dy = -radius; dy <= radius; ++dy) {
            for (int dx = -radius; dx <= radius; ++dx) {
                const int x = c.x + dx;
                const int y = c.y + dy;
                if (!item.image.contains(x, y)) continue;
                const double d = std::sqrt(static_cast<double>(dx * dx + dy * dy));
                // Hard disc with a half-pixel soft rim.
                const double cover = std::clamp(radius + 0.5 - d, 0.0, 1.0);
                if (cover <= 0.0) continue;
                const int value =
                    item.image.at(x, y) + static_cast<int>(std::lround(cfg.object_offset * cover));
                item.image.at(x, y) = static_cast<std::uint8_t>(std::clamp(value, 0, 255));
            }
        }
    }
    return item;
}

} // namespace

Dataset synth(const SynthConfig& cfg) {
    if (cfg.width <= 0 || cfg.height <= 0 || cfg.min_objects < 0 ||
        cfg.max_objects < cfg.min_objects || cfg.min_radius < 1 ||
        cfg.max_radius < cfg.min_radius || cfg.noise_amplitude < 0) {
        throw std::invalid_argument("invalid synth configuration");
    }
    Dataset dataset;
    std::uint64_t stream = 0;
    const std::pair<Partition, int> plan[] = {
        {Partition::Train, cfg.train_images},
        {Partition::Validation, cfg.validation_images},
        {Partition::Test, cfg.test_images},
    };
    for (const auto& [partition, count] : plan) {
        for (int i = 0; i < count; ++i) {
            dataset.items.push_back(synth_image(cfg, partition, i, stream++));
        }
    }
    return dataset;
}

std::filesystem::path synth_to_directory(const SynthConfig& cfg, const fs::path& out_dir) {
    const Dataset dataset = synth(cfg);
    fs::create_directories(out_dir / "images");
    fs::create_directories(out_dir / "labels");
    const fs::path manifest_path = out_dir / "manifest.txt";
    std::ofstream manifest(manifest_path);
    if (!manifest) {
        throw std::runtime_error("cannot write manifest: " + manifest_path.string());
    }
    for (const LabeledImage& item : dataset.items) {
        const std::string label_path =
            "labels/" + fs::path(item.id).stem().string() + ".txt";
        write_pgm(out_dir / item.id, item.image);
        write_labels(out_dir / label_path, item.centers);
        manifest << item.id << " " << label_path << " " << partition_name(item.partition)
                 << "\n";
    }
    return manifest_path;
}

} // namespace locboost
