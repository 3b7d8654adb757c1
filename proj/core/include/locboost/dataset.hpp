#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "locboost/raster.hpp"
#include "locboost/types.hpp"

namespace locboost {

enum class Partition { Train, Validation, Test };

struct LabeledImage {
    std::string id; // manifest-relative image path
    GrayImage image;
    std::vector<Location> centers;
    Partition partition = Partition::Train;
};

struct Dataset {
    std::vector<LabeledImage> items;

    std::vector<const LabeledImage*> partition(Partition p) const;
};

// Binary 8-bit portable graymap.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

// One "x y" pair per line.
std::vector<Location> read_labels(const std::filesystem::path& path, int width, int height);
void write_labels(const std::filesystem::path& path, std::span<const Location> centers);

// Manifest lines: <image path> <label path> <train|validation|test>, paths
// relative to the manifest file.
Dataset load_dataset(const std::filesystem::path& manifest_path);

// Synthetic data: bright discs on a noisy background, centers recorded as
// ground truth. Centers are kept at least 2 * (max radius + kernel radius)
// apart so the truth is unambiguous.
struct SynthConfig {
    int train_images = 10;
    int validation_images = 10;
    int test_images = 10;
    int width = 64;
    int height = 64;
    int min_objects = 5;
    int max_objects = 5;
    int min_radius = 2;
    int max_radius = 4;
    int background_intensity = 60;
    int object_offset = 90;
    int noise_amplitude = 20;
    double kernel_radius = 5.0; // enters the separation guarantee only
    std::uint64_t seed = 1;
};

// Generates the dataset in memory; deterministic per seed.
Dataset synth(const SynthConfig& config);

// Generates and writes images/, labels/, and manifest.txt under out_dir.
// Returns the manifest path.
std::filesystem::path synth_to_directory(const SynthConfig& config,
                                         const std::filesystem::path& out_dir);

const char* partition_name(Partition p);
Partition partition_from_name(const std::string& name);

} // namespace locboost
