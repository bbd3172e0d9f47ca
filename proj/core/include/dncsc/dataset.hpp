#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dncsc/matrix.hpp"

namespace dncsc {

/// N x d point set with optional ground-truth labels.
struct DataMatrix {
    Matrix points;
    std::optional<std::vector<std::uint32_t>> labels;

    std::size_t n() const { return points.rows(); }
    std::size_t dim() const { return points.cols(); }
};

enum class Shape { kTwoMoons, kTwoSpirals, kThreeCircles, kGaussianBlobs };

const char* shape_name(Shape shape);
std::optional<Shape> shape_from_name(std::string_view name);

struct BlobParams {
    std::uint32_t count = 10;
    double stddev = 0.5;
    double box_min = -10.0;
    double box_max = 10.0;
};

struct SyntheticSpec {
    Shape shape = Shape::kTwoMoons;
    std::uint32_t n = 0;
    double noise = 0.0;      // std of additive isotropic Gaussian jitter
    BlobParams blobs;        // only used by kGaussianBlobs
    std::uint64_t seed = 0;
};

/// Number of ground-truth classes the spec implies.
std::uint32_t class_count(const SyntheticSpec& spec);

/// Generates a labeled 2-D benchmark dataset. Deterministic in the spec
/// (including the seed); class sizes balanced to within one point.
DataMatrix generate(const SyntheticSpec& spec);

/// Reads a comma-delimited numeric file. A non-numeric first row is treated
/// as a header and skipped. If label_column is given, that column becomes
/// the label vector (values mapped to dense ids in first-occurrence order)
/// and is excluded from the points.
DataMatrix load_csv(const std::string& path,
                    std::optional<std::uint32_t> label_column = std::nullopt);

/// Writes points row-wise, label appended as the last column when present.
void write_csv(const DataMatrix& data, const std::string& path);

}  // namespace dncsc
