#include "dncsc/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dncsc/rng.hpp"

namespace dncsc {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::uint32_t> balanced_class_sizes(std::uint32_t n, std::uint32_t classes) {
    std::vector<std::uint32_t> sizes(classes, n / classes);
    for (std::uint32_t c = 0; c < n % classes; ++c) ++sizes[c];
    return sizes;
}

void emit_point(DataMatrix& out, std::size_t idx, double x, double y, std::uint32_t label,
                double noise, Rng& rng) {
    // Jitter is drawn even when noise == 0 so that the stream layout (and
    // hence the noiseless point positions) does not depend on the noise value.
    const double jx = rng.normal();
    const double jy = rng.normal();
    out.points(idx, 0) = x + noise * jx;
    out.points(idx, 1) = y + noise * jy;
    (*out.labels)[idx] = label;
}

}  // namespace

const char* shape_name(Shape shape) {
    switch (shape) {
        case Shape::kTwoMoons: return "two_moons";
        case Shape::kTwoSpirals: return "two_spirals";
        case Shape::kThreeCircles: return "three_circles";
        case Shape::kGaussianBlobs: return "gaussian_blobs";
    }
    return "unknown";
}

std::optional<Shape> shape_from_name(std::string_view name) {
    if (name == "two_moons") return Shape::kTwoMoons;
    if (name == "two_spirals") return Shape::kTwoSpirals;
    if (name == "three_circles") return Shape::kThreeCircles;
    if (name == "gaussian_blobs") return Shape::kGaussianBlobs;
    return std::nullopt;
}

std::uint32_t class_count(const SyntheticSpec& spec) {
    switch (spec.shape) {
        case Shape::kTwoMoons:
        case Shape::kTwoSpirals: return 2;
        case Shape::kThreeCircles: return 3;
        case Shape::kGaussianBlobs: return spec.blobs.count;
    }
    return 0;
}

DataMatrix generate(const SyntheticSpec& spec) {
    const std::uint32_t classes = class_count(spec);
    if (classes == 0) throw std::invalid_argument("generate: shape implies zero classes");
    if (spec.n < classes)
        throw std::invalid_argument("generate: n is below the class count of the shape");
    if (spec.noise < 0.0) throw std::invalid_argument("generate: negative noise");
    if (spec.shape == Shape::kGaussianBlobs && !(spec.blobs.box_max > spec.blobs.box_min))
        throw std::invalid_argument("generate: empty blob bounding box");
    if (spec.shape == Shape::kGaussianBlobs && spec.blobs.stddev < 0.0)
        throw std::invalid_argument("generate: negative blob stddev");

    DataMatrix out;
    out.points = Matrix(spec.n, 2);
    out.labels.emplace(spec.n, 0);
    Rng rng(spec.seed);
    const auto sizes = balanced_class_sizes(spec.n, classes);

    std::size_t idx = 0;
    switch (spec.shape) {
        case Shape::kTwoMoons:
            // Upper arc (cos t, sin t), lower arc (1 - cos t, 1/2 - sin t),
            // t in [0, pi].
            for (std::uint32_t c = 0; c < 2; ++c) {
                for (std::uint32_t i = 0; i < sizes[c]; ++i, ++idx) {
                    const double t = rng.uniform_double() * kPi;
                    const double x = c == 0 ? std::cos(t) : 1.0 - std::cos(t);
                    const double y = c == 0 ? std::sin(t) : 0.5 - std::sin(t);
                    emit_point(out, idx, x, y, c, spec.noise, rng);
                }
            }
            break;
        case Shape::kTwoSpirals:
            // Archimedean spiral r = t / (2 pi), t in [pi/2, 3.5 pi]; the
            // second arm is the first rotated by pi.
            for (std::uint32_t c = 0; c < 2; ++c) {
                for (std::uint32_t i = 0; i < sizes[c]; ++i, ++idx) {
                    const double t = 0.5 * kPi + rng.uniform_double() * 3.0 * kPi;
                    const double r = t / (2.0 * kPi);
                    const double sgn = c == 0 ? 1.0 : -1.0;
                    emit_point(out, idx, sgn * r * std::cos(t), sgn * r * std::sin(t), c,
                               spec.noise, rng);
                }
            }
            break;
        case Shape::kThreeCircles:
            for (std::uint32_t c = 0; c < 3; ++c) {
                const double r = 1.0 + c;
                for (std::uint32_t i = 0; i < sizes[c]; ++i, ++idx) {
                    const double t = rng.uniform_double() * 2.0 * kPi;
                    emit_point(out, idx, r * std::cos(t), r * std::sin(t), c, spec.noise, rng);
                }
            }
            break;
        case Shape::kGaussianBlobs: {
            Matrix centers(classes, 2);
            const double span = spec.blobs.box_max - spec.blobs.box_min;
            for (std::uint32_t c = 0; c < classes; ++c) {
                centers(c, 0) = spec.blobs.box_min + span * rng.uniform_double();
                centers(c, 1) = spec.blobs.box_min + span * rng.uniform_double();
            }
            for (std::uint32_t c = 0; c < classes; ++c) {
                for (std::uint32_t i = 0; i < sizes[c]; ++i, ++idx) {
                    emit_point(out, idx, centers(c, 0), centers(c, 1), c, spec.blobs.stddev,
                               rng);
                }
            }
            break;
        }
    }
    return out;
}

namespace {

bool parse_double(std::string_view cell, double& value) {
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    if (begin == end) return false;
    const auto res = std::from_chars(begin, end, value);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(value);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
        cells.back().pop_back();
    return cells;
}

[[noreturn]] void csv_error(const std::string& path, std::size_t row, std::size_t col,
                            const std::string& what) {
    std::ostringstream msg;
    msg << path << ": row " << row;
    if (col != 0) msg << ", column " << col;
    msg << ": " << what;
    throw std::runtime_error(msg.str());
}

}  // namespace

DataMatrix load_csv(const std::string& path, std::optional<std::uint32_t> label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    if (in.bad()) throw std::runtime_error(path + ": read failure");
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw std::runtime_error(path + ": file is empty");

    const auto first = split_row(lines.front());
    const std::size_t arity = first.size();
    if (label_column && *label_column >= arity)
        csv_error(path, 1, *label_column + 1, "label column out of range");

    // Header detection: the first row is a header when every non-label cell
    // fails to parse as a number. A partially numeric first row is data (and
    // its bad cells are reported as parse errors).
    bool header = true;
    for (std::size_t c = 0; c < arity; ++c) {
        if (label_column && c == *label_column) continue;
        double v;
        if (parse_double(first[c], v)) {
            header = false;
            break;
        }
    }

    const std::size_t first_data = header ? 1 : 0;
    const std::size_t n = lines.size() - first_data;
    if (n == 0) throw std::runtime_error(path + ": no data rows");
    const std::size_t d = label_column ? arity - 1 : arity;
    if (d == 0) throw std::runtime_error(path + ": no feature columns");

    DataMatrix out;
    out.points = Matrix(n, d);
    std::vector<std::uint32_t> labels;
    std::vector<std::string> label_names;  // first-occurrence dense mapping
    if (label_column) labels.reserve(n);

    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t file_row = first_data + r + 1;
        const auto cells = split_row(lines[first_data + r]);
        if (cells.size() != arity)
            csv_error(path, file_row, 0, "ragged row: expected " + std::to_string(arity) +
                                             " cells, got " + std::to_string(cells.size()));
        std::size_t j = 0;
        for (std::size_t c = 0; c < arity; ++c) {
            if (label_column && c == *label_column) {
                std::uint32_t id = 0;
                while (id < label_names.size() && label_names[id] != cells[c]) ++id;
                if (id == label_names.size()) label_names.push_back(cells[c]);
                labels.push_back(id);
                continue;
            }
            double v;
            if (!parse_double(cells[c], v))
                csv_error(path, file_row, c + 1,
                          "cannot parse '" + cells[c] + "' as a finite number");
            out.points(r, j++) = v;
        }
    }
    if (label_column) out.labels = std::move(labels);
    return out;
}

void write_csv(const DataMatrix& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    char buf[40];
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.points(i, j));
            if (j) out << ',';
            out << buf;
        }
        if (data.labels) out << ',' << (*data.labels)[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failure");
}

}  // namespace dncsc
