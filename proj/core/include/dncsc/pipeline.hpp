#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dncsc/dataset.hpp"
#include "dncsc/landmark.hpp"
#include "dncsc/similarity.hpp"

namespace dncsc {

struct CsvInput {
    std::string path;
    std::optional<std::uint32_t> label_column;
};

struct RunConfig {
    std::variant<CsvInput, SyntheticSpec> input;
    std::uint32_t k = 2;        // clusters
    std::uint32_t p = 1000;     // landmarks
    std::uint32_t knn_k = 5;    // nearest landmarks per point (K)
    std::uint32_t alpha = 0;    // selection rate; 0 = auto (200 below 100000 points, else 50)
    std::uint32_t kprime_factor = 10;  // K' = kprime_factor * K, capped at p
    std::uint32_t pprime_factor = 10;  // p' = pprime_factor * p, capped at N
    SelectionMethod selection = SelectionMethod::kDnc;
    KnnMethod knn = KnnMethod::kApprox;
    BandwidthPolicy sigma = BandwidthPolicy::mean_knn();
    std::uint64_t seed = 0;
    std::uint32_t repeats = 1;
};

/// One-line summary of a config, used in error messages and logs.
std::string config_summary(const RunConfig& config);

/// Resolved alpha for a dataset of n points.
std::uint32_t resolve_alpha(const RunConfig& config, std::size_t n);

struct PhaseTimings {
    double selection = 0.0;
    double similarity = 0.0;
    double partitioning = 0.0;
    double discretization = 0.0;
    double total = 0.0;  // whole run including data load and metrics
};

struct RepeatMetrics {
    double acc = 0.0;
    double nmi = 0.0;
};

struct RunReport {
    RunConfig config;  // echo, alpha resolved
    std::size_t n = 0;
    std::size_t d = 0;
    bool has_ground_truth = false;
    std::uint32_t landmarks = 0;  // actually produced (last repeat)
    double sigma = 0.0;           // bandwidth used (last repeat)
    PhaseTimings timings;         // phase entries are sums over repeats
    std::vector<RepeatMetrics> per_repeat;
    double acc_mean = 0.0, acc_std = 0.0;
    double nmi_mean = 0.0, nmi_std = 0.0;
    std::vector<std::uint32_t> labels;  // last repeat, row order = input order
    std::string labels_path;            // empty when not written
};

/// Any stage failure, tagged with the stage name and the config echo.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what, const std::string& config_line)
        : std::runtime_error("[" + stage + "] " + what + " (" + config_line + ")"),
          stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

/// Runs selection -> K-nearest landmarks -> bandwidth -> affinity ->
/// degrees -> reduced Laplacian -> eigensolve -> lift -> k-means, once per
/// repeat with seeds seed, seed+1, ...; aggregates ACC/NMI when ground truth
/// exists.
RunReport run_pipeline(const RunConfig& config);

enum class ReportFormat { kJson, kCsvSummary };

std::string emit_report(const RunReport& report, ReportFormat format);

/// Parses emit_report's JSON output back into a report (labels are not part
/// of the JSON and stay empty).
RunReport parse_report_json(const std::string& text);

/// One label per line, row order = input order.
void write_labels(const std::vector<std::uint32_t>& labels, const std::string& path);

}  // namespace dncsc
