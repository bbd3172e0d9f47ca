#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dncsc/pipeline.hpp"

namespace {

int run(const dncsc::RunConfig& config, const std::string& report_path,
        const std::string& labels_path, dncsc::ReportFormat format) {
    dncsc::RunReport report = dncsc::run_pipeline(config);

    if (!labels_path.empty()) {
        dncsc::write_labels(report.labels, labels_path);
        report.labels_path = labels_path;
    }

    const std::string text = dncsc::emit_report(report, format);
    if (report_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "error: [report] cannot open " << report_path << " for writing\n";
            return 2;
        }
        out << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Large-scale spectral clustering via divide-and-conquer landmark "
                 "selection, approximate K-nearest-landmark affinities and transfer-cut "
                 "bipartite partitioning"};
    app.get_formatter()->column_width(34);

    std::string input_path;
    std::optional<std::uint32_t> label_column;
    std::string synthetic_shape;
    std::uint32_t synth_n = 10000;
    double synth_noise = 0.05;
    std::uint32_t blob_count = 10;
    double blob_stddev = 0.5;
    std::pair<double, double> blob_box{-10.0, 10.0};

    auto* input_opt =
        app.add_option("--input", input_path, "CSV input file (comma-delimited)");
    auto* label_opt = app.add_option("--label-column", label_column,
                                     "0-based ground-truth column in the CSV input");
    auto* synth_opt =
        app.add_option("--synthetic", synthetic_shape,
                       "Generate a dataset: two_moons, two_spirals, three_circles, "
                       "gaussian_blobs")
            ->check(CLI::IsMember(
                {"two_moons", "two_spirals", "three_circles", "gaussian_blobs"}));
    input_opt->excludes(synth_opt);
    synth_opt->excludes(input_opt);
    app.add_option("--n", synth_n, "Synthetic point count")->needs(synth_opt);
    app.add_option("--noise", synth_noise, "Synthetic jitter standard deviation")
        ->needs(synth_opt);
    app.add_option("--blobs", blob_count, "Blob count for gaussian_blobs")->needs(synth_opt);
    app.add_option("--blob-std", blob_stddev, "Blob standard deviation")->needs(synth_opt);
    app.add_option("--box", blob_box, "Blob center bounding box, min max")->needs(synth_opt);

    dncsc::RunConfig config;
    app.add_option("--k", config.k, "Number of clusters")->capture_default_str();
    app.add_option("--p", config.p, "Number of landmarks")->capture_default_str();
    app.add_option("--K", config.knn_k, "Nearest landmarks per point")
        ->capture_default_str();
    app.add_option("--alpha", config.alpha,
                   "Selection rate (0 = auto: 200 below 100000 points, else 50)")
        ->capture_default_str();
    app.add_option("--kprime-factor", config.kprime_factor,
                   "Candidate factor: K' = factor * K, capped at p")
        ->capture_default_str();
    app.add_option("--pprime-factor", config.pprime_factor,
                   "Sample factor: p' = factor * p, capped at N")
        ->capture_default_str();

    std::string selection = "dnc";
    app.add_option("--selection", selection, "Landmark selection method")
        ->check(CLI::IsMember({"dnc", "kmeans", "random"}))
        ->capture_default_str();
    std::string knn = "approx";
    app.add_option("--knn", knn, "K-nearest-landmark search")
        ->check(CLI::IsMember({"approx", "exact"}))
        ->capture_default_str();
    std::string sigma = "mean_knn";
    app.add_option("--sigma", sigma, "Bandwidth policy: mean_knn or fixed:V")
        ->capture_default_str();

    app.add_option("--seed", config.seed, "Master seed")->capture_default_str();
    app.add_option("--repeats", config.repeats, "Repeated runs, seeds seed, seed+1, ...")
        ->capture_default_str();

    std::string report_path;
    std::string labels_path;
    std::string format = "json";
    app.add_option("--report", report_path, "Write the report here instead of stdout");
    app.add_option("--labels", labels_path, "Write last-repeat labels here, one per line");
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv-summary"}))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (input_path.empty() && synthetic_shape.empty()) {
        std::cerr << "error: [input] either --input or --synthetic is required\n";
        return 1;
    }

    if (!input_path.empty()) {
        config.input = dncsc::CsvInput{input_path, label_column};
    } else {
        dncsc::SyntheticSpec spec;
        spec.shape = *dncsc::shape_from_name(synthetic_shape);
        spec.n = synth_n;
        spec.noise = synth_noise;
        spec.blobs = {blob_count, blob_stddev, blob_box.first, blob_box.second};
        spec.seed = config.seed;
        config.input = spec;
    }
    (void)label_opt;

    config.selection = selection == "kmeans"   ? dncsc::SelectionMethod::kKmeans
                       : selection == "random" ? dncsc::SelectionMethod::kRandom
                                               : dncsc::SelectionMethod::kDnc;
    config.knn = knn == "exact" ? dncsc::KnnMethod::kExact : dncsc::KnnMethod::kApprox;
    if (sigma == "mean_knn") {
        config.sigma = dncsc::BandwidthPolicy::mean_knn();
    } else if (sigma.rfind("fixed:", 0) == 0) {
        try {
            config.sigma = dncsc::BandwidthPolicy::fixed(std::stod(sigma.substr(6)));
        } catch (const std::exception&) {
            std::cerr << "error: [config] cannot parse --sigma value '" << sigma << "'\n";
            return 1;
        }
    } else {
        std::cerr << "error: [config] --sigma must be mean_knn or fixed:V\n";
        return 1;
    }

    const auto fmt = format == "csv-summary" ? dncsc::ReportFormat::kCsvSummary
                                             : dncsc::ReportFormat::kJson;
    try {
        return run(config, report_path, labels_path, fmt);
    } catch (const dncsc::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
