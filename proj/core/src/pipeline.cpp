#include "dncsc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dncsc/metrics.hpp"
#include "dncsc/partition.hpp"
#include "dncsc/rng.hpp"

namespace dncsc {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSelectionStream = 1;
constexpr std::uint64_t kDiscretizeStream = 2;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const char* knn_name(KnnMethod m) { return m == KnnMethod::kApprox ? "approx" : "exact"; }

void validate(const RunConfig& config) {
    if (config.k < 1) throw std::invalid_argument("k must be at least 1");
    if (config.p < config.k) throw std::invalid_argument("p must be at least k");
    if (config.knn_k < 1) throw std::invalid_argument("K must be at least 1");
    if (config.alpha == 1) throw std::invalid_argument("alpha must be 0 (auto) or at least 2");
    if (config.kprime_factor < 1) throw std::invalid_argument("kprime-factor must be at least 1");
    if (config.pprime_factor < 1) throw std::invalid_argument("pprime-factor must be at least 1");
    if (config.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
    if (config.sigma.kind == BandwidthPolicy::Kind::kFixed && !(config.sigma.value > 0.0))
        throw std::invalid_argument("fixed sigma must be positive");
}

template <typename Fn>
auto stage(const char* name, const RunConfig& config, double* bucket, Fn&& fn) {
    const auto start = Clock::now();
    try {
        auto result = fn();
        if (bucket) *bucket += seconds_since(start);
        return result;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), config_summary(config));
    }
}

void aggregate(const std::vector<double>& values, double& mean, double& stddev) {
    const std::size_t n = values.size();
    mean = 0.0;
    stddev = 0.0;
    if (n == 0) return;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(n);
    if (n < 2) return;
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    stddev = std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace

std::string config_summary(const RunConfig& config) {
    std::ostringstream s;
    if (const auto* csv = std::get_if<CsvInput>(&config.input)) {
        s << "input=" << csv->path;
    } else {
        const auto& spec = std::get<SyntheticSpec>(config.input);
        s << "synthetic=" << shape_name(spec.shape) << " n=" << spec.n
          << " noise=" << spec.noise;
    }
    s << " k=" << config.k << " p=" << config.p << " K=" << config.knn_k
      << " alpha=" << config.alpha << " selection=" << selection_name(config.selection)
      << " knn=" << knn_name(config.knn) << " seed=" << config.seed
      << " repeats=" << config.repeats;
    return s.str();
}

std::uint32_t resolve_alpha(const RunConfig& config, std::size_t n) {
    if (config.alpha != 0) return config.alpha;
    return n < 100000 ? 200 : 50;
}

RunReport run_pipeline(const RunConfig& config) {
    validate(config);
    const auto run_start = Clock::now();

    RunReport report;
    report.config = config;

    const DataMatrix data = stage("input", config, nullptr, [&] {
        if (const auto* csv = std::get_if<CsvInput>(&config.input))
            return load_csv(csv->path, csv->label_column);
        return generate(std::get<SyntheticSpec>(config.input));
    });
    report.n = data.n();
    report.d = data.dim();
    report.has_ground_truth = data.labels.has_value();

    const std::uint32_t alpha = resolve_alpha(config, data.n());
    report.config.alpha = alpha;

    std::vector<double> accs, nmis;
    for (std::uint32_t r = 0; r < config.repeats; ++r) {
        const std::uint64_t repeat_seed = config.seed + r;

        const LandmarkSet landmarks =
            stage("selection", config, &report.timings.selection, [&] {
                const std::uint64_t s = mix_seed(repeat_seed, kSelectionStream);
                switch (config.selection) {
                    case SelectionMethod::kKmeans:
                        return select_landmarks_kmeans(data.points, config.p, 5, s);
                    case SelectionMethod::kRandom:
                        return select_landmarks_random(data.points, config.p, s);
                    case SelectionMethod::kDnc:
                    default: {
                        const auto n32 = static_cast<std::uint32_t>(data.n());
                        const std::uint32_t p_prime = std::max(
                            alpha, std::min(config.pprime_factor * config.p, n32));
                        return select_landmarks_dnc(data.points, config.p, alpha, p_prime, 5,
                                                    s);
                    }
                }
            });
        report.landmarks = landmarks.size();

        const SparseAffinity affinity =
            stage("similarity", config, &report.timings.similarity, [&] {
                const std::uint32_t k_eff = std::min(config.knn_k, landmarks.size());
                const NeighborLists neighbors = [&] {
                    if (config.knn == KnnMethod::kExact)
                        return exact_knn(data.points, landmarks, k_eff);
                    const std::uint32_t k_prime = std::min(
                        std::max(config.kprime_factor * k_eff, k_eff), landmarks.size());
                    return approx_knn(data.points, landmarks, k_eff, k_prime);
                }();
                const double sigma = estimate_bandwidth(neighbors, config.sigma);
                report.sigma = sigma;
                return build_affinity(neighbors, sigma);
            });

        const SpectralEmbedding embedding =
            stage("partitioning", config, &report.timings.partitioning, [&] {
                const DegreePair deg = degrees(affinity);
                const Matrix l_r = reduced_laplacian(affinity, deg);
                const ReducedSpectrum spectrum =
                    solve_reduced(l_r, deg.kept_d_r(), config.k);
                return lift(affinity, deg, spectrum);
            });

        report.labels = stage("discretization", config, &report.timings.discretization, [&] {
            return cluster_embedding(embedding, config.k,
                                     mix_seed(repeat_seed, kDiscretizeStream));
        });

        if (data.labels) {
            const auto m = stage("metrics", config, nullptr, [&] {
                return RepeatMetrics{accuracy(*data.labels, report.labels),
                                     nmi(*data.labels, report.labels)};
            });
            report.per_repeat.push_back(m);
            accs.push_back(m.acc);
            nmis.push_back(m.nmi);
        }
    }

    aggregate(accs, report.acc_mean, report.acc_std);
    aggregate(nmis, report.nmi_mean, report.nmi_std);
    report.timings.total = seconds_since(run_start);
    return report;
}

namespace {

using nlohmann::ordered_json;

ordered_json config_to_json(const RunConfig& config) {
    ordered_json input;
    if (const auto* csv = std::get_if<CsvInput>(&config.input)) {
        input["type"] = "csv";
        input["path"] = csv->path;
        if (csv->label_column)
            input["label_column"] = *csv->label_column;
        else
            input["label_column"] = nullptr;
    } else {
        const auto& spec = std::get<SyntheticSpec>(config.input);
        input["type"] = "synthetic";
        input["shape"] = shape_name(spec.shape);
        input["n"] = spec.n;
        input["noise"] = spec.noise;
        input["blobs"] = {{"count", spec.blobs.count},
                          {"stddev", spec.blobs.stddev},
                          {"box_min", spec.blobs.box_min},
                          {"box_max", spec.blobs.box_max}};
        input["seed"] = spec.seed;
    }
    ordered_json sigma;
    if (config.sigma.kind == BandwidthPolicy::Kind::kMeanKnn) {
        sigma["policy"] = "mean_knn";
    } else {
        sigma["policy"] = "fixed";
        sigma["value"] = config.sigma.value;
    }
    return ordered_json{{"input", std::move(input)},
                        {"k", config.k},
                        {"p", config.p},
                        {"K", config.knn_k},
                        {"alpha", config.alpha},
                        {"kprime_factor", config.kprime_factor},
                        {"pprime_factor", config.pprime_factor},
                        {"selection", selection_name(config.selection)},
                        {"knn", knn_name(config.knn)},
                        {"sigma", std::move(sigma)},
                        {"seed", config.seed},
                        {"repeats", config.repeats}};
}

RunConfig config_from_json(const ordered_json& j) {
    RunConfig config;
    const auto& input = j.at("input");
    if (input.at("type") == "csv") {
        CsvInput csv;
        csv.path = input.at("path").get<std::string>();
        if (!input.at("label_column").is_null())
            csv.label_column = input.at("label_column").get<std::uint32_t>();
        config.input = std::move(csv);
    } else {
        SyntheticSpec spec;
        const auto shape = shape_from_name(input.at("shape").get<std::string>());
        if (!shape) throw std::runtime_error("parse_report_json: unknown shape");
        spec.shape = *shape;
        spec.n = input.at("n").get<std::uint32_t>();
        spec.noise = input.at("noise").get<double>();
        const auto& blobs = input.at("blobs");
        spec.blobs.count = blobs.at("count").get<std::uint32_t>();
        spec.blobs.stddev = blobs.at("stddev").get<double>();
        spec.blobs.box_min = blobs.at("box_min").get<double>();
        spec.blobs.box_max = blobs.at("box_max").get<double>();
        spec.seed = input.at("seed").get<std::uint64_t>();
        config.input = spec;
    }
    config.k = j.at("k").get<std::uint32_t>();
    config.p = j.at("p").get<std::uint32_t>();
    config.knn_k = j.at("K").get<std::uint32_t>();
    config.alpha = j.at("alpha").get<std::uint32_t>();
    config.kprime_factor = j.at("kprime_factor").get<std::uint32_t>();
    config.pprime_factor = j.at("pprime_factor").get<std::uint32_t>();
    config.selection = j.at("selection") == "kmeans"   ? SelectionMethod::kKmeans
                       : j.at("selection") == "random" ? SelectionMethod::kRandom
                                                       : SelectionMethod::kDnc;
    config.knn = j.at("knn") == "exact" ? KnnMethod::kExact : KnnMethod::kApprox;
    if (j.at("sigma").at("policy") == "fixed")
        config.sigma = BandwidthPolicy::fixed(j.at("sigma").at("value").get<double>());
    else
        config.sigma = BandwidthPolicy::mean_knn();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.repeats = j.at("repeats").get<std::uint32_t>();
    return config;
}

}  // namespace

std::string emit_report(const RunReport& report, ReportFormat format) {
    if (format == ReportFormat::kJson) {
        ordered_json j;
        j["config"] = config_to_json(report.config);
        j["data"] = {{"n", report.n}, {"d", report.d},
                     {"has_ground_truth", report.has_ground_truth}};
        j["landmarks"] = report.landmarks;
        j["sigma"] = report.sigma;
        j["timings"] = {{"selection", report.timings.selection},
                        {"similarity", report.timings.similarity},
                        {"partitioning", report.timings.partitioning},
                        {"discretization", report.timings.discretization},
                        {"total", report.timings.total}};
        if (report.has_ground_truth) {
            ordered_json per = ordered_json::array();
            for (const auto& m : report.per_repeat)
                per.push_back({{"acc", m.acc}, {"nmi", m.nmi}});
            j["metrics"] = {{"acc_mean", report.acc_mean},
                            {"acc_std", report.acc_std},
                            {"nmi_mean", report.nmi_mean},
                            {"nmi_std", report.nmi_std},
                            {"per_repeat", std::move(per)}};
        } else {
            j["metrics"] = nullptr;
        }
        j["labels_path"] = report.labels_path;
        return j.dump(2) + "\n";
    }

    // csv-summary: one header plus one row.
    std::ostringstream out;
    out << "input,n,d,k,p,K,alpha,kprime_factor,pprime_factor,selection,knn,sigma_policy,"
           "sigma,seed,repeats,landmarks,acc_mean,acc_std,nmi_mean,nmi_std,"
           "selection_seconds,similarity_seconds,partitioning_seconds,"
           "discretization_seconds,total_seconds\n";
    const auto& c = report.config;
    if (const auto* csv = std::get_if<CsvInput>(&c.input))
        out << csv->path;
    else
        out << shape_name(std::get<SyntheticSpec>(c.input).shape);
    char buf[40];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
    };
    out << ',' << report.n << ',' << report.d << ',' << c.k << ',' << c.p << ',' << c.knn_k
        << ',' << c.alpha << ',' << c.kprime_factor << ',' << c.pprime_factor << ','
        << selection_name(c.selection) << ',' << knn_name(c.knn) << ','
        << (c.sigma.kind == BandwidthPolicy::Kind::kMeanKnn ? "mean_knn" : "fixed");
    num(report.sigma);
    out << ',' << c.seed << ',' << c.repeats << ',' << report.landmarks;
    num(report.acc_mean);
    num(report.acc_std);
    num(report.nmi_mean);
    num(report.nmi_std);
    num(report.timings.selection);
    num(report.timings.similarity);
    num(report.timings.partitioning);
    num(report.timings.discretization);
    num(report.timings.total);
    out << '\n';
    return out.str();
}

RunReport parse_report_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    RunReport report;
    report.config = config_from_json(j.at("config"));
    report.n = j.at("data").at("n").get<std::size_t>();
    report.d = j.at("data").at("d").get<std::size_t>();
    report.has_ground_truth = j.at("data").at("has_ground_truth").get<bool>();
    report.landmarks = j.at("landmarks").get<std::uint32_t>();
    report.sigma = j.at("sigma").get<double>();
    const auto& t = j.at("timings");
    report.timings.selection = t.at("selection").get<double>();
    report.timings.similarity = t.at("similarity").get<double>();
    report.timings.partitioning = t.at("partitioning").get<double>();
    report.timings.discretization = t.at("discretization").get<double>();
    report.timings.total = t.at("total").get<double>();
    if (!j.at("metrics").is_null()) {
        const auto& m = j.at("metrics");
        report.acc_mean = m.at("acc_mean").get<double>();
        report.acc_std = m.at("acc_std").get<double>();
        report.nmi_mean = m.at("nmi_mean").get<double>();
        report.nmi_std = m.at("nmi_std").get<double>();
        for (const auto& e : m.at("per_repeat"))
            report.per_repeat.push_back(
                {e.at("acc").get<double>(), e.at("nmi").get<double>()});
    }
    report.labels_path = j.at("labels_path").get<std::string>();
    return report;
}

void write_labels(const std::vector<std::uint32_t>& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    for (const auto l : labels) out << l << '\n';
    if (!out) throw std::runtime_error(path + ": write failure");
}

}  // namespace dncsc
