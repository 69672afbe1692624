// Command-line front end: curve synthesis, fitting, tomography, Monte Carlo
// and design scoring on top of the triphoton library.  Exit codes: 0 success,
// 2 usage/format error, 3 numerical failure; errors go to stderr as JSON.
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triphoton/design_eval.hpp"
#include "triphoton/distinguishability.hpp"
#include "triphoton/errors.hpp"
#include "triphoton/fitting.hpp"
#include "triphoton/io.hpp"
#include "triphoton/linear_optics.hpp"
#include "triphoton/rng.hpp"
#include "triphoton/tomography.hpp"
#include "triphoton/types.hpp"
#include "triphoton/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace triphoton;

namespace {

std::uint64_t parse_seed_text(const std::string& text, const std::string& origin) {
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ValidationError(origin + " is not a valid unsigned 64-bit seed: '" + text +
                              "'");
    }
}

// --seed wins, then TRIPHOTON_SEED, then 0.
std::uint64_t resolve_seed(const CLI::Option* seed_option, std::uint64_t flag_value) {
    if (seed_option != nullptr && seed_option->count() > 0) return flag_value;
    if (const char* env = std::getenv("TRIPHOTON_SEED")) {
        return parse_seed_text(env, "TRIPHOTON_SEED");
    }
    return 0;
}

std::vector<int> parse_mode_list(const std::string& text, std::size_t expected,
                                 const std::string& what) {
    std::vector<int> modes;
    std::string field;
    std::istringstream in(text);
    while (std::getline(in, field, ',')) {
        try {
            std::size_t used = 0;
            modes.push_back(std::stoi(field, &used));
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw ValidationError(what + ": cannot parse mode '" + field + "' in '" +
                                  text + "'");
        }
    }
    if (modes.size() != expected) {
        throw ValidationError(what + ": expected " + std::to_string(expected) +
                              " comma-separated modes, got '" + text + "'");
    }
    return modes;
}

// "start:stop:step" in ps, inclusive of stop up to a step*1e-9 slack.
std::vector<double> parse_delay_grid(const std::string& text) {
    double start = 0.0, stop = 0.0, step = 0.0;
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos
                                                   : text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw ValidationError("--delays expects start:stop:step, got '" + text + "'");
    }
    try {
        start = std::stod(text.substr(0, first));
        stop = std::stod(text.substr(first + 1, second - first - 1));
        step = std::stod(text.substr(second + 1));
    } catch (const std::exception&) {
        throw ValidationError("--delays expects numeric start:stop:step, got '" + text +
                              "'");
    }
    if (!(step > 0.0)) throw ValidationError("--delays step must be positive");
    if (stop < start) throw ValidationError("--delays stop must not precede start");
    std::vector<double> grid;
    const double slack = step * 1e-9;
    for (int k = 0;; ++k) {
        const double delay = start + step * k;
        if (delay > stop + slack) break;
        grid.push_back(delay);
    }
    return grid;
}

void poisson_sample_scan(DelayScan& scan, double level, std::uint64_t seed) {
    for (std::size_t k = 0; k < scan.samples.size(); ++k) {
        auto gen = rng::engine(rng::substream_seed(seed, static_cast<std::uint64_t>(k)));
        const double mean = level * scan.samples[k].second;
        scan.samples[k].second =
            mean > 0.0 ? static_cast<double>(rng::poisson(gen, mean)) : 0.0;
    }
}

void write_scan_outputs(const fs::path& out, const DelayScan& scan, double sigma_ps,
                        io::RunManifest manifest) {
    io::write_delay_scan_csv(out, scan,
                             io::ScanMetadata{scan.input_label, scan.output_label,
                                              sigma_ps, scan.integration_time_s});
    manifest.outputs = {out.string(), out.string() + ".meta.json"};
    io::write_manifest(fs::path(out.string() + ".manifest.json"), manifest);
}

json fit_to_json(const FitResult& fit) {
    return json{{"model", "A*(1 - V*exp(-(delta-delta0)^2/(2*w^2)))"},
                {"baseline", fit.baseline},
                {"visibility", fit.visibility},
                {"center_ps", fit.center_ps},
                {"width_ps", fit.width_ps},
                {"residual_rms", fit.residual_rms},
                {"covariance_diag", fit.covariance_diag},
                {"converged", fit.converged},
                {"iterations", fit.iterations},
                {"threefold_visibility", fit.threefold_visibility()}};
}

FitMode parse_fit_mode(const std::string& text) {
    if (text == "dip") return FitMode::kDip;
    if (text == "peak") return FitMode::kPeak;
    if (text == "auto") return FitMode::kAuto;
    throw ValidationError("--mode must be dip, peak or auto, got '" + text + "'");
}

// Every (i<j) x (l<m) combination must be present exactly once.
void check_record_completeness(const SinglesCounts& singles,
                               const std::vector<VisibilityRecord>& records) {
    std::map<std::array<int, 4>, int> seen;
    for (const VisibilityRecord& record : records) ++seen[record.key()];
    std::vector<std::string> missing;
    for (int i = 1; i <= singles.inputs(); ++i) {
        for (int j = i + 1; j <= singles.inputs(); ++j) {
            for (int l = 1; l <= singles.outputs(); ++l) {
                for (int m = l + 1; m <= singles.outputs(); ++m) {
                    if (seen.find({i, j, l, m}) == seen.end()) {
                        missing.push_back("(" + std::to_string(i) + "," +
                                          std::to_string(j) + "," + std::to_string(l) +
                                          "," + std::to_string(m) + ")");
                    }
                }
            }
        }
    }
    if (!missing.empty()) {
        std::string keys;
        for (std::size_t k = 0; k < missing.size(); ++k) {
            if (k > 0) keys += ", ";
            keys += missing[k];
        }
        throw ValidationError("missing visibility records: " + keys);
    }
    for (const auto& [key, count] : seen) {
        if (count > 1) {
            throw ValidationError("duplicate visibility record (" +
                                  std::to_string(key[0]) + "," + std::to_string(key[1]) +
                                  "," + std::to_string(key[2]) + "," +
                                  std::to_string(key[3]) + ")");
        }
    }
}

struct SimulateHomArgs {
    std::string matrix_path;
    std::string inputs, outputs, delays;
    double sigma = 1.5;
    double counts = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    CLI::Option* counts_option = nullptr;
    CLI::Option* seed_option = nullptr;
};

struct SimulateThreefoldArgs {
    std::string matrix_path;
    std::string inputs = "1,2,3", outputs = "1,2,3", delays;
    int delayed = 1;
    double sigma = 1.5;
    double counts = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    CLI::Option* counts_option = nullptr;
    CLI::Option* seed_option = nullptr;
};

struct ReconstructArgs {
    std::string singles_path, visibilities_path;
    int montecarlo = 0;
    std::uint64_t seed = 0;
    std::string out;
    CLI::Option* seed_option = nullptr;
};

struct PredictArgs {
    std::string matrix_path;
    std::string out;
};

struct FitArgs {
    std::string scan_path;
    std::string mode = "auto";
    int resamples = 200;
    bool poisson_weighting = false;
    std::uint64_t seed = 0;
    std::string out;
    CLI::Option* seed_option = nullptr;
};

struct FomArgs {
    std::string matrix_path;
    std::string target_path;
    bool tritter = false;
    std::string out;
    CLI::Option* target_option = nullptr;
};

struct DatasetArgs {
    std::string matrix_path;
    double counts = 10000.0;
    bool poisson = false;
    std::uint64_t seed = 0;
    std::string out;
    CLI::Option* seed_option = nullptr;
};

void run_simulate_hom(const SimulateHomArgs& args) {
    const TransferMatrix m = io::read_matrix_json(args.matrix_path);
    const auto inputs = parse_mode_list(args.inputs, 2, "--inputs");
    const auto outputs = parse_mode_list(args.outputs, 2, "--outputs");
    const auto grid = parse_delay_grid(args.delays);
    DelayScan scan = hom_curve(m, {inputs[0], inputs[1]}, {outputs[0], outputs[1]}, grid,
                               args.sigma);
    io::RunManifest manifest;
    manifest.command = "simulate-hom";
    manifest.inputs = {args.matrix_path};
    manifest.parameters = {{"inputs", args.inputs},
                           {"outputs", args.outputs},
                           {"delays", args.delays},
                           {"sigma", std::to_string(args.sigma)}};
    if (args.counts_option->count() > 0) {
        if (!(args.counts >= 1.0)) {
            throw ValidationError("--counts must be at least 1");
        }
        const std::uint64_t seed = resolve_seed(args.seed_option, args.seed);
        poisson_sample_scan(scan, args.counts, seed);
        manifest.parameters["counts"] = std::to_string(args.counts);
        manifest.parameters["seed"] = std::to_string(seed);
    }
    write_scan_outputs(args.out, scan, args.sigma, std::move(manifest));
}

void run_simulate_threefold(const SimulateThreefoldArgs& args) {
    const TransferMatrix m = io::read_matrix_json(args.matrix_path);
    const auto inputs = parse_mode_list(args.inputs, 3, "--inputs");
    const auto outputs = parse_mode_list(args.outputs, 3, "--outputs");
    const auto grid = parse_delay_grid(args.delays);
    if (args.delayed < 1 || args.delayed > 3) {
        throw ValidationError("--delayed must name the 1st, 2nd or 3rd listed input");
    }
    DelayScan scan = threefold_curve(m, {inputs[0], inputs[1], inputs[2]},
                                     {outputs[0], outputs[1], outputs[2]}, args.delayed,
                                     grid, args.sigma);
    io::RunManifest manifest;
    manifest.command = "simulate-threefold";
    manifest.inputs = {args.matrix_path};
    manifest.parameters = {{"inputs", args.inputs},
                           {"outputs", args.outputs},
                           {"delayed", std::to_string(args.delayed)},
                           {"delays", args.delays},
                           {"sigma", std::to_string(args.sigma)}};
    if (args.counts_option->count() > 0) {
        if (!(args.counts >= 1.0)) {
            throw ValidationError("--counts must be at least 1");
        }
        const std::uint64_t seed = resolve_seed(args.seed_option, args.seed);
        poisson_sample_scan(scan, args.counts, seed);
        manifest.parameters["counts"] = std::to_string(args.counts);
        manifest.parameters["seed"] = std::to_string(seed);
    }
    write_scan_outputs(args.out, scan, args.sigma, std::move(manifest));
}

void run_reconstruct(const ReconstructArgs& args, bool force_montecarlo,
                     int default_resamples) {
    const SinglesCounts singles = io::read_singles_csv(args.singles_path);
    const std::vector<VisibilityRecord> records =
        io::read_visibilities_csv(args.visibilities_path);
    check_record_completeness(singles, records);

    const int resamples = args.montecarlo > 0 ? args.montecarlo
                          : force_montecarlo  ? default_resamples
                                              : 0;
    TomographyResult result =
        resamples > 0
            ? monte_carlo(singles, records,
                          MonteCarloOptions{resamples,
                                            resolve_seed(args.seed_option, args.seed), 0})
            : reconstruct(singles, records);

    const double q = q_vis(records, predict_visibilities(result.matrix));
    io::write_tomography_result_json(args.out, result, q);

    io::RunManifest manifest;
    manifest.command = force_montecarlo ? "montecarlo" : "reconstruct";
    manifest.inputs = {args.singles_path, args.visibilities_path};
    if (resamples > 0) {
        manifest.parameters["resamples"] = std::to_string(resamples);
        manifest.parameters["seed"] =
            std::to_string(resolve_seed(args.seed_option, args.seed));
    }
    manifest.outputs = {args.out};
    io::write_manifest(fs::path(args.out + ".manifest.json"), manifest);

    std::printf("q_vis %.17g\n", q);
}

void run_predict(const PredictArgs& args) {
    const TransferMatrix m = io::read_matrix_json(args.matrix_path);
    std::vector<VisibilityRecord> records = predict_visibilities(m);
    io::write_visibilities_csv(args.out, records);

    io::RunManifest manifest;
    manifest.command = "predict";
    manifest.inputs = {args.matrix_path};
    manifest.outputs = {args.out};

    if (m.rows() >= 3 && m.cols() >= 3) {
        fs::path threefold_path(args.out);
        threefold_path.replace_extension();
        threefold_path += ".threefold.json";
        const json doc{
            {"inputs", {1, 2, 3}},
            {"outputs", {1, 2, 3}},
            {"delayed_photon", 1},
            {"v3", threefold_visibility(m, {1, 2, 3}, {1, 2, 3}, 1)},
            {"v3_fully_distinguishable",
             threefold_visibility_fully_distinguishable(m, {1, 2, 3}, {1, 2, 3})}};
        std::ofstream out(threefold_path, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + threefold_path.string());
        out << doc.dump(2) << "\n";
        manifest.outputs.push_back(threefold_path.string());
    }
    io::write_manifest(fs::path(args.out + ".manifest.json"), manifest);
}

void run_fit(const FitArgs& args) {
    const DelayScan scan = io::read_delay_scan_csv(args.scan_path);
    FitOptions options;
    options.mode = parse_fit_mode(args.mode);
    options.poisson_weighting = args.poisson_weighting;
    const FitResult fit = fit_gaussian(scan, options);
    json doc = fit_to_json(fit);

    io::RunManifest manifest;
    manifest.command = "fit";
    manifest.inputs = {args.scan_path};
    manifest.parameters = {{"mode", args.mode},
                           {"resamples", std::to_string(args.resamples)}};

    if (args.resamples > 0) {
        BootstrapOptions bootstrap;
        bootstrap.resamples = args.resamples;
        bootstrap.seed = resolve_seed(args.seed_option, args.seed);
        bootstrap.mode = options.mode;
        bootstrap.poisson_weighting = options.poisson_weighting;
        const VisibilityEstimate estimate = visibility_uncertainty(scan, bootstrap);
        doc["bootstrap"] = {{"visibility_mean", estimate.visibility},
                            {"visibility_sigma", estimate.sigma},
                            {"failed_resamples", estimate.failed_resamples}};
        manifest.parameters["seed"] = std::to_string(bootstrap.seed);
    }

    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + args.out);
    out << doc.dump(2) << "\n";
    manifest.outputs = {args.out};
    io::write_manifest(fs::path(args.out + ".manifest.json"), manifest);
}

void run_fom(const FomArgs& args) {
    const TransferMatrix candidate = io::read_matrix_json(args.matrix_path);
    const bool use_tritter = args.tritter;
    if (use_tritter == (args.target_option->count() > 0)) {
        throw ValidationError("pass exactly one of --target <path> or --tritter");
    }
    TargetSpec target(use_tritter ? ideal_tritter() : io::read_matrix_json(args.target_path),
                      use_tritter ? "ideal tritter" : args.target_path);

    json per_input = json::array();
    for (int i = 1; i <= candidate.cols(); ++i) {
        per_input.push_back(fom_per_input(candidate, target, i));
    }
    const json doc{{"target", target.label},
                   {"per_input", std::move(per_input)},
                   {"overall", fom_overall(candidate, target)}};
    std::cout << doc.dump(2) << "\n";

    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + args.out);
        out << doc.dump(2) << "\n";
        io::RunManifest manifest;
        manifest.command = "fom";
        manifest.inputs = {args.matrix_path};
        if (!use_tritter) manifest.inputs.push_back(args.target_path);
        manifest.parameters = {{"target", target.label}};
        manifest.outputs = {args.out};
        io::write_manifest(fs::path(args.out + ".manifest.json"), manifest);
    }
}

// Synthetic singles + visibility dataset from a known matrix: expected counts
// at the given level, optionally Poisson-sampled.
void run_make_dataset(const DatasetArgs& args) {
    const TransferMatrix truth = args.matrix_path.empty()
                                     ? example_lossy_tritter()
                                     : io::read_matrix_json(args.matrix_path);
    if (!(args.counts >= 1.0)) {
        throw ValidationError("--counts must be at least 1");
    }
    const std::uint64_t seed = resolve_seed(args.seed_option, args.seed);
    auto gen = rng::engine(seed);

    SinglesCounts singles(truth.rows(), truth.cols());
    for (int l = 1; l <= truth.rows(); ++l) {
        for (int i = 1; i <= truth.cols(); ++i) {
            const double mean = args.counts * std::norm(truth.at_modes(l, i));
            const std::uint64_t count =
                args.poisson ? rng::poisson(gen, mean)
                             : static_cast<std::uint64_t>(std::llround(mean));
            singles.set_count(l, i, count);
        }
    }

    std::vector<VisibilityRecord> records;
    for (int i = 1; i <= truth.cols(); ++i) {
        for (int j = i + 1; j <= truth.cols(); ++j) {
            for (int l = 1; l <= truth.rows(); ++l) {
                for (int mm = l + 1; mm <= truth.rows(); ++mm) {
                    const PhotonConfiguration in{i, j}, outc{l, mm};
                    const double classical_mean =
                        args.counts * rate_distinguishable(truth, in, outc);
                    const double quantum_mean =
                        args.counts * rate_indistinguishable(truth, in, outc);
                    double cinf, c0;
                    if (args.poisson) {
                        cinf = static_cast<double>(rng::poisson(gen, classical_mean));
                        c0 = static_cast<double>(rng::poisson(gen, quantum_mean));
                    } else {
                        cinf = static_cast<double>(std::llround(classical_mean));
                        c0 = static_cast<double>(std::llround(quantum_mean));
                    }
                    if (!(cinf > 0.0)) {
                        throw NumericalError(
                            "count level too low: zero baseline coincidences for (" +
                            std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(l) + "," + std::to_string(mm) + ")");
                    }
                    VisibilityRecord record(i, j, l, mm, (cinf - c0) / cinf,
                                            std::sqrt(c0 / (cinf * cinf) +
                                                      c0 * c0 / (cinf * cinf * cinf)));
                    record.dip_counts = c0;
                    record.baseline_counts = cinf;
                    records.push_back(std::move(record));
                }
            }
        }
    }

    fs::create_directories(args.out);
    const fs::path dir(args.out);
    io::write_singles_csv(dir / "singles.csv", singles);
    io::write_visibilities_csv(dir / "visibilities.csv", records);
    io::write_matrix_json(dir / "matrix.json", truth);

    io::RunManifest manifest;
    manifest.command = "make-paper-dataset";
    if (!args.matrix_path.empty()) manifest.inputs = {args.matrix_path};
    manifest.parameters = {{"counts", std::to_string(args.counts)},
                           {"poisson", args.poisson ? "true" : "false"}};
    if (args.poisson) manifest.parameters["seed"] = std::to_string(seed);
    manifest.outputs = {(dir / "singles.csv").string(),
                        (dir / "visibilities.csv").string(),
                        (dir / "matrix.json").string()};
    io::write_manifest(dir / "manifest.json", manifest);
}

void emit_error(const std::string& type, const std::string& message) {
    const json doc{{"error", {{"type", type}, {"message", message}}}};
    std::cerr << doc.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiphoton interference simulator and transfer-matrix toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SimulateHomArgs hom;
    auto* hom_cmd = app.add_subcommand(
        "simulate-hom", "two-photon coincidence curve over a delay sweep");
    hom_cmd->add_option("--matrix", hom.matrix_path, "transfer matrix JSON")->required();
    hom_cmd->add_option("--inputs", hom.inputs, "input modes i,j")->required();
    hom_cmd->add_option("--outputs", hom.outputs, "output modes l,m")->required();
    hom_cmd->add_option("--delays", hom.delays, "delay grid start:stop:step in ps")
        ->required();
    hom_cmd->add_option("--sigma", hom.sigma, "wavepacket coherence width in ps");
    hom.counts_option = hom_cmd->add_option(
        "--counts", hom.counts, "Poisson count level (baseline scale per sample)");
    hom.seed_option = hom_cmd->add_option("--seed", hom.seed, "RNG seed");
    hom_cmd->add_option("--out", hom.out, "output CSV path")->required();
    hom_cmd->callback([&] { run_simulate_hom(hom); });

    SimulateThreefoldArgs threefold;
    auto* threefold_cmd = app.add_subcommand(
        "simulate-threefold", "three-photon coincidence curve with one delayed photon");
    threefold_cmd->add_option("--matrix", threefold.matrix_path, "transfer matrix JSON")
        ->required();
    threefold_cmd->add_option("--inputs", threefold.inputs, "input modes i,j,k");
    threefold_cmd->add_option("--outputs", threefold.outputs, "output modes l,m,n");
    threefold_cmd->add_option("--delayed", threefold.delayed,
                              "which listed input photon is delayed (1-3)");
    threefold_cmd
        ->add_option("--delays", threefold.delays, "delay grid start:stop:step in ps")
        ->required();
    threefold_cmd->add_option("--sigma", threefold.sigma,
                              "wavepacket coherence width in ps");
    threefold.counts_option = threefold_cmd->add_option(
        "--counts", threefold.counts, "Poisson count level (baseline scale per sample)");
    threefold.seed_option = threefold_cmd->add_option("--seed", threefold.seed, "RNG seed");
    threefold_cmd->add_option("--out", threefold.out, "output CSV path")->required();
    threefold_cmd->callback([&] { run_simulate_threefold(threefold); });

    ReconstructArgs reconstruct_args;
    auto* reconstruct_cmd = app.add_subcommand(
        "reconstruct", "transfer matrix from singles counts and visibilities");
    reconstruct_cmd
        ->add_option("singles", reconstruct_args.singles_path, "singles CSV")
        ->required();
    reconstruct_cmd
        ->add_option("visibilities", reconstruct_args.visibilities_path,
                     "visibility CSV")
        ->required();
    reconstruct_cmd->add_option("--montecarlo", reconstruct_args.montecarlo,
                                "Poisson Monte Carlo resamples (0 = point estimate)");
    reconstruct_args.seed_option =
        reconstruct_cmd->add_option("--seed", reconstruct_args.seed, "RNG seed");
    reconstruct_cmd->add_option("--out", reconstruct_args.out, "output JSON path")
        ->required();
    reconstruct_cmd->callback([&] { run_reconstruct(reconstruct_args, false, 0); });

    ReconstructArgs montecarlo_args;
    auto* montecarlo_cmd = app.add_subcommand(
        "montecarlo", "reconstruction with Poisson-resampled uncertainties");
    montecarlo_cmd->add_option("singles", montecarlo_args.singles_path, "singles CSV")
        ->required();
    montecarlo_cmd
        ->add_option("visibilities", montecarlo_args.visibilities_path, "visibility CSV")
        ->required();
    montecarlo_cmd->add_option("--resamples", montecarlo_args.montecarlo,
                               "number of resamples");
    montecarlo_args.seed_option =
        montecarlo_cmd->add_option("--seed", montecarlo_args.seed, "RNG seed");
    montecarlo_cmd->add_option("--out", montecarlo_args.out, "output JSON path")
        ->required();
    montecarlo_cmd->callback([&] { run_reconstruct(montecarlo_args, true, 200); });

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand(
        "predict", "two-photon visibilities (and three-photon visibility) of a matrix");
    predict_cmd->add_option("--matrix", predict_args.matrix_path, "transfer matrix JSON")
        ->required();
    predict_cmd->add_option("--out", predict_args.out, "output CSV path")->required();
    predict_cmd->callback([&] { run_predict(predict_args); });

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Gaussian dip/peak fit of a delay scan");
    fit_cmd->add_option("scan", fit_args.scan_path, "delay scan CSV")->required();
    fit_cmd->add_option("--mode", fit_args.mode, "dip, peak or auto");
    fit_cmd->add_option("--resamples", fit_args.resamples,
                        "bootstrap resamples for the visibility error bar (0 = off)");
    fit_cmd->add_flag("--poisson-weighting", fit_args.poisson_weighting,
                      "weight samples by 1/sqrt(counts)");
    fit_args.seed_option = fit_cmd->add_option("--seed", fit_args.seed, "RNG seed");
    fit_cmd->add_option("--out", fit_args.out, "output JSON path")->required();
    fit_cmd->callback([&] { run_fit(fit_args); });

    FomArgs fom_args;
    auto* fom_cmd = app.add_subcommand(
        "fom", "column-overlap figure of merit against a target matrix");
    fom_cmd->add_option("--matrix", fom_args.matrix_path, "candidate matrix JSON")
        ->required();
    fom_args.target_option =
        fom_cmd->add_option("--target", fom_args.target_path, "target matrix JSON");
    fom_cmd->add_flag("--tritter", fom_args.tritter, "score against the ideal tritter");
    fom_cmd->add_option("--out", fom_args.out, "optional output JSON path");
    fom_cmd->callback([&] { run_fom(fom_args); });

    DatasetArgs dataset_args;
    auto* dataset_cmd = app.add_subcommand(
        "make-paper-dataset",
        "synthetic singles + visibility dataset from a known matrix");
    dataset_cmd->add_option("--matrix", dataset_args.matrix_path,
                            "generating matrix JSON (default: bundled example)");
    dataset_cmd->add_option("--counts", dataset_args.counts,
                            "pair-generation count level");
    dataset_cmd->add_flag("--poisson", dataset_args.poisson,
                          "Poisson-sample the counts instead of rounding means");
    dataset_args.seed_option =
        dataset_cmd->add_option("--seed", dataset_args.seed, "RNG seed");
    dataset_cmd->add_option("--out", dataset_args.out, "output directory")->required();
    dataset_cmd->callback([&] { run_make_dataset(dataset_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage", e.what());
        return 2;
    } catch (const ValidationError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const NumericalError& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const Error& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 3;
    }
    return 0;
}
