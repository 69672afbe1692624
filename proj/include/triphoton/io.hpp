#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "triphoton/distinguishability.hpp"
#include "triphoton/fitting.hpp"
#include "triphoton/tomography.hpp"
#include "triphoton/types.hpp"

namespace triphoton::io {

// Matrix JSON:
//   {"rows": m, "cols": n, "polar": bool, "scale": s, "entries": [[[a,b],...],...]}
// [a,b] is [re, im] for polar=false and [magnitude, phase in units of pi]
// for polar=true; the optional global prefactor "scale" (default 1)
// multiplies every entry.
TransferMatrix read_matrix_json(const std::filesystem::path& path);
void write_matrix_json(const std::filesystem::path& path, const TransferMatrix& m,
                       bool polar = true);
std::string matrix_to_json_string(const TransferMatrix& m, bool polar = true);

// DelayScan CSV: header "delay_ps,value", one row per sample, LF endings.
// A sidecar "<path>.meta.json" carries the combination labels, the
// wavepacket sigma and the integration time.
struct ScanMetadata {
    std::string input_label;
    std::string output_label;
    double sigma_ps = 0.0;
    double integration_time_s = 60.0;
};
void write_delay_scan_csv(const std::filesystem::path& path, const DelayScan& scan,
                          const ScanMetadata& meta);
DelayScan read_delay_scan_csv(const std::filesystem::path& path);

// Singles CSV: header "output,input,counts".
void write_singles_csv(const std::filesystem::path& path, const SinglesCounts& counts);
SinglesCounts read_singles_csv(const std::filesystem::path& path);

// Visibility CSV: header "i,j,l,m,V,sigma,c0,cinf"; c0/cinf may be empty.
void write_visibilities_csv(const std::filesystem::path& path,
                            const std::vector<VisibilityRecord>& records);
std::vector<VisibilityRecord> read_visibilities_csv(const std::filesystem::path& path);

// FitResult JSON with every field of the struct.
void write_fit_result_json(const std::filesystem::path& path, const FitResult& fit);
FitResult read_fit_result_json(const std::filesystem::path& path);

// TomographyResult JSON: the matrix format plus "amplitude_sigma" (units of
// the polar presentation), "phase_sigma_pi_units" and "resamples".
void write_tomography_result_json(const std::filesystem::path& path,
                                  const TomographyResult& result,
                                  double q_vis_vs_input = -1.0);
TomographyResult read_tomography_result_json(const std::filesystem::path& path);

/// Provenance record written next to every CLI output.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::map<std::string, std::string> parameters;
    std::vector<std::string> outputs;
};
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace triphoton::io
