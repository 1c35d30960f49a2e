#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tetrapol/calibration.hpp"

namespace tetrapol {

/// Shortest decimal representation that parses back to exactly the same
/// double; locale-independent.  All numbers in report files go through
/// this so emitted files are byte-stable and round-trip exactly.
std::string fmt_double(double v);

/// Locale-independent strict parse; throws IoError on trailing garbage.
double parse_double(const std::string& s);

/// Contents of a calibration file.  Matrices are stored in normalized
/// units (per unit input intensity): the raw count-unit fit divided by
/// `scale`, the mean summed counts per calibration record.  Reconstruction
/// is unaffected by this scaling; it makes B and B^-1 comparable across
/// acquisition times.
struct CalibrationFile {
    CalibrationResult cal;
    double scale = 1.0;
    std::uint64_t seed = 0;
    std::string counts_spec; ///< echo of the --counts argument
    std::string device_echo; ///< canonical device config line
};

/// Rescales a calibration to different intensity units: b *= factor,
/// b_inv /= factor, sigma_inv /= factor.
CalibrationResult scale_calibration(const CalibrationResult& cal, double factor);

void write_calibration_file(const std::string& path, const CalibrationFile& f);
CalibrationFile read_calibration_file(const std::string& path);

struct SweepPoint {
    double hwp_deg = 0.0;
    double qwp_deg = 0.0;
    double fidelity = 0.0;
    double sigma_fidelity = 0.0;
    double n_total = 0.0;
};

struct SweepSummary {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

SweepSummary summarize(const std::vector<SweepPoint>& points);

/// Header fields echoed into the sweep CSV.
struct SweepFileMeta {
    std::string device_echo;
    std::string grid_spec;
    std::string counts_spec;
    double misalign_mrad = 0.0;
    std::uint64_t seed = 0;
};

void write_sweep_csv(const std::string& path, const SweepFileMeta& meta,
                     const std::vector<SweepPoint>& points, const SweepSummary& summary);

/// Reads the data rows of a sweep CSV (comment lines skipped).
std::vector<SweepPoint> read_sweep_csv(const std::string& path);

} // namespace tetrapol
