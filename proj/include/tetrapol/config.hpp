#pragma once

#include <cstdint>
#include <string>

#include "tetrapol/instrument.hpp"

namespace tetrapol {

/// Textual description of a polarimeter; parses from a flat key=value
/// file with '#' comments.  Angles are degrees at this boundary.
struct DeviceConfig {
    bool optimal = true;  ///< use the closed-form optimal splitting ratio
    double x_sq = 0.0;    ///< majority intensity fraction, (0.5, 1), when !optimal
    double theta_t_deg = 45.0;
    double phi_t_deg = 0.0;
    double theta_r_deg = 45.0;
    double phi_r_deg = 90.0;
    double phase_t_deg = 0.0;
    double phase_r_deg = 0.0;
    std::array<double, 4> eta{1.0, 1.0, 1.0, 1.0};
    std::array<double, 4> dark{0.0, 0.0, 0.0, 0.0};

    PolarimeterModel to_model() const;

    /// Canonical one-line serialization (used as config echo in output files).
    std::string echo() const;

    static DeviceConfig parse(const std::string& text, const std::string& origin);
    static DeviceConfig from_file(const std::string& path);
};

/// One sweep axis in degrees: start, start+step, ... up to stop (inclusive).
struct GridAxis {
    double start = 0.0;
    double stop = 174.0;
    double step = 6.0;

    int count() const;
    double at(int i) const { return start + step * i; }
};

/// Parses "h0:h1:hstep,q0:q1:qstep" into the two waveplate axes.
std::pair<GridAxis, GridAxis> parse_grid(const std::string& spec);

/// Parameters of a fidelity-map sweep.
struct SweepConfig {
    GridAxis hwp;
    GridAxis qwp;
    double mean_total = 1e5;     ///< expected counts per grid point
    bool exact = false;          ///< bypass Poisson noise, use expectations
    double misalign_sigma = 0.0; ///< waveplate misalignment, radians
    std::uint64_t seed = 1;
};

/// Parses the --counts argument: a positive number or the sentinel
/// "exact".  Returns {mean_total, exact}.
std::pair<double, bool> parse_counts_spec(const std::string& spec);

} // namespace tetrapol
