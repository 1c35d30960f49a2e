#include "tetrapol/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tetrapol {

std::string fmt_double(double v) {
    char buf[40];
    // integral values print without exponent; keeps angle and count
    // columns readable while remaining exact
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) <= 1e15) {
        const auto r = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
        return std::string(buf, r.ptr);
    }
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc{} || r.ptr != end)
        throw IoError("malformed number: '" + s + "'");
    return v;
}

CalibrationResult scale_calibration(const CalibrationResult& cal, double factor) {
    if (!(factor > 0.0))
        throw Error("scale_calibration: factor must be positive");
    CalibrationResult out = cal;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            out.instrument.b[i][j] = cal.instrument.b[i][j] * factor;
            out.instrument.b_inv[i][j] = cal.instrument.b_inv[i][j] / factor;
            out.instrument.sigma_inv[i][j] = cal.instrument.sigma_inv[i][j] / factor;
        }
    out.residual = cal.residual * factor;
    return out;
}

namespace {

void write_matrix_rows(std::ostream& os, const char* tag, const Mat4& m) {
    for (int i = 0; i < 4; ++i) {
        os << tag;
        for (int j = 0; j < 4; ++j)
            os << ',' << fmt_double(m[i][j]);
        os << '\n';
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(item);
    return out;
}

} // namespace

void write_calibration_file(const std::string& path, const CalibrationFile& f) {
    std::ostringstream os;
    os << "# tetrapol calibration v1\n";
    os << "# device: " << f.device_echo << '\n';
    os << "# counts: " << f.counts_spec << '\n';
    os << "# seed: " << f.seed << '\n';
    os << "# scale: " << fmt_double(f.scale) << '\n';
    os << "# cond: " << fmt_double(f.cal.instrument.cond) << '\n';
    os << "# residual: " << fmt_double(f.cal.residual) << '\n';
    os << "# matrices are per unit input intensity (raw count fit / scale)\n";
    os << "# columns: tag,c1,c2,c3,c4\n";
    write_matrix_rows(os, "b", f.cal.instrument.b);
    write_matrix_rows(os, "binv", f.cal.instrument.b_inv);
    write_matrix_rows(os, "sigma_binv", f.cal.instrument.sigma_inv);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write calibration file: " + path);
    out << os.str();
    if (!out)
        throw IoError("write failed: " + path);
}

CalibrationFile read_calibration_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open calibration file: " + path);

    CalibrationFile f;
    std::string line;
    int rows_b = 0, rows_binv = 0, rows_sigma = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto parse_field = [&line](const char* name) -> std::string {
                const std::string prefix = std::string("# ") + name + ": ";
                if (line.rfind(prefix, 0) == 0)
                    return line.substr(prefix.size());
                return "";
            };
            if (auto v = parse_field("scale"); !v.empty())
                f.scale = parse_double(v);
            else if (auto v2 = parse_field("seed"); !v2.empty()) {
                try {
                    f.seed = std::stoull(v2);
                } catch (const std::exception&) {
                    throw ConfigError(path + ": malformed seed '" + v2 + "'");
                }
            }
            else if (auto v3 = parse_field("cond"); !v3.empty())
                f.cal.instrument.cond = parse_double(v3);
            else if (auto v4 = parse_field("residual"); !v4.empty())
                f.cal.residual = parse_double(v4);
            else if (auto v5 = parse_field("device"); !v5.empty())
                f.device_echo = v5;
            else if (auto v6 = parse_field("counts"); !v6.empty())
                f.counts_spec = v6;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 5)
            throw ConfigError(path + ": malformed row '" + line + "'");
        Mat4* target = nullptr;
        int* row = nullptr;
        if (cells[0] == "b") {
            target = &f.cal.instrument.b;
            row = &rows_b;
        } else if (cells[0] == "binv") {
            target = &f.cal.instrument.b_inv;
            row = &rows_binv;
        } else if (cells[0] == "sigma_binv") {
            target = &f.cal.instrument.sigma_inv;
            row = &rows_sigma;
        } else {
            throw ConfigError(path + ": unknown row tag '" + cells[0] + "'");
        }
        if (*row >= 4)
            throw ConfigError(path + ": too many '" + cells[0] + "' rows");
        for (int j = 0; j < 4; ++j)
            (*target)[*row][j] = parse_double(cells[j + 1]);
        ++*row;
    }
    if (rows_b != 4 || rows_binv != 4 || rows_sigma != 4)
        throw ConfigError(path + ": incomplete calibration file");
    f.cal.mean_record_total = f.scale;
    return f;
}

SweepSummary summarize(const std::vector<SweepPoint>& points) {
    SweepSummary s;
    if (points.empty())
        return s;
    s.min = s.max = points[0].fidelity;
    double sum = 0.0;
    for (const SweepPoint& p : points) {
        sum += p.fidelity;
        s.min = std::min(s.min, p.fidelity);
        s.max = std::max(s.max, p.fidelity);
    }
    s.mean = sum / static_cast<double>(points.size());
    return s;
}

void write_sweep_csv(const std::string& path, const SweepFileMeta& meta,
                     const std::vector<SweepPoint>& points, const SweepSummary& summary) {
    std::ostringstream os;
    os << "# tetrapol sweep v1\n";
    os << "# device: " << meta.device_echo << '\n';
    os << "# grid: " << meta.grid_spec << '\n';
    os << "# counts: " << meta.counts_spec << '\n';
    os << "# misalign_mrad: " << fmt_double(meta.misalign_mrad) << '\n';
    os << "# seed: " << meta.seed << '\n';
    os << "# point seed: mix(seed, hwp_index, qwp_index); "
          "offsets use stream 1, counts stream 2\n";
    os << "# columns: hwp_deg,qwp_deg,fidelity,sigma_fidelity,n_total\n";
    for (const SweepPoint& p : points) {
        os << fmt_double(p.hwp_deg) << ',' << fmt_double(p.qwp_deg) << ','
           << fmt_double(p.fidelity) << ',' << fmt_double(p.sigma_fidelity) << ','
           << fmt_double(p.n_total) << '\n';
    }
    os << "# summary: mean=" << fmt_double(summary.mean) << " min=" << fmt_double(summary.min)
       << " max=" << fmt_double(summary.max) << '\n';

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write sweep file: " + path);
    out << os.str();
    if (!out)
        throw IoError("write failed: " + path);
}

std::vector<SweepPoint> read_sweep_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open sweep file: " + path);
    std::vector<SweepPoint> points;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const auto cells = split(line, ',');
        if (cells.size() != 5)
            throw ConfigError(path + ": malformed row '" + line + "'");
        points.push_back({parse_double(cells[0]), parse_double(cells[1]), parse_double(cells[2]),
                          parse_double(cells[3]), parse_double(cells[4])});
    }
    return points;
}

} // namespace tetrapol
