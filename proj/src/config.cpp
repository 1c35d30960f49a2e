#include "tetrapol/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "tetrapol/report.hpp"

namespace tetrapol {

namespace {

double deg2rad(double d) { return d * M_PI / 180.0; }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key, const std::string& origin) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(origin + ": value '" + v + "' for key '" + key + "' is not a number");
    }
}

std::array<double, 4> to_quad(const std::string& v, const std::string& key,
                              const std::string& origin) {
    std::array<double, 4> out;
    std::stringstream ss(v);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= 4)
            throw ConfigError(origin + ": key '" + key + "' takes at most four values");
        out[i++] = to_double(trim(item), key, origin);
    }
    if (i == 1)
        out[1] = out[2] = out[3] = out[0];
    else if (i != 4)
        throw ConfigError(origin + ": key '" + key + "' needs one or four values");
    return out;
}

bool to_bool(const std::string& v, const std::string& key, const std::string& origin) {
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(origin + ": value '" + v + "' for key '" + key + "' is not a boolean");
}

} // namespace

PolarimeterModel DeviceConfig::to_model() const {
    const double x_sq_eff = optimal ? optimal_splitting_ratio().first : x_sq;
    PolarimeterModel m;
    m.ppbs = PpbsSpec::lossless(x_sq_eff, deg2rad(phase_t_deg), deg2rad(phase_r_deg));
    m.analyzer_t = {deg2rad(theta_t_deg), deg2rad(phi_t_deg)};
    m.analyzer_r = {deg2rad(theta_r_deg), deg2rad(phi_r_deg)};
    m.efficiencies = eta;
    m.dark_rate = dark;
    return m;
}

std::string DeviceConfig::echo() const {
    std::ostringstream os;
    if (optimal)
        os << "optimal=true";
    else
        os << "xsq=" << fmt_double(x_sq);
    os << " theta_t_deg=" << fmt_double(theta_t_deg) << " phi_t_deg=" << fmt_double(phi_t_deg)
       << " theta_r_deg=" << fmt_double(theta_r_deg) << " phi_r_deg=" << fmt_double(phi_r_deg)
       << " phase_t_deg=" << fmt_double(phase_t_deg) << " phase_r_deg=" << fmt_double(phase_r_deg)
       << " eta=" << fmt_double(eta[0]) << "," << fmt_double(eta[1]) << ","
       << fmt_double(eta[2]) << "," << fmt_double(eta[3])
       << " dark=" << fmt_double(dark[0]) << "," << fmt_double(dark[1]) << ","
       << fmt_double(dark[2]) << "," << fmt_double(dark[3]);
    return os.str();
}

DeviceConfig DeviceConfig::parse(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (kv.count(key))
            throw ConfigError(origin + ": duplicate key '" + key + "'");
        kv[key] = val;
    }

    DeviceConfig cfg;
    const bool has_xsq = kv.count("xsq") > 0;
    const bool has_optimal = kv.count("optimal") > 0;
    if (has_xsq && has_optimal && to_bool(kv["optimal"], "optimal", origin))
        throw ConfigError(origin + ": 'xsq' and 'optimal=true' are mutually exclusive");
    if (has_optimal)
        cfg.optimal = to_bool(kv["optimal"], "optimal", origin);
    if (has_xsq) {
        cfg.optimal = false;
        cfg.x_sq = to_double(kv["xsq"], "xsq", origin);
        if (!(cfg.x_sq > 0.5 && cfg.x_sq < 1.0))
            throw ConfigError(origin + ": xsq must lie strictly between 0.5 and 1 "
                              "(0.5 is a coplanar frame, 1 a plain polarizing splitter)");
    } else if (!cfg.optimal) {
        throw ConfigError(origin + ": either 'optimal=true' or an explicit 'xsq' is required");
    }
    kv.erase("xsq");
    kv.erase("optimal");

    const std::map<std::string, double*> scalar_keys{
        {"theta_t_deg", &cfg.theta_t_deg}, {"phi_t_deg", &cfg.phi_t_deg},
        {"theta_r_deg", &cfg.theta_r_deg}, {"phi_r_deg", &cfg.phi_r_deg},
        {"phase_t_deg", &cfg.phase_t_deg}, {"phase_r_deg", &cfg.phase_r_deg}};
    for (auto it = kv.begin(); it != kv.end();) {
        const auto sk = scalar_keys.find(it->first);
        if (sk != scalar_keys.end()) {
            *sk->second = to_double(it->second, it->first, origin);
            it = kv.erase(it);
        } else {
            ++it;
        }
    }
    if (kv.count("eta")) {
        cfg.eta = to_quad(kv["eta"], "eta", origin);
        kv.erase("eta");
    }
    if (kv.count("dark")) {
        cfg.dark = to_quad(kv["dark"], "dark", origin);
        kv.erase("dark");
    }
    if (!kv.empty())
        throw ConfigError(origin + ": unknown key '" + kv.begin()->first + "'");

    if (!(cfg.theta_t_deg >= 0.0 && cfg.theta_t_deg <= 90.0) ||
        !(cfg.theta_r_deg >= 0.0 && cfg.theta_r_deg <= 90.0))
        throw ConfigError(origin + ": analyzer theta must lie in [0, 90] degrees");
    for (double e : cfg.eta)
        if (!(e > 0.0 && e <= 1.0))
            throw ConfigError(origin + ": efficiencies must lie in (0, 1]");
    for (double d : cfg.dark)
        if (!(d >= 0.0))
            throw ConfigError(origin + ": dark rates must be non-negative");
    return cfg;
}

DeviceConfig DeviceConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

int GridAxis::count() const {
    if (!(step > 0.0))
        throw ConfigError("grid: step must be positive");
    if (stop < start)
        throw ConfigError("grid: stop must not precede start");
    return static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
}

std::pair<GridAxis, GridAxis> parse_grid(const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos)
        throw ConfigError("grid spec must be 'h0:h1:hstep,q0:q1:qstep'");
    auto parse_axis = [](const std::string& s) {
        GridAxis a;
        const auto c1 = s.find(':');
        const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ConfigError("grid axis must be 'start:stop:step', got '" + s + "'");
        a.start = to_double(trim(s.substr(0, c1)), "grid", "grid");
        a.stop = to_double(trim(s.substr(c1 + 1, c2 - c1 - 1)), "grid", "grid");
        a.step = to_double(trim(s.substr(c2 + 1)), "grid", "grid");
        a.count(); // validates
        return a;
    };
    return {parse_axis(spec.substr(0, comma)), parse_axis(spec.substr(comma + 1))};
}

std::pair<double, bool> parse_counts_spec(const std::string& spec) {
    if (spec == "exact")
        return {0.0, true};
    const double v = to_double(spec, "counts", "counts");
    if (!(v > 0.0))
        throw ConfigError("counts must be a positive number or 'exact'");
    return {v, false};
}

} // namespace tetrapol
