#include "tetrapol/calibration.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace tetrapol {

namespace {

constexpr double kCondSingular = 1e8;
constexpr double kPurityTol = 1e-6;

Mat4 from_eigen(const Eigen::Matrix4d& e) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m[i][j] = e(i, j);
    return m;
}

double cond_of(const Eigen::MatrixXd& m) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

} // namespace

std::array<StokesVector, 4> calibration_quartet() {
    const double a = std::sqrt(1.0 / 3.0);
    const double b = std::sqrt(2.0 / 3.0);
    return {StokesVector{1.0, a, b, 0.0},
            StokesVector{1.0, a, -b, 0.0},
            StokesVector{1.0, -a, 0.0, -b},
            StokesVector{1.0, -a, 0.0, b}};
}

CalibrationResult calibrate_intensities(const std::vector<StokesVector>& prepared,
                                        const std::vector<std::array<double, 4>>& intensities,
                                        const std::vector<std::array<double, 4>>* variances) {
    const std::size_t k = prepared.size();
    if (intensities.size() != k || (variances && variances->size() != k))
        throw Error("calibrate: record arrays have mismatched lengths");
    if (k < 4)
        throw Coplanar("calibrate: at least four records are required");

    Eigen::MatrixXd sbar(4, static_cast<Eigen::Index>(k));
    Eigen::MatrixXd ibar(4, static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
        const StokesVector& s = prepared[c];
        if (std::abs(degree_of_polarization(s) - 1.0) > kPurityTol)
            throw NotPure("calibrate: prepared state " + std::to_string(c + 1) + " is not pure");
        sbar.col(static_cast<Eigen::Index>(c)) << s.s_m, s.s_x, s.s_y, s.s_z;
        for (int r = 0; r < 4; ++r)
            ibar(r, static_cast<Eigen::Index>(c)) = intensities[c][r];
    }

    if (cond_of(sbar) > kCondSingular)
        throw Coplanar("calibrate: prepared states do not span the Stokes space");

    // W is the (pseudo)inverse of the stacked state matrix: B = Ibar W.
    // For k == 4 this is the exact solve of B Sbar = Ibar; for k > 4 it
    // is the unweighted least-squares fit.
    const Eigen::MatrixXd w =
        sbar.completeOrthogonalDecomposition().pseudoInverse(); // k x 4
    const Eigen::Matrix4d b = ibar * w;

    CalibrationResult result;
    result.instrument.b = from_eigen(b);
    result.instrument.cond = cond_of(b);
    if (!std::isfinite(result.instrument.cond) || result.instrument.cond > kCondSingular)
        throw Singular("calibrate: fitted instrument matrix is not invertible");
    const Eigen::Matrix4d binv = b.inverse();
    result.instrument.b_inv = from_eigen(binv);

    // First-order propagation of independent per-count variances through
    // B = Ibar W and the matrix inverse: d(B^-1) = -B^-1 dB B^-1, so
    // d(B^-1)_ab / d(n_pk) = -(B^-1)_ap (W B^-1)_kb.
    if (variances) {
        const Eigen::MatrixXd wbinv = w * binv; // k x 4
        for (int a = 0; a < 4; ++a) {
            for (int col = 0; col < 4; ++col) {
                double var = 0.0;
                for (int p = 0; p < 4; ++p)
                    for (std::size_t rec = 0; rec < k; ++rec) {
                        const double g = binv(a, p) * wbinv(static_cast<Eigen::Index>(rec), col);
                        var += g * g * (*variances)[rec][p];
                    }
                result.instrument.sigma_inv[a][col] = std::sqrt(var);
            }
        }
    }

    result.residual = (b * sbar - ibar).norm();
    result.mean_record_total = ibar.sum() / static_cast<double>(k);
    return result;
}

CalibrationResult calibrate(const std::vector<CalibrationRecord>& records) {
    std::vector<StokesVector> prepared;
    std::vector<std::array<double, 4>> intensities;
    prepared.reserve(records.size());
    intensities.reserve(records.size());
    for (const CalibrationRecord& r : records) {
        prepared.push_back(r.prepared);
        intensities.push_back(r.counts.as_doubles());
    }
    return calibrate_intensities(prepared, intensities, &intensities);
}

ReconstructionResult reconstruct_intensities(const std::array<double, 4>& measured,
                                             const std::array<double, 4>& variances,
                                             const CalibrationResult& cal) {
    if (measured[0] + measured[1] + measured[2] + measured[3] <= 0.0)
        throw EmptyCounts("reconstruct: all counts are zero");

    const Mat4& binv = cal.instrument.b_inv;
    const std::array<double, 4> raw = cal.instrument.apply_inverse(measured);

    ReconstructionResult r;
    r.raw = {raw[0], raw[1], raw[2], raw[3]};
    if (r.raw.s_m <= 0.0)
        throw NegativeIntensity("reconstruct: recovered intensity is non-positive");

    for (int i = 0; i < 4; ++i) {
        double var = 0.0;
        for (int j = 0; j < 4; ++j)
            var += binv[i][j] * binv[i][j] * variances[j];
        r.sigma[i] = std::sqrt(var);
    }

    Mat4 cov_raw{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int p = 0; p < 4; ++p)
                cov_raw[i][j] += binv[i][p] * binv[j][p] * variances[p];

    // reduced components are ratios; propagate with the full first-order
    // jacobian so the numerator-denominator covariance is kept
    r.reduced = r.raw.reduced();
    const double inv_m = 1.0 / r.raw.s_m;
    const std::array<double, 3> red{r.reduced.r_x, r.reduced.r_y, r.reduced.r_z};
    std::array<std::array<double, 4>, 3> jac{};
    for (int i = 0; i < 3; ++i) {
        jac[i][0] = -red[i] * inv_m;
        jac[i][i + 1] = inv_m;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double c = 0.0;
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q)
                    c += jac[i][p] * cov_raw[p][q] * jac[j][q];
            r.cov_reduced[i][j] = c;
        }
    for (int i = 0; i < 3; ++i)
        r.sigma_reduced[i] = std::sqrt(std::max(r.cov_reduced[i][i], 0.0));

    const double norm = r.reduced.norm();
    double sigma_norm = 0.0;
    if (norm > 1e-12) {
        const std::array<double, 3> dir{red[0] / norm, red[1] / norm, red[2] / norm};
        double v = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                v += dir[i] * r.cov_reduced[i][j] * dir[j];
        sigma_norm = std::sqrt(std::max(v, 0.0));
    }
    r.physical = norm <= 1.0 + 3.0 * sigma_norm + 1e-12;
    r.projected = norm > 1.0 ? (1.0 / norm) * r.reduced : r.reduced;
    return r;
}

ReconstructionResult reconstruct(const CountVector& counts, const CalibrationResult& cal) {
    if (counts.total() == 0)
        throw EmptyCounts("reconstruct: all counts are zero");
    const auto meas = counts.as_doubles();
    return reconstruct_intensities(meas, meas, cal);
}

std::array<double, 4> reconstruction_uncertainty(const ReconstructionResult& r) {
    return r.sigma;
}

} // namespace tetrapol
