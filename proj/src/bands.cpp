#include "specedge/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specedge/errors.hpp"
#include "specedge/minimize.hpp"
#include "specedge/threading.hpp"

namespace specedge {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Absolute energy resolution of the dense Hermitian eigensolver: a generous
// multiple of eps * ||M||.  Two levels closer than this are numerically
// indistinguishable.
double noise_floor(double matrix_scale) {
    return 1e3 * kEps * std::max(1.0, matrix_scale);
}

double lowest_eigenvalue(const PeriodicOperatorSpec& op, const Discretization& disc,
                         double theta) {
    Eigen::VectorXd vals = eigenvalues_hermitian(assemble_bloch(op, disc, theta));
    return vals[0];
}

} // namespace

BandData sweep_bands(const PeriodicOperatorSpec& op, const Discretization& disc,
                     int n_theta, int n_bands) {
    if (n_theta < 4) throw ValidationError({"band sweep needs at least 4 quasimomenta"});
    if (n_bands < 1) throw ValidationError({"band sweep needs at least 1 band"});
    n_bands = std::min(n_bands, disc.N);

    BandData band(op, disc);
    const double dual = op.geometry().dual();
    band.thetas.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) band.thetas[i] = dual * i / n_theta;
    band.energies.resize(n_theta, n_bands);

    std::vector<double> sample_scale(static_cast<std::size_t>(n_theta), 0.0);
    parallel_for(n_theta, [&](int i) {
        Eigen::VectorXd vals =
            eigenvalues_hermitian(assemble_bloch(op, disc, band.thetas[i]));
        for (int b = 0; b < n_bands; ++b) band.energies(i, b) = vals[b];
        sample_scale[static_cast<std::size_t>(i)] =
            std::max(std::abs(vals[0]), std::abs(vals[vals.size() - 1]));
    });
    band.matrix_scale = *std::max_element(sample_scale.begin(), sample_scale.end());

    // Leftmost minimal sample; ties below solver noise also resolve left.
    int best = 0;
    const double tie = noise_floor(band.matrix_scale);
    for (int i = 1; i < n_theta; ++i)
        if (band.energies(i, 0) < band.energies(best, 0) - tie) best = i;
    band.theta0 = band.thetas[best];
    band.Lambda0 = band.energies(best, 0);
    return band;
}

void refine_minimum(BandData& band, double tol) {
    if (band.thetas.size() < 4) throw PreconditionNotMet("refine_minimum requires a band sweep");
    if (!(tol > 0.0)) throw ValidationError({"refine_minimum tolerance must be positive"});
    band.refine_tol = tol;

    const int n = static_cast<int>(band.thetas.size());
    const double dual = band.op.geometry().dual();
    const double tie = noise_floor(band.matrix_scale);

    int best = 0;
    for (int i = 1; i < n; ++i)
        if (band.energies(i, 0) < band.energies(best, 0) - tie) best = i;

    // Bracket the best sample by its cyclic neighbours on an unwrapped axis.
    double a = band.thetas[best] - dual / n;
    double b = band.thetas[best] + dual / n;

    const auto f = [&](double theta) {
        double t = std::fmod(theta, dual);
        if (t < 0.0) t += dual;
        return lowest_eigenvalue(band.op, band.disc, t);
    };

    MinimizeResult refined = golden_section_minimize(f, a, b, tol);
    double theta_ref = refined.x;
    double e_ref = refined.value;

    // Keep the refined point only when it is a genuine improvement over the
    // sample; within noise the sample node wins, so symmetric minima stay on
    // exact sweep nodes (theta0 = 0 in particular).
    if (e_ref < band.Lambda0 - tie) {
        double t = std::fmod(theta_ref, dual);
        if (t < 0.0) t += dual;
        if (t > dual - 10.0 * tol) t = 0.0;
        band.theta0 = t;
        band.Lambda0 = e_ref;
    }
}

void ground_eigenspace(BandData& band, double degeneracy_tol) {
    const Eigen::MatrixXcd fiber = assemble_bloch(band.op, band.disc, band.theta0);
    band.eig = eigensolve_hermitian(fiber, true);
    const int dim = static_cast<int>(band.eig.values.size());
    band.matrix_scale =
        std::max(std::abs(band.eig.values[0]), std::abs(band.eig.values[dim - 1]));
    band.Lambda0 = band.eig.values[0];

    const double tol =
        degeneracy_tol > 0.0 ? degeneracy_tol : noise_floor(band.matrix_scale);
    band.degeneracy_tol = tol;

    int n = 1;
    while (n < dim && band.eig.values[n] - band.eig.values[0] <= tol) ++n;
    if (n == dim)
        throw DegenerateEdge("entire fiber spectrum lies within the degeneracy tolerance");
    band.multiplicity = n;

    // Quadrature-orthonormal ground functions with a canonical phase: the
    // largest-magnitude node value is made real positive (leftmost on ties).
    const double scale = 1.0 / std::sqrt(band.disc.weight());
    band.ground.clear();
    band.ground.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXcd u = band.eig.vectors.col(k) * scale;
        int jmax = 0;
        double amax = std::abs(u[0]);
        for (int j = 1; j < dim; ++j) {
            double aj = std::abs(u[j]);
            if (aj > amax * (1.0 + 1e-12)) {
                amax = aj;
                jmax = j;
            }
        }
        std::complex<double> phase = std::conj(u[jmax]) / std::abs(u[jmax]);
        band.ground.push_back(GridFunction{band.disc, u * phase});
    }
}

SpectralGaps spectral_gap(const BandData& band) {
    if (!band.has_eigenspace())
        throw PreconditionNotMet("spectral_gap requires ground_eigenspace");
    const int n = band.multiplicity;
    const int dim = static_cast<int>(band.eig.values.size());
    if (n >= dim) throw DegenerateEdge("no level above the ground group");

    SpectralGaps gaps;
    gaps.at_theta0 = band.eig.values[n] - band.eig.values[0];
    const double threshold =
        10.0 * std::max(band.degeneracy_tol, noise_floor(band.matrix_scale));
    if (gaps.at_theta0 <= threshold)
        throw DegenerateEdge("spectral gap above the band minimum is below resolution");

    if (band.energies.cols() >= n + 1) {
        gaps.uniform = std::numeric_limits<double>::infinity();
        for (int i = 0; i < band.energies.rows(); ++i)
            gaps.uniform = std::min(gaps.uniform, band.energies(i, n) - band.energies(i, 0));
    } else {
        // Sweep did not keep enough bands to bound the gap away from theta0.
        gaps.uniform = std::numeric_limits<double>::quiet_NaN();
    }
    return gaps;
}

BandData compute_band_structure(const PeriodicOperatorSpec& op,
                                const Discretization& disc, const BandOptions& opts) {
    BandData band = sweep_bands(op, disc, opts.n_theta, opts.n_bands);
    refine_minimum(band, opts.refine_tol);
    ground_eigenspace(band, opts.degeneracy_tol);
    return band;
}

} // namespace specedge
