#pragma once

#include <vector>

#include <Eigen/Dense>

#include "specedge/assembly.hpp"
#include "specedge/discretization.hpp"
#include "specedge/operator_spec.hpp"

namespace specedge {

/// Band structure of the unperturbed fiber family over one Brillouin zone
/// [0, 2*pi/L).  Produced by sweep_bands and enriched in place by
/// refine_minimum / ground_eigenspace.
struct BandData {
    PeriodicOperatorSpec op;
    Discretization disc;

    BandData(PeriodicOperatorSpec o, Discretization d) : op(std::move(o)), disc(d) {}

    Eigen::VectorXd thetas;   ///< sweep nodes, uniform on [0, dual)
    Eigen::MatrixXd energies; ///< n_theta x n_bands, lowest eigenvalues per fiber

    double theta0 = 0.0;  ///< quasimomentum of the band minimum
    double Lambda0 = 0.0; ///< bottom of the spectrum, min_theta E_0(theta)
    double refine_tol = 0.0;

    // Filled by ground_eigenspace:
    int multiplicity = 0;            ///< dimension of the ground eigenspace at theta0
    double degeneracy_tol = 0.0;     ///< absolute energy tolerance actually used
    std::vector<GridFunction> ground; ///< quadrature-orthonormal, phase-fixed
    EigenSystem eig;                 ///< full decomposition at theta0 (Euclidean-orthonormal)
    double matrix_scale = 0.0;       ///< max |eigenvalue| at theta0

    bool has_eigenspace() const { return multiplicity > 0; }
};

struct SpectralGaps {
    double at_theta0 = 0.0; ///< E_n(theta0) - Lambda0 above the ground group
    double uniform = 0.0;   ///< min over the sweep of E_n(theta) - E_0(theta)
};

struct BandOptions {
    int n_theta = 64;
    int n_bands = 4;
    double refine_tol = 1e-12;   ///< golden-section theta resolution
    double degeneracy_tol = 0.0; ///< 0 = auto (1e3 * eps * matrix scale)
};

/// Samples the lowest n_bands fiber eigenvalues at n_theta uniform
/// quasimomenta.  theta0 / Lambda0 are set to the best sample (leftmost on
/// ties); call refine_minimum to polish them.
BandData sweep_bands(const PeriodicOperatorSpec& op, const Discretization& disc,
                     int n_theta, int n_bands);

/// Golden-section refinement of the band minimum inside the sample bracket
/// around the current theta0.  Keeps whichever of {best sample, refined point}
/// is lower; ties within noise resolve to the smaller theta so symmetric
/// minima land exactly on a sample node (typically theta = 0).
void refine_minimum(BandData& band, double tol);

/// Diagonalizes the fiber at theta0 with eigenvectors and identifies the
/// ground eigenspace: all levels within degeneracy_tol (absolute energy) of
/// the lowest.  Stores quadrature-orthonormal, phase-fixed ground functions.
/// degeneracy_tol <= 0 selects an automatic noise-scaled tolerance.
void ground_eigenspace(BandData& band, double degeneracy_tol);

/// Gap above the ground group.  Requires ground_eigenspace to have run.
/// Throws DegenerateEdge if the gap at theta0 is indistinguishable from
/// eigensolver noise; uniform is NaN when the sweep kept fewer than
/// multiplicity+1 bands.
SpectralGaps spectral_gap(const BandData& band);

/// Convenience pipeline: sweep, refine, eigenspace.
BandData compute_band_structure(const PeriodicOperatorSpec& op,
                                const Discretization& disc,
                                const BandOptions& opts = {});

} // namespace specedge
