#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "quatgreen/borderline.hpp"
#include "quatgreen/ensemble.hpp"
#include "quatgreen/grid.hpp"
#include "quatgreen/rng.hpp"

namespace quatgreen {

using CMatrix = Eigen::MatrixXcd;

/// Upper bound on n * n_samples.
inline constexpr long long kSampleBudget = 1LL << 22;

struct SampleConfig {
    int n = 256;
    int n_samples = 1;
    std::uint64_t seed = 1;
    EnsembleSpec ens_h = Semicircle{1.0};
    EnsembleSpec ens_hp = Semicircle{1.0};
};

/// Throws ConfigError for n < 2, n_samples < 1 or a blown sample budget.
void validate(const SampleConfig& cfg);

/// Stream tags separating the independent draws of one sample.
enum StreamTag : std::uint32_t { kTagH = 1, kTagHp = 2, kTagPermuteH = 3, kTagPermuteHp = 4 };

/// Matrix size actually sampled: two_atoms needs an even size and rounds down.
int effective_size(const SampleConfig& cfg, std::vector<std::string>* warnings = nullptr);

/**
 * Hermitian sample of size n. Semicircle(r): E|H_ij|^2 = r/n. Wishart(c, r):
 * (-c/n) A A^dagger with A of size n x round(r n), matching the declared
 * transform's first two free cumulants. Atom ensembles: diagonal with atom
 * multiplicities round(w n), in a random order drawn from `perm_stream`.
 */
CMatrix sample_hermitian(const EnsembleSpec& ens, int n, const NormalStream& stream, const NormalStream& perm_stream);

/// X = H + i H' for sample index `sample`.
CMatrix sample_x(const SampleConfig& cfg, int n, std::uint32_t sample);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(CMatrix h);

/// (1/n) sum 1/(z - lambda).
cplx empirical_stieltjes(const std::vector<double>& eig, cplx z);

struct WishartCalibration {
    double scale = 0.0;   ///< multiplies (1/n) A A^dagger
    double aspect = 0.0;  ///< columns of A per row
    double max_rel_err = 0.0;
    bool validated = false;
    std::vector<cplx> points;
};

/// Checks the Wishart sampler against green() at five points around the support (2% tolerance).
WishartCalibration calibrate_wishart(const Wishart& w, std::uint64_t seed, int n = 512);

struct EigenData {
    std::vector<cplx> eigenvalues;
    CMatrix right;  ///< columns are right eigenvectors
    CMatrix left;   ///< rows are left eigenvectors, left * right = identity
};

/// Dense nonsymmetric eigendecomposition; left = inverse of right.
EigenData eig_full(const CMatrix& x);

/// O_a = |L_a|^2 |R_a|^2 with L_a R_a = 1.
std::vector<double> overlaps(const EigenData& ed);

double reconstruction_residual(const CMatrix& x, const EigenData& ed);
double biorthogonality_residual(const EigenData& ed);

struct SchurSpectrum {
    std::vector<cplx> eigenvalues;
    std::vector<double> overlaps;  ///< empty unless requested
};

/// Eigenvalues (and optionally overlaps) from the triangular Schur factor,
/// skipping the unitary accumulation the overlaps do not need.
SchurSpectrum schur_spectrum(CMatrix x, bool with_overlaps);

struct Histogram2D {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    int nx = 1, ny = 1;
    std::vector<double> values;

    Histogram2D() = default;
    Histogram2D(double x0_, double x1_, double y0_, double y1_, int nx_, int ny_);
    double bin_w() const { return (x1 - x0) / nx; }
    double bin_h() const { return (y1 - y0) / ny; }
    /// -1 outside the box.
    int index(cplx z) const;
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

/// Deposits O_a / N at lambda_a, normalised per unit area and sample.
Histogram2D overlap_field(const std::vector<cplx>& eig, const std::vector<double>& ovl, int n_matrix,
                          const Histogram2D& layout, int n_samples = 1);

struct McOptions {
    int coarse_bins = 8;        ///< per axis, for the L1 density distance
    /// Bin size for the empirical support; 0 picks the size giving about
    /// `support_bin_count` eigenvalues per bin inside the analytic domain,
    /// so the 5% threshold sits near one eigenvalue and strays do not form islands.
    double fine_bin = 0.0;
    double support_bin_count = 20.0;
    double threshold_fraction = 0.05;
    double centre_disc_fraction = 0.35;
    bool overlaps = true;
    int workers = 0;
};

struct McReport {
    SampleConfig cfg;
    int n_effective = 0;
    long long n_eigenvalues = 0;
    Histogram2D density_hist;
    Histogram2D overlap_hist;
    double l1_density = 0.0;
    double outside_mass = 0.0;
    double support_hausdorff = 0.0;
    double support_bin = 0.0;
    double support_threshold = 0.0;  ///< counts per fine bin
    int empirical_components = 0;  ///< outer boundaries (islands)
    int empirical_holes = 0;       ///< boundaries enclosed by another one
    std::vector<Polyline> empirical_support;
    double overlap_center_ratio = NonHoloSolution::kNaN;
    double centre_radius = 0.0;
    cplx centre{0.0, 0.0};
    double centre_empirical = NonHoloSolution::kNaN;
    double centre_analytic = NonHoloSolution::kNaN;
    double imag_min = 0.0;
    double imag_max = 0.0;
    struct Stieltjes {
        cplx z, empirical, analytic;
        double error = 0.0, tol = 0.0;
        bool ok = true;
    };
    std::vector<Stieltjes> stieltjes;  ///< H then H' at z = 3i
    std::optional<WishartCalibration> calibration_h, calibration_hp;
    std::vector<std::string> warnings;
};

/// Samples, diagonalises and compares with the analytic grid and borderline.
/// Per-sample results are merged in sample order, so the report does not
/// depend on the worker count.
McReport run_comparison(const SampleConfig& cfg, const SpectralGrid& grid, const BorderlineCurve& analytic,
                        const McOptions& opts = {});

nlohmann::json to_json(const McReport& r);

/// Even-odd point-in-polygon test against a closed polyline.
bool point_in_polyline(const Point2& p, const Polyline& pl);

/// Distance from a point to the nearest segment of `curves`.
double distance_to_polylines(const Point2& p, const std::vector<Polyline>& curves);

/// Symmetric Hausdorff distance between two polyline sets (point-to-segment).
double hausdorff(const std::vector<Polyline>& a, const std::vector<Polyline>& b);

}  // namespace quatgreen
