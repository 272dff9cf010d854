#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perpconj/field.hpp"
#include "perpconj/region.hpp"
#include "perpconj/spectra.hpp"

namespace perpconj {

struct SolverConfig {
    std::size_t seed_count = 256;        // lattice has ceil(seed_count^(1/n)) cells per dimension
    std::size_t max_newton_iters = 100;
    double root_tol = 1e-10;             // |field| at an accepted root
    double dedup_tol = 1e-6;             // roots closer than this are one root
    double velocity_floor = 1e-6;        // eps_v: |f| above this makes an F-root perpetual
    double backtrack_factor = 0.5;
    double min_step = 1e-12;             // smallest line-search step length
    double boundary_margin = 0.01;       // fraction of the box width Newton may leave the region by
    double degenerate_pivot = 1e-10;     // relative LU pivot below which a Jacobian is singular
    double multiple_root_factor = 10.0;  // pivot <= factor*sqrt(2 |H| root_tol): root is numerically multiple
    double classify_tol = 1e-8;          // classify_point threshold on |f| and |F|
    std::size_t continuum_warning_count = 10;
    std::uint64_t rng_seed = 1;

    /// Throws ValidationError (non-positive tolerances, root_tol >= dedup_tol, ...).
    void validate() const;
};

enum class PointKind { Fixed, Perpetual };

std::string_view to_string(PointKind kind);

struct CriticalPoint {
    PointKind kind = PointKind::Fixed;
    Vector location;
    double residual = 0.0;  // |f| for fixed points, |F| for perpetual points
    Vector velocity;        // f(location), signed
    double speed = 0.0;     // |velocity|
    Spectrum spectrum;      // lambda (eig Df) or mu (eig DF)
    bool spectrum_defined = true;  // false when the Jacobian can't be evaluated (e.g. sqrt at 0)
    bool degenerate = false;       // Jacobian of the solved field singular or undefined
    bool boundary = false;         // on a face of the region or just outside it
    double resolution = 0.0;       // location uncertainty of a multiple root, 0 for simple roots
};

struct CriticalPointSet {
    std::vector<CriticalPoint> points;
    std::vector<std::string> warnings;

    std::size_t isolated_count() const;
};

struct NewtonOutcome {
    bool converged = false;
    Vector point;
    double residual = 0.0;
    std::size_t iterations = 0;
    std::string failure;  // empty when converged
};

/// Damped Newton on |field|^2 with backtracking. Iterates are kept inside
/// `region` grown by cfg.boundary_margin; when the Jacobian is singular a
/// steepest-descent step is taken instead.
NewtonOutcome try_newton(const VectorField& field, std::span<const double> seed, const SolverConfig& cfg,
                         const std::optional<AnalysisRegion>& region = std::nullopt);

/// As try_newton, but throws NoConvergence carrying the iteration count and
/// last residual.
Vector newton_root(const VectorField& field, std::span<const double> seed, const SolverConfig& cfg,
                   const std::optional<AnalysisRegion>& region = std::nullopt);

/// Stratified seed lattice with deterministic jitter from cfg.rng_seed.
std::vector<Vector> seed_lattice(const AnalysisRegion& region, const SolverConfig& cfg);

/// Multi-start search for fixed and perpetual points of one system. Holds the
/// velocity field and its symbolic acceleration field.
class CriticalPointFinder {
public:
    CriticalPointFinder(VectorField f, SolverConfig cfg);

    const VectorField& velocity() const noexcept { return f_; }
    const VectorField& acceleration() const noexcept { return acc_; }
    const SolverConfig& config() const noexcept { return cfg_; }

    CriticalPointSet fixed_points(const AnalysisRegion& region, std::span<const Vector> extra_seeds = {}) const;
    CriticalPointSet perpetual_points(const AnalysisRegion& region, std::span<const Vector> extra_seeds = {}) const;

    /// Single Newton solve of the requested kind from `seed`, classified and
    /// filtered like a multi-start root.
    std::optional<CriticalPoint> solve_from(PointKind kind, std::span<const double> seed,
                                            const AnalysisRegion& region) const;

    std::optional<CriticalPoint> classify(std::span<const double> x) const;

    /// Fills velocity, spectrum and flags for a point of the given kind.
    CriticalPoint describe(PointKind kind, std::span<const double> x, double residual) const;

private:
    CriticalPointSet search(PointKind kind, const AnalysisRegion& region, std::span<const Vector> extra_seeds) const;

    VectorField f_;
    VectorField acc_;
    SolverConfig cfg_;
};

CriticalPointSet find_fixed_points(const VectorField& f, const AnalysisRegion& region, const SolverConfig& cfg);
CriticalPointSet find_perpetual_points(const VectorField& f, const AnalysisRegion& region, const SolverConfig& cfg);

/// FixedPoint when |f| <= classify_tol; PerpetualPoint when |F| <= classify_tol
/// and |f| > velocity_floor; nothing otherwise.
std::optional<CriticalPoint> classify_point(const VectorField& f, std::span<const double> x, const SolverConfig& cfg);

}  // namespace perpconj
