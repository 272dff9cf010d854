#include "perpconj/critical_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perpconj/error.hpp"

namespace perpconj {

namespace {

double norm2(std::span<const double> v) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double x : v) s += (x / scale) * (x / scale);
    return scale * std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

bool lexicographic_less(const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Descent direction when J is singular: -t J'r with t minimising the
// linearised residual |r - t J J'r|.
std::optional<Vector> gradient_step(const SquareMatrix& j, const Vector& r) {
    const std::size_t n = j.order();
    Vector g(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) g[a] += j(b, a) * r[b];
    }
    const Vector jg = j * g;
    double gg = 0.0, den = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        gg += g[a] * g[a];
        den += jg[a] * jg[a];
    }
    if (gg == 0.0 || den == 0.0 || !std::isfinite(gg / den)) return std::nullopt;
    const double t = gg / den;
    for (double& v : g) v *= -t;
    return g;
}

}  // namespace

std::string_view to_string(PointKind kind) { return kind == PointKind::Fixed ? "fixed" : "perpetual"; }

void SolverConfig::validate() const {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be positive");
    };
    positive(root_tol, "root_tol");
    positive(dedup_tol, "dedup_tol");
    positive(velocity_floor, "velocity_floor");
    positive(min_step, "min_step");
    positive(degenerate_pivot, "degenerate_pivot");
    positive(classify_tol, "classify_tol");
    if (!(root_tol < dedup_tol)) throw ValidationError("root_tol must be smaller than dedup_tol");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
        throw ValidationError("backtrack_factor must lie in (0, 1)");
    }
    if (!(multiple_root_factor >= 0.0)) throw ValidationError("multiple_root_factor must be non-negative");
    if (!(boundary_margin >= 0.0)) throw ValidationError("boundary_margin must be non-negative");
    if (seed_count == 0) throw ValidationError("seed_count must be at least 1");
    if (max_newton_iters == 0) throw ValidationError("max_newton_iters must be at least 1");
}

std::size_t CriticalPointSet::isolated_count() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const CriticalPoint& p) { return !p.degenerate; }));
}

NewtonOutcome try_newton(const VectorField& field, std::span<const double> seed, const SolverConfig& cfg,
                         const std::optional<AnalysisRegion>& region) {
    NewtonOutcome out;
    std::optional<AnalysisRegion> bounds;
    if (region) bounds = region->expanded(cfg.boundary_margin);

    const std::size_t n = field.dimension();
    Vector x(seed.begin(), seed.end());
    Vector r;
    try {
        r = field.value(x);
    } catch (const DomainError& e) {
        out.failure = std::string("seed outside the field's domain: ") + e.what();
        return out;
    }
    double rn = norm2(r);

    auto finish = [&] {
        // a few full steps to push the residual to rounding level
        for (int k = 0; k < 3 && rn > 0.0; ++k) {
            try {
                const Vector d = solve_linear(field.jacobian(x), r);
                Vector xn(n);
                for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] - d[i];
                if (bounds && !bounds->contains(xn)) break;
                Vector rn_vec = field.value(xn);
                const double nn = norm2(rn_vec);
                if (!(nn < rn)) break;
                x = std::move(xn);
                r = std::move(rn_vec);
                rn = nn;
            } catch (const Error&) {
                break;
            }
        }
        out.converged = true;
        out.point = x;
        out.residual = rn;
    };

    for (std::size_t it = 0; it < cfg.max_newton_iters; ++it) {
        out.iterations = it;
        if (rn <= cfg.root_tol) {
            finish();
            return out;
        }
        SquareMatrix j;
        try {
            j = field.jacobian(x);
        } catch (const DomainError& e) {
            out.failure = std::string("Jacobian undefined at iterate: ") + e.what();
            out.point = x;
            out.residual = rn;
            return out;
        }
        Vector d;
        try {
            d = solve_linear(j, r);
            for (double& v : d) v = -v;
        } catch (const SingularMatrix&) {
            auto g = gradient_step(j, r);
            if (!g) {
                out.failure = "singular Jacobian with no descent direction";
                out.point = x;
                out.residual = rn;
                return out;
            }
            d = std::move(*g);
        }

        bool accepted = false;
        bool left_region = false;
        for (double step = 1.0; step >= cfg.min_step; step *= cfg.backtrack_factor) {
            Vector xn(n);
            for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + step * d[i];
            if (bounds && !bounds->contains(xn)) {
                left_region = true;
                continue;
            }
            Vector rn_vec;
            try {
                rn_vec = field.value(xn);
            } catch (const DomainError&) {
                continue;
            }
            const double nn = norm2(rn_vec);
            if (nn * nn <= (1.0 - 1e-4 * step) * rn * rn) {
                x = std::move(xn);
                r = std::move(rn_vec);
                rn = nn;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            out.failure = left_region ? "iterate left the search region" : "line search found no descent";
            out.point = x;
            out.residual = rn;
            return out;
        }
    }
    out.iterations = cfg.max_newton_iters;
    if (rn <= cfg.root_tol) {
        finish();
        return out;
    }
    out.failure = "iteration cap reached";
    out.point = x;
    out.residual = rn;
    return out;
}

Vector newton_root(const VectorField& field, std::span<const double> seed, const SolverConfig& cfg,
                   const std::optional<AnalysisRegion>& region) {
    NewtonOutcome out = try_newton(field, seed, cfg, region);
    if (!out.converged) {
        throw NoConvergence("Newton did not converge: " + out.failure + " (last residual " +
                                std::to_string(out.residual) + " after " + std::to_string(out.iterations) +
                                " iterations)",
                            out.iterations, out.residual);
    }
    return out.point;
}

std::vector<Vector> seed_lattice(const AnalysisRegion& region, const SolverConfig& cfg) {
    const std::size_t n = region.dimension();
    std::size_t per_dim = 1;
    auto cells = [&](std::size_t m) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= m;
        return total;
    };
    while (cells(per_dim) < cfg.seed_count) ++per_dim;

    Rng rng(cfg.rng_seed);
    const std::size_t total = cells(per_dim);
    std::vector<Vector> seeds;
    seeds.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vector x(n);
        std::size_t rest = idx;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = rest % per_dim;
            rest /= per_dim;
            const double jitter = 0.5 * (rng.uniform() - 0.5);
            const auto& b = region.bounds[i];
            x[i] = b.lo + b.width() * (static_cast<double>(k) + 0.5 + jitter) / static_cast<double>(per_dim);
        }
        seeds.push_back(std::move(x));
    }
    return seeds;
}

CriticalPointFinder::CriticalPointFinder(VectorField f, SolverConfig cfg)
    : f_(std::move(f)), acc_(acceleration_field(f_)), cfg_(cfg) {
    cfg_.validate();
}

CriticalPoint CriticalPointFinder::describe(PointKind kind, std::span<const double> x, double residual) const {
    CriticalPoint cp;
    cp.kind = kind;
    cp.location.assign(x.begin(), x.end());
    cp.residual = residual;
    cp.velocity = f_.value(x);
    cp.speed = norm2(cp.velocity);

    const VectorField& solved = kind == PointKind::Fixed ? f_ : acc_;
    try {
        const SquareMatrix j = solved.jacobian(x);
        cp.spectrum = eigenvalues(j);
        const double rel_pivot = smallest_relative_pivot(j);
        cp.degenerate = rel_pivot < cfg_.degenerate_pivot;
        if (rel_pivot < 1e-3) {
            // Near a multiple root |J| ~ |H| d and |r| ~ |H| d^2 / 2, so Newton
            // only pins the root down to d ~ sqrt(2 tol / |H|).
            const JetValue jet = solved.jet(x, 2);
            double hmax = 0.0;
            for (double v : *jet.hessian) hmax = std::max(hmax, std::abs(v));
            const double tol = std::max(cfg_.root_tol, residual);
            const double pivot = rel_pivot * std::max(1.0, j.norm_inf());
            if (hmax > 0.0 && pivot <= cfg_.multiple_root_factor * std::sqrt(2.0 * hmax * tol)) {
                cp.degenerate = true;
                cp.resolution = std::sqrt(2.0 * tol / hmax);
            } else if (hmax == 0.0 && cp.degenerate) {
                cp.resolution = std::numeric_limits<double>::infinity();
            }
        }
    } catch (const DomainError&) {
        cp.spectrum_defined = false;
        cp.degenerate = true;
    } catch (const NoConvergence&) {
        cp.spectrum_defined = false;
        cp.degenerate = true;
    }
    return cp;
}

std::optional<CriticalPoint> CriticalPointFinder::solve_from(PointKind kind, std::span<const double> seed,
                                                             const AnalysisRegion& region) const {
    const VectorField& field = kind == PointKind::Fixed ? f_ : acc_;
    NewtonOutcome out = try_newton(field, seed, cfg_, region);
    if (!out.converged) return std::nullopt;
    try {
        if (kind == PointKind::Perpetual && norm2(f_.value(out.point)) <= cfg_.velocity_floor) return std::nullopt;
        CriticalPoint cp = describe(kind, out.point, out.residual);
        cp.boundary = !region.contains(cp.location) || region.face_distance(cp.location) <= cfg_.dedup_tol;
        return cp;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

CriticalPointSet CriticalPointFinder::search(PointKind kind, const AnalysisRegion& region,
                                             std::span<const Vector> extra_seeds) const {
    region.validate();
    if (region.dimension() != f_.dimension()) {
        throw ValidationError("region has " + std::to_string(region.dimension()) + " dimensions, system has " +
                              std::to_string(f_.dimension()));
    }
    std::vector<Vector> seeds = seed_lattice(region, cfg_);
    const AnalysisRegion grown = region.expanded(cfg_.boundary_margin);
    for (const auto& s : extra_seeds) {
        if (s.size() == f_.dimension() && grown.contains(s)) seeds.push_back(s);
    }

    std::vector<CriticalPoint> candidates;
    for (const auto& seed : seeds) {
        if (auto cp = solve_from(kind, seed, region)) candidates.push_back(std::move(*cp));
    }

    std::stable_sort(candidates.begin(), candidates.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.residual != b.residual) return a.residual < b.residual;
        return lexicographic_less(a.location, b.location);
    });
    // multiple roots are merged within their resolution (capped, so a
    // continuum still shows up as many points)
    double min_width = region.bounds[0].width();
    for (const auto& b : region.bounds) min_width = std::min(min_width, b.width());
    const double cap = std::max(100.0 * cfg_.dedup_tol, 1e-3 * min_width);
    auto radius = [&](const CriticalPoint& p) {
        return std::max(cfg_.dedup_tol, std::min(10.0 * p.resolution, cap));
    };
    CriticalPointSet set;
    for (auto& c : candidates) {
        const bool duplicate = std::any_of(set.points.begin(), set.points.end(), [&](const CriticalPoint& kept) {
            return distance(kept.location, c.location) <= std::max(radius(kept), radius(c));
        });
        if (!duplicate) set.points.push_back(std::move(c));
    }
    std::sort(set.points.begin(), set.points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return lexicographic_less(a.location, b.location); });

    const std::size_t degenerate = set.points.size() - set.isolated_count();
    if (degenerate > cfg_.continuum_warning_count) {
        set.warnings.push_back("degenerate continuum: " + std::to_string(degenerate) + " non-isolated " +
                               std::string(to_string(kind)) +
                               "-point roots with singular Jacobian; the list samples a continuum and is not an "
                               "enumeration of isolated points");
    }
    return set;
}

CriticalPointSet CriticalPointFinder::fixed_points(const AnalysisRegion& region,
                                                   std::span<const Vector> extra_seeds) const {
    return search(PointKind::Fixed, region, extra_seeds);
}

CriticalPointSet CriticalPointFinder::perpetual_points(const AnalysisRegion& region,
                                                       std::span<const Vector> extra_seeds) const {
    return search(PointKind::Perpetual, region, extra_seeds);
}

std::optional<CriticalPoint> CriticalPointFinder::classify(std::span<const double> x) const {
    try {
        const double speed = norm2(f_.value(x));
        if (speed <= cfg_.classify_tol) return describe(PointKind::Fixed, x, speed);
        const double acc = norm2(acc_.value(x));
        if (acc <= cfg_.classify_tol && speed > cfg_.velocity_floor) return describe(PointKind::Perpetual, x, acc);
    } catch (const DomainError&) {
    }
    return std::nullopt;
}

CriticalPointSet find_fixed_points(const VectorField& f, const AnalysisRegion& region, const SolverConfig& cfg) {
    return CriticalPointFinder(f, cfg).fixed_points(region);
}

CriticalPointSet find_perpetual_points(const VectorField& f, const AnalysisRegion& region, const SolverConfig& cfg) {
    return CriticalPointFinder(f, cfg).perpetual_points(region);
}

std::optional<CriticalPoint> classify_point(const VectorField& f, std::span<const double> x, const SolverConfig& cfg) {
    return CriticalPointFinder(f, cfg).classify(x);
}

}  // namespace perpconj
