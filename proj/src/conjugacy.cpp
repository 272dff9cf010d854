#include "perpconj/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "perpconj/error.hpp"

namespace perpconj {

namespace {

constexpr PointKind kKinds[] = {PointKind::Fixed, PointKind::Perpetual};

std::size_t slot(PointKind k) { return k == PointKind::Fixed ? 0 : 1; }

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::string format_point(std::span<const double> x) {
    std::string out = "(";
    char buf[32];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", x[i]);
        if (i) out += ", ";
        out += buf;
    }
    return out + ")";
}

std::string kind_phrase(PointKind k) { return k == PointKind::Fixed ? "fixed point" : "perpetual point"; }

std::optional<Vector> try_apply(const TransformationMap& h, std::span<const double> x) {
    try {
        return h.apply(x);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

}  // namespace

std::string_view to_string(TheoremId id) {
    switch (id) {
        case TheoremId::FlowConjugacy: return "flow";
        case TheoremId::FixedPointMapping: return "t1";
        case TheoremId::PerpetualPointMapping: return "t2";
        case TheoremId::SpectrumPreservation: return "t3";
        case TheoremId::NewPoints: return "r1";
    }
    return "?";
}

std::optional<TheoremId> parse_theorem_id(std::string_view name) {
    for (TheoremId id : all_theorems()) {
        if (to_string(id) == name) return id;
    }
    return std::nullopt;
}

std::vector<TheoremId> parse_theorem_list(std::string_view list) {
    std::vector<TheoremId> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = list.find(',', pos);
        const std::string_view item = list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos);
        auto id = parse_theorem_id(item);
        if (!id) {
            throw ValidationError("unknown theorem '" + std::string(item) + "' (expected flow, t1, t2, t3, r1)");
        }
        if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<TheoremId> all_theorems() {
    return {TheoremId::FlowConjugacy, TheoremId::FixedPointMapping, TheoremId::PerpetualPointMapping,
            TheoremId::SpectrumPreservation, TheoremId::NewPoints};
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::NotApplicable: return "not-applicable";
        case Verdict::Advisory: return "advisory";
    }
    return "?";
}

void VerifyConfig::validate() const {
    solver.validate();
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be positive");
    };
    if (match_tol < 0.0) throw ValidationError("match_tol must be non-negative");
    positive(spectrum_tol, "spectrum_tol");
    positive(similarity_tol, "similarity_tol");
    positive(flow_tol, "flow tolerance");
    positive(flow_time, "flow time T");
    if (flow_samples < 2) throw ValidationError("flow check needs at least two samples");
    if (flow_points == 0) throw ValidationError("flow check needs at least one initial point");
}

bool ConjugacyReport::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const TheoremCheck& c) { return c.verdict == Verdict::Fails; });
}

ConjugacyVerifier::ConjugacyVerifier(VectorField f, TransformationMap h, VectorField g, VerifyConfig cfg,
                                     std::optional<AnalysisRegion> region)
    : f_(std::move(f)),
      h_(std::move(h)),
      g_(std::move(g)),
      cfg_(std::move(cfg)),
      source_region_(region ? *region : h_.domain()),
      f_finder_(f_, cfg_.solver),
      g_finder_(g_, cfg_.solver) {
    cfg_.validate();
    const std::size_t n = f_.dimension();
    if (h_.dimension() != n || g_.dimension() != n) {
        throw ValidationError("f, h and g must have the same dimension");
    }
    source_region_.validate();
    if (source_region_.dimension() != n) throw ValidationError("region dimension does not match the system");
    target_region_ = h_.image_region(source_region_);

    if (h_.declared_linear()) {
        Vector center(n);
        for (std::size_t i = 0; i < n; ++i) {
            center[i] = 0.5 * (source_region_.bounds[i].lo + source_region_.bounds[i].hi);
        }
        try {
            invertible_ = smallest_relative_pivot(h_.field().jacobian(center)) >= cfg_.solver.degenerate_pivot;
        } catch (const DomainError&) {
            invertible_ = false;
        }
    }
}

std::optional<Vector> ConjugacyVerifier::preimage(std::span<const double> y) const {
    const std::size_t n = h_.dimension();
    const AnalysisRegion grown = source_region_.expanded(cfg_.solver.boundary_margin);
    const double tol = 1e-9 * std::max(1.0, norm2(y));
    auto accept = [&](const Vector& x) -> bool {
        if (!grown.contains(x)) return false;
        auto hx = try_apply(h_, x);
        return hx && distance(*hx, y) <= tol;
    };

    if (h_.declared_linear()) {
        if (!invertible_) return std::nullopt;
        Vector x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 0.5 * (source_region_.bounds[i].lo + source_region_.bounds[i].hi);
        }
        try {
            // two passes of x <- x - Dh^-1 (h(x) - y) absorb rounding in the first
            for (int pass = 0; pass < 2; ++pass) {
                Vector r = h_.apply(x);
                for (std::size_t i = 0; i < n; ++i) r[i] -= y[i];
                const Vector d = solve_linear(h_.field().jacobian(x), r);
                for (std::size_t i = 0; i < n; ++i) x[i] -= d[i];
            }
        } catch (const Error&) {
            return std::nullopt;
        }
        if (accept(x)) return x;
        return std::nullopt;
    }

    SystemDefinition shifted = h_.field().definition();
    shifted.name += "_preimage";
    for (std::size_t i = 0; i < n; ++i) {
        shifted.components[i] = algebra::difference(shifted.components[i], Expression::constant(y[i]));
    }
    const VectorField residual(std::move(shifted));
    SolverConfig scfg = cfg_.solver;
    scfg.seed_count = n == 1 ? 16 : (n == 2 ? 25 : 27);
    scfg.root_tol = 1e-12 * std::max(1.0, norm2(y));
    if (!(scfg.root_tol < scfg.dedup_tol)) scfg.root_tol = 0.1 * scfg.dedup_tol;
    for (const Vector& seed : seed_lattice(source_region_, scfg)) {
        NewtonOutcome out = try_newton(residual, seed, scfg, source_region_);
        if (out.converged && accept(out.point)) return out.point;
    }
    return std::nullopt;
}

void ConjugacyVerifier::prepare() {
    if (prepared_) return;
    for (PointKind k : kKinds) {
        auto& fs = f_sets_[slot(k)];
        fs = k == PointKind::Fixed ? f_finder_.fixed_points(source_region_) : f_finder_.perpetual_points(source_region_);
        std::vector<Vector> images;
        for (const auto& p : fs.points) {
            if (auto y = try_apply(h_, p.location)) images.push_back(std::move(*y));
        }
        g_sets_[slot(k)] = k == PointKind::Fixed ? g_finder_.fixed_points(target_region_, images)
                                                 : g_finder_.perpetual_points(target_region_, images);
    }

    // Points of g the f search missed: solve for f's point from the preimage.
    const double match_tol = cfg_.effective_match_tol();
    for (PointKind k : kKinds) {
        auto& fs = f_sets_[slot(k)];
        const auto& gs = g_sets_[slot(k)];
        auto& pre = g_preimages_[slot(k)];
        pre.assign(gs.points.size(), std::nullopt);
        bool added = false;
        for (std::size_t j = 0; j < gs.points.size(); ++j) {
            const Vector& y = gs.points[j].location;
            const CriticalPoint* hit = nullptr;
            for (const auto& p : fs.points) {
                auto hx = try_apply(h_, p.location);
                if (hx && distance(*hx, y) <= match_tol) {
                    hit = &p;
                    break;
                }
            }
            if (hit) {
                pre[j] = hit->location;
                continue;
            }
            pre[j] = preimage(y);
            if (!pre[j]) continue;
            // where Dh is singular the preimage is poorly conditioned; prefer
            // a critical point of f (of either kind) that maps onto y
            std::optional<CriticalPoint> cp;
            for (PointKind other : kKinds) {
                auto c = f_finder_.solve_from(other, *pre[j], source_region_);
                if (!c) continue;
                auto hx = try_apply(h_, c->location);
                if (!hx || distance(*hx, y) > match_tol) continue;
                pre[j] = c->location;
                if (other == k) cp = std::move(c);
                break;
            }
            if (!cp) continue;
            const bool duplicate = std::any_of(fs.points.begin(), fs.points.end(), [&](const CriticalPoint& p) {
                return distance(p.location, cp->location) <= cfg_.solver.dedup_tol;
            });
            if (!duplicate) {
                fs.points.push_back(std::move(*cp));
                added = true;
            }
        }
        if (added) {
            std::sort(fs.points.begin(), fs.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
                return std::lexicographical_compare(a.location.begin(), a.location.end(), b.location.begin(),
                                                    b.location.end());
            });
        }
    }
    prepared_ = true;
}

const CriticalPointSet& ConjugacyVerifier::source_points(PointKind kind) {
    prepare();
    return f_sets_[slot(kind)];
}

const CriticalPointSet& ConjugacyVerifier::target_points(PointKind kind) {
    prepare();
    return g_sets_[slot(kind)];
}

std::vector<ConjugacyVerifier::Pairing> ConjugacyVerifier::pair(PointKind kind) const {
    const auto& fs = f_sets_[slot(kind)];
    const auto& gs = g_sets_[slot(kind)];
    const double match_tol = cfg_.effective_match_tol();
    std::vector<Pairing> out;
    for (std::size_t i = 0; i < fs.points.size(); ++i) {
        auto hx = try_apply(h_, fs.points[i].location);
        if (!hx) continue;
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < gs.points.size(); ++j) {
            const double d = distance(*hx, gs.points[j].location);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best <= match_tol) out.push_back({i, best_j, best});
    }
    return out;
}

std::vector<Vector> ConjugacyVerifier::default_initial_points() const {
    const std::size_t n = source_region_.dimension();
    const std::size_t k = cfg_.flow_points;
    std::vector<Vector> out;
    if (n == 1) {
        const auto& b = source_region_.bounds[0];
        for (std::size_t i = 0; i < k; ++i) {
            out.push_back({b.lo + b.width() * static_cast<double>(i + 1) / static_cast<double>(k + 1)});
        }
        return out;
    }
    std::vector<Interval> inner;
    for (const auto& b : source_region_.bounds) inner.push_back({b.lo + 0.1 * b.width(), b.hi - 0.1 * b.width()});
    const AnalysisRegion core(std::move(inner));
    Rng rng(cfg_.solver.rng_seed ^ 0xf10f10f10ULL);
    for (std::size_t i = 0; i < k; ++i) out.push_back(rng.point_in(core));
    return out;
}

TheoremCheck ConjugacyVerifier::flow_conjugacy(std::span<const Vector> initial_points) const {
    TheoremCheck check;
    check.id = TheoremId::FlowConjugacy;
    check.tolerance = cfg_.flow_tol;

    IntegratorConfig icfg = cfg_.integrator;
    icfg.t_end = cfg_.flow_time;
    icfg.sample_count = cfg_.flow_samples;
    const AnalysisRegion grown = source_region_.expanded(cfg_.solver.boundary_margin);

    auto run = [&](const VectorField& field, const Vector& x0, std::string& why) -> Trajectory {
        try {
            return integrate(field, x0, icfg);
        } catch (const BlowUp& e) {
            why = e.what();
            return e.partial();
        } catch (const StepUnderflow& e) {
            why = e.what();
            return e.partial();
        }
    };

    double worst = 0.0;
    std::size_t compared = 0;
    for (const Vector& x0 : initial_points) {
        PointRecord rec;
        rec.source = x0;
        if (x0.size() != f_.dimension()) throw ValidationError("initial point has the wrong dimension");
        auto y0 = try_apply(h_, x0);
        if (!y0) {
            rec.note = "h is undefined at the initial point";
            check.details.push_back(std::move(rec));
            continue;
        }
        rec.mapped = *y0;
        std::string why_f, why_g;
        const Trajectory tf = run(f_, x0, why_f);
        const Trajectory tg = run(g_, *y0, why_g);
        const std::size_t m = std::min(tf.samples.size(), tg.samples.size());
        double point_worst = 0.0;
        std::string note;
        std::size_t s = 0;
        for (; s < m; ++s) {
            const Vector& x = tf.samples[s].state;
            if (!grown.contains(x)) {
                note = "trajectory left the region at t = " + std::to_string(tf.samples[s].t);
                break;
            }
            auto hx = try_apply(h_, x);
            if (!hx) {
                note = "h undefined along the trajectory at t = " + std::to_string(tf.samples[s].t);
                break;
            }
            const double res = distance(tg.samples[s].state, *hx) / std::max(1.0, norm2(*hx));
            point_worst = std::max(point_worst, res);
            ++compared;
        }
        if (note.empty() && s < cfg_.flow_samples) {
            note = !why_f.empty() ? "f trajectory: " + why_f : "g trajectory: " + why_g;
        }
        rec.residual = point_worst;
        rec.note = note;
        worst = std::max(worst, point_worst);
        check.details.push_back(std::move(rec));
    }
    check.worst_residual = worst;
    check.metrics["compared_samples"] = static_cast<double>(compared);
    check.verdict = worst <= cfg_.flow_tol ? Verdict::Holds : Verdict::Fails;
    if (compared == 0) {
        check.verdict = Verdict::NotApplicable;
        check.notes.push_back("no trajectory samples could be compared");
    }
    return check;
}

TheoremCheck ConjugacyVerifier::point_mapping(PointKind kind) {
    prepare();
    TheoremCheck check;
    check.id = kind == PointKind::Fixed ? TheoremId::FixedPointMapping : TheoremId::PerpetualPointMapping;
    check.tolerance = cfg_.effective_match_tol();
    const bool applicable = kind == PointKind::Fixed || h_.declared_linear();
    const bool strict_reverse = h_.declared_linear() && invertible_;

    const auto& fs = f_sets_[slot(kind)];
    const auto& gs = g_sets_[slot(kind)];
    const auto pairs = pair(kind);
    std::vector<int> source_pair(fs.points.size(), -1);
    std::vector<bool> target_used(gs.points.size(), false);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        source_pair[pairs[p].source] = static_cast<int>(p);
        target_used[pairs[p].target] = true;
    }

    const std::string phrase = kind_phrase(kind);
    std::size_t failures = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < fs.points.size(); ++i) {
        const CriticalPoint& cp = fs.points[i];
        PointRecord rec;
        rec.kind = kind;
        rec.source = cp.location;
        auto hx = try_apply(h_, cp.location);
        if (hx) rec.mapped = *hx;
        if (source_pair[i] >= 0) {
            const Pairing& p = pairs[static_cast<std::size_t>(source_pair[i])];
            rec.matched = gs.points[p.target].location;
            rec.residual = p.distance;
            worst = std::max(worst, p.distance);
            check.details.push_back(std::move(rec));
            continue;
        }
        std::string note;
        if (!hx) {
            note = "h is undefined at this " + phrase;
        } else if (auto other = g_finder_.classify(*hx)) {
            note = "maps onto a " + kind_phrase(other->kind) + " of g, not a " + phrase;
        } else {
            note = "h(x) is not a critical point of g";
        }
        if (cp.boundary || cp.degenerate) {
            note += cp.boundary ? " (boundary point, not counted)" : " (degenerate point, not counted)";
        } else {
            ++failures;
        }
        rec.note = note;
        check.details.push_back(std::move(rec));
    }

    std::size_t outside = 0;
    for (std::size_t j = 0; j < gs.points.size(); ++j) {
        if (target_used[j]) continue;
        const CriticalPoint& gp = gs.points[j];
        const auto& pre = g_preimages_[slot(kind)][j];
        if (!pre) {
            ++outside;
            continue;
        }
        PointRecord rec;
        rec.kind = kind;
        rec.matched = gp.location;
        rec.source = *pre;
        std::string note = phrase + " of g has no " + phrase + " preimage";
        if (auto other = f_finder_.classify(*pre)) {
            note += "; its preimage " + format_point(*pre) + " is a " + kind_phrase(other->kind) + " of f";
        } else {
            note += "; its preimage " + format_point(*pre) + " is not a critical point of f";
        }
        if (strict_reverse && !gp.boundary && !gp.degenerate) {
            ++failures;
        } else if (gp.boundary || gp.degenerate) {
            note += gp.boundary ? " (boundary point, not counted)" : " (degenerate point, not counted)";
        }
        rec.note = note;
        check.details.push_back(std::move(rec));
    }

    check.worst_residual = worst;
    check.metrics["matched"] = static_cast<double>(pairs.size());
    check.metrics["unmatched"] = static_cast<double>(failures);
    check.metrics["targets_outside_image"] = static_cast<double>(outside);
    if (!applicable) {
        check.verdict = Verdict::NotApplicable;
        check.notes.push_back("h is not linear: perpetual points are not guaranteed to map to perpetual points");
    } else {
        check.verdict = failures == 0 ? Verdict::Holds : Verdict::Fails;
    }
    for (const auto& w : fs.warnings) check.notes.push_back("f: " + w);
    for (const auto& w : gs.warnings) check.notes.push_back("g: " + w);
    return check;
}

TheoremCheck ConjugacyVerifier::spectrum_preservation() {
    TheoremCheck check;
    check.id = TheoremId::SpectrumPreservation;
    check.tolerance = cfg_.spectrum_tol;
    check.metrics["similarity_tolerance"] = cfg_.similarity_tol;
    if (!h_.declared_linear()) {
        check.verdict = Verdict::NotApplicable;
        check.notes.push_back("h is not linear: spectra need not be preserved");
        return check;
    }
    if (!invertible_) {
        check.verdict = Verdict::NotApplicable;
        check.notes.push_back("the matrix of h is singular");
        return check;
    }
    prepare();

    double worst_distance = 0.0;
    double worst_similarity = 0.0;
    std::size_t compared = 0;
    std::size_t skipped = 0;
    bool failed = false;
    for (PointKind k : kKinds) {
        const auto& fs = f_sets_[slot(k)];
        const auto& gs = g_sets_[slot(k)];
        const VectorField& fsolved = k == PointKind::Fixed ? f_ : f_finder_.acceleration();
        const VectorField& gsolved = k == PointKind::Fixed ? g_ : g_finder_.acceleration();
        for (const Pairing& p : pair(k)) {
            const CriticalPoint& a = fs.points[p.source];
            const CriticalPoint& b = gs.points[p.target];
            PointRecord rec;
            rec.kind = k;
            rec.source = a.location;
            rec.matched = b.location;
            rec.residual = p.distance;
            if (!a.spectrum_defined || !b.spectrum_defined) {
                rec.note = "spectrum undefined, not compared";
                check.details.push_back(std::move(rec));
                continue;
            }
            if (a.resolution > 0.0 || b.resolution > 0.0) {
                // the eigenvalues move by ~|H| * resolution across the root's uncertainty
                rec.note = "multiple root, spectrum not compared";
                ++skipped;
                check.details.push_back(std::move(rec));
                continue;
            }
            const double d = spectrum_distance(a.spectrum, b.spectrum);
            rec.spectrum_distance = d;
            try {
                const SquareMatrix dh = h_.field().jacobian(a.location);
                const SquareMatrix similar = dh * fsolved.jacobian(a.location) * inverse(dh);
                const double s = (similar - gsolved.jacobian(b.location)).max_abs();
                rec.similarity_residual = s;
                worst_similarity = std::max(worst_similarity, s);
                if (!(s <= cfg_.similarity_tol)) failed = true;
            } catch (const Error& e) {
                rec.note = std::string("similarity not evaluated: ") + e.what();
            }
            worst_distance = std::max(worst_distance, d);
            if (!(d <= cfg_.spectrum_tol)) failed = true;
            ++compared;
            check.details.push_back(std::move(rec));
        }
    }
    check.worst_residual = worst_distance;
    check.metrics["worst_similarity_residual"] = worst_similarity;
    check.metrics["compared"] = static_cast<double>(compared);
    check.metrics["multiple_roots_skipped"] = static_cast<double>(skipped);
    check.verdict = failed ? Verdict::Fails : Verdict::Holds;
    return check;
}

TheoremCheck ConjugacyVerifier::new_points() {
    prepare();
    TheoremCheck check;
    check.id = TheoremId::NewPoints;
    std::size_t found = 0;
    std::size_t found_degenerate = 0;
    std::size_t outside = 0;
    for (PointKind k : kKinds) {
        const auto& gs = g_sets_[slot(k)];
        std::vector<bool> used(gs.points.size(), false);
        for (const Pairing& p : pair(k)) used[p.target] = true;
        for (std::size_t j = 0; j < gs.points.size(); ++j) {
            if (used[j]) continue;
            const auto& pre = g_preimages_[slot(k)][j];
            if (!pre) {
                ++outside;
                continue;
            }
            const bool degenerate = gs.points[j].degenerate;
            if (degenerate && !gs.warnings.empty()) continue;
            PointRecord rec;
            rec.kind = k;
            rec.source = *pre;
            rec.matched = gs.points[j].location;
            if (auto other = f_finder_.classify(*pre)) {
                rec.note = "new " + kind_phrase(k) + " of g; preimage is a " + kind_phrase(other->kind) + " of f";
            } else {
                rec.note = "new " + kind_phrase(k) + " of g; preimage is not a critical point of f";
            }
            if (gs.points[j].boundary) rec.note += " (boundary)";
            if (degenerate) {
                rec.note += " (degenerate)";
                ++found_degenerate;
            }
            ++found;
            check.details.push_back(std::move(rec));
        }
    }
    check.metrics["new_points"] = static_cast<double>(found);
    check.metrics["degenerate_new_points"] = static_cast<double>(found_degenerate);
    check.metrics["targets_outside_image"] = static_cast<double>(outside);
    check.worst_residual = static_cast<double>(found);
    if (found == 0) {
        check.verdict = Verdict::Holds;
    } else if (h_.declared_linear() && invertible_) {
        if (found > found_degenerate) {
            check.verdict = Verdict::Fails;
            check.notes.push_back("a linear invertible map cannot create critical points");
        } else {
            // scattered representatives of multiple roots, not new points
            check.verdict = Verdict::Holds;
            check.notes.push_back("unmatched points are all degenerate (multiple or singular roots), not counted");
        }
    } else {
        check.verdict = Verdict::Advisory;
        check.notes.push_back("h is not a linear diffeomorphism: g has critical points with no counterpart in f");
    }
    return check;
}

ConjugacyReport ConjugacyVerifier::run(std::span<const TheoremId> ids) {
    ConjugacyReport report;
    report.linear = h_.declared_linear();
    report.invertible = invertible_;
    report.source_region = source_region_;
    report.target_region = target_region_;
    for (TheoremId id : ids) {
        switch (id) {
            case TheoremId::FlowConjugacy: report.checks.push_back(flow_conjugacy()); break;
            case TheoremId::FixedPointMapping: report.checks.push_back(point_mapping(PointKind::Fixed)); break;
            case TheoremId::PerpetualPointMapping:
                report.checks.push_back(point_mapping(PointKind::Perpetual));
                break;
            case TheoremId::SpectrumPreservation: report.checks.push_back(spectrum_preservation()); break;
            case TheoremId::NewPoints: report.checks.push_back(new_points()); break;
        }
    }
    return report;
}

TheoremCheck verify_flow_conjugacy(const VectorField& f, const VectorField& g, const TransformationMap& h,
                                   std::span<const Vector> initial_points, double T, double tol,
                                   const VerifyConfig& cfg) {
    VerifyConfig c = cfg;
    c.flow_time = T;
    c.flow_tol = tol;
    return ConjugacyVerifier(f, h, g, c).flow_conjugacy(initial_points);
}

TheoremCheck verify_point_mapping(const VectorField& f, const TransformationMap& h, const VectorField& g,
                                  const AnalysisRegion& region, const VerifyConfig& cfg, PointKind kind) {
    return ConjugacyVerifier(f, h, g, cfg, region).point_mapping(kind);
}

TheoremCheck verify_spectrum_preservation(const VectorField& f, const TransformationMap& h, const VectorField& g,
                                          const AnalysisRegion& region, const VerifyConfig& cfg) {
    return ConjugacyVerifier(f, h, g, cfg, region).spectrum_preservation();
}

TheoremCheck detect_new_points(const VectorField& f, const TransformationMap& h, const VectorField& g,
                               const AnalysisRegion& region, const VerifyConfig& cfg) {
    return ConjugacyVerifier(f, h, g, cfg, region).new_points();
}

}  // namespace perpconj
