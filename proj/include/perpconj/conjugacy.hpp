#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perpconj/critical_points.hpp"
#include "perpconj/field.hpp"
#include "perpconj/integrator.hpp"
#include "perpconj/region.hpp"

namespace perpconj {

enum class TheoremId { FlowConjugacy, FixedPointMapping, PerpetualPointMapping, SpectrumPreservation, NewPoints };

/// "flow", "t1", "t2", "t3", "r1"
std::string_view to_string(TheoremId id);
std::optional<TheoremId> parse_theorem_id(std::string_view name);
/// Comma separated list of theorem names. Throws ValidationError.
std::vector<TheoremId> parse_theorem_list(std::string_view list);
std::vector<TheoremId> all_theorems();

/// advisory: the hypotheses don't hold (e.g. nonlinear h), but the outcome is
/// still informative and is reported without failing the run.
enum class Verdict { Holds, Fails, NotApplicable, Advisory };

std::string_view to_string(Verdict v);

struct PointRecord {
    PointKind kind = PointKind::Fixed;
    std::optional<Vector> source;   // point of f (or flow initial point)
    std::optional<Vector> mapped;   // h(source)
    std::optional<Vector> matched;  // point of g it was paired with
    std::optional<double> residual;
    std::optional<double> spectrum_distance;
    std::optional<double> similarity_residual;
    std::string note;
};

struct TheoremCheck {
    TheoremId id = TheoremId::FlowConjugacy;
    Verdict verdict = Verdict::NotApplicable;
    double worst_residual = 0.0;
    double tolerance = 0.0;
    std::vector<PointRecord> details;
    std::vector<std::string> notes;
    std::map<std::string, double> metrics;
};

struct VerifyConfig {
    SolverConfig solver;
    IntegratorConfig integrator;
    double match_tol = 0.0;        // 0: 10 * solver.dedup_tol
    double spectrum_tol = 1e-6;
    double similarity_tol = 1e-7;
    double flow_tol = 1e-6;
    double flow_time = 1.0;
    std::size_t flow_samples = 32;
    std::size_t flow_points = 5;   // default initial points when none are given

    double effective_match_tol() const { return match_tol > 0.0 ? match_tol : 10.0 * solver.dedup_tol; }
    void validate() const;
};

struct ConjugacyReport {
    bool linear = false;
    bool invertible = false;  // Dh nonsingular on the domain (checked at the center for linear maps)
    AnalysisRegion source_region;
    AnalysisRegion target_region;
    std::vector<TheoremCheck> checks;

    /// Fails when any check fails.
    bool passed() const;
};

/// Compares f, its image g under h, and the map h. Critical point sets of f
/// (on the source region) and of g (on the image of that region) are computed
/// once and shared by the point checks.
class ConjugacyVerifier {
public:
    ConjugacyVerifier(VectorField f, TransformationMap h, VectorField g, VerifyConfig cfg,
                      std::optional<AnalysisRegion> region = std::nullopt);

    const AnalysisRegion& source_region() const noexcept { return source_region_; }
    const AnalysisRegion& target_region() const noexcept { return target_region_; }
    bool linear() const noexcept { return h_.declared_linear(); }
    bool invertible() const noexcept { return invertible_; }

    const CriticalPointSet& source_points(PointKind kind);
    const CriticalPointSet& target_points(PointKind kind);

    std::vector<Vector> default_initial_points() const;

    TheoremCheck flow_conjugacy(std::span<const Vector> initial_points) const;
    TheoremCheck flow_conjugacy() const { return flow_conjugacy(default_initial_points()); }
    TheoremCheck point_mapping(PointKind kind);
    TheoremCheck spectrum_preservation();
    TheoremCheck new_points();

    ConjugacyReport run(std::span<const TheoremId> ids);

    /// x in the source region (grown by the boundary margin) with h(x) = y.
    std::optional<Vector> preimage(std::span<const double> y) const;

private:
    struct Pairing {
        std::size_t source;
        std::size_t target;
        double distance;
    };

    void prepare();
    std::vector<Pairing> pair(PointKind kind) const;

    VectorField f_;
    TransformationMap h_;
    VectorField g_;
    VerifyConfig cfg_;
    AnalysisRegion source_region_;
    AnalysisRegion target_region_;
    bool invertible_ = false;
    CriticalPointFinder f_finder_;
    CriticalPointFinder g_finder_;
    bool prepared_ = false;
    CriticalPointSet f_sets_[2];
    CriticalPointSet g_sets_[2];
    std::vector<std::optional<Vector>> g_preimages_[2];  // per target point
};

TheoremCheck verify_flow_conjugacy(const VectorField& f, const VectorField& g, const TransformationMap& h,
                                   std::span<const Vector> initial_points, double T, double tol,
                                   const VerifyConfig& cfg = {});
TheoremCheck verify_point_mapping(const VectorField& f, const TransformationMap& h, const VectorField& g,
                                  const AnalysisRegion& region, const VerifyConfig& cfg, PointKind kind);
TheoremCheck verify_spectrum_preservation(const VectorField& f, const TransformationMap& h, const VectorField& g,
                                          const AnalysisRegion& region, const VerifyConfig& cfg);
TheoremCheck detect_new_points(const VectorField& f, const TransformationMap& h, const VectorField& g,
                               const AnalysisRegion& region, const VerifyConfig& cfg);

}  // namespace perpconj
