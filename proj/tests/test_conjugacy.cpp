#include <catch_amalgamated.hpp>

#include <cmath>

#include "perpconj/conjugacy.hpp"
#include "perpconj/error.hpp"
#include "support.hpp"

using namespace perpconj;
using Catch::Matchers::WithinAbs;

namespace {

VectorField make_field(std::vector<std::string> state, std::vector<std::string> src, ParameterSet params = {}) {
    return VectorField(make_system("f", std::move(state), std::move(params), src));
}

TransformationMap make_map(std::vector<std::string> state, std::vector<std::string> src, AnalysisRegion domain,
                           bool linear, std::vector<std::string> targets, ParameterSet params = {}) {
    return TransformationMap(make_system("h", std::move(state), std::move(params), src), std::move(domain), linear,
                             std::move(targets));
}

const TheoremCheck& find_check(const ConjugacyReport& r, TheoremId id) {
    for (const auto& c : r.checks) {
        if (c.id == id) return c;
    }
    throw std::runtime_error("check missing");
}

struct Affine1D {
    VectorField f;
    TransformationMap h;
    VectorField g;
};

Affine1D affine_example(double alpha, double beta) {
    const ParameterSet params{{"alpha", alpha}, {"beta", beta}};
    auto f = make_field({"x"}, {"x^2 - A^2"}, {{"A", 1.0}});
    auto h = make_map({"x"}, {"alpha*x + beta"}, AnalysisRegion({{-3, 3}}), true, {"y"}, params);
    const auto hinv = make_map({"y"}, {"(y - beta)/alpha"}, h.image_region(), true, {"x"}, params);
    auto g = transformed_system(f, h, hinv);
    return {std::move(f), std::move(h), std::move(g)};
}

}  // namespace

TEST_CASE("theorem names", "[conjugacy]") {
    CHECK(parse_theorem_list("flow,t1,t2,t3,r1") == all_theorems());
    CHECK(parse_theorem_list("t3") == std::vector<TheoremId>{TheoremId::SpectrumPreservation});
    CHECK_THROWS_AS(parse_theorem_list("t4"), ValidationError);
    CHECK_THROWS_AS(parse_theorem_list(""), ValidationError);
    CHECK(to_string(Verdict::NotApplicable) == "not-applicable");
}

TEST_CASE("affine map preserves every structure", "[conjugacy]") {
    for (double alpha : {2.0, -1.5}) {
        for (double beta : {0.0, 5.0}) {
            INFO("alpha=" << alpha << " beta=" << beta);
            auto ex = affine_example(alpha, beta);
            ConjugacyVerifier v(ex.f, ex.h, ex.g, VerifyConfig{});
            const auto rep = v.run(all_theorems());
            CHECK(rep.linear);
            CHECK(rep.invertible);
            CHECK(rep.passed());
            for (const auto& c : rep.checks) CHECK(c.verdict == Verdict::Holds);

            const auto& t1 = find_check(rep, TheoremId::FixedPointMapping);
            REQUIRE(t1.details.size() == 2);
            for (const auto& d : t1.details) {
                REQUIRE(d.matched);
                const double expected = alpha * (*d.source)[0] + beta;
                CHECK_THAT((*d.matched)[0], WithinAbs(expected, 1e-7));
            }
            const auto& t2 = find_check(rep, TheoremId::PerpetualPointMapping);
            REQUIRE(t2.details.size() == 1);
            CHECK_THAT((*t2.details[0].matched)[0], WithinAbs(beta, 1e-7));
            const auto& t3 = find_check(rep, TheoremId::SpectrumPreservation);
            CHECK(t3.worst_residual < 1e-8);
        }
    }
}

TEST_CASE("identity map", "[conjugacy]") {
    const auto f = make_field({"x", "y"}, {"y", "-x - 0.2*y + x^3"});
    const auto h = make_map({"x", "y"}, {"x", "y"}, AnalysisRegion({{-2, 2}, {-2, 2}}), true, {"u", "v"});
    const auto hinv = make_map({"u", "v"}, {"u", "v"}, h.image_region(), true, {"x", "y"});
    ConjugacyVerifier v(f, h, transformed_system(f, h, hinv), VerifyConfig{});
    const auto rep = v.run(all_theorems());
    CHECK(rep.passed());
    CHECK(find_check(rep, TheoremId::FixedPointMapping).details.size() == 3);
}

TEST_CASE("square map creates a fixed point at the origin", "[conjugacy]") {
    const auto f = make_field({"x"}, {"x^2 - A^2"}, {{"A", 1.0}});
    const auto h = make_map({"x"}, {"x^2"}, AnalysisRegion({{0, 2}}), false, {"y"});
    const auto hinv = make_map({"y"}, {"sqrt(y)"}, h.image_region(), false, {"x"});
    ConjugacyVerifier v(f, h, transformed_system(f, h, hinv), VerifyConfig{});
    const auto rep = v.run(all_theorems());
    CHECK_FALSE(rep.linear);
    CHECK(rep.passed());
    CHECK(find_check(rep, TheoremId::FixedPointMapping).verdict == Verdict::Holds);
    CHECK(find_check(rep, TheoremId::PerpetualPointMapping).verdict == Verdict::NotApplicable);
    CHECK(find_check(rep, TheoremId::SpectrumPreservation).verdict == Verdict::NotApplicable);
    const auto& r1 = find_check(rep, TheoremId::NewPoints);
    CHECK(r1.verdict == Verdict::Advisory);
    bool origin = false;
    for (const auto& d : r1.details) origin = origin || (d.kind == PointKind::Fixed && std::abs((*d.matched)[0]) < 1e-6);
    CHECK(origin);
}

TEST_CASE("a wrong target system fails the flow check", "[conjugacy]") {
    const auto f = make_field({"x"}, {"-x"});
    const auto h = make_map({"x"}, {"2*x + 1"}, AnalysisRegion({{-1, 1}}), true, {"y"});
    const auto good = make_field({"y"}, {"-(y - 1)"});
    const auto bad = make_field({"y"}, {"-2*(y - 1)"});
    const std::vector<Vector> starts{{-0.5}, {0.25}, {0.9}};
    CHECK(verify_flow_conjugacy(f, good, h, starts, 1.0, 1e-6).verdict == Verdict::Holds);
    const auto c = verify_flow_conjugacy(f, bad, h, starts, 1.0, 1e-6);
    CHECK(c.verdict == Verdict::Fails);
    CHECK(c.worst_residual > 1e-3);
}

TEST_CASE("a wrong target system fails the point checks", "[conjugacy]") {
    auto ex = affine_example(2.0, 5.0);
    const auto shifted = make_field({"y"}, {"(y - 5.5)^2/2 - 2"});
    const AnalysisRegion region({{-3, 3}});
    const auto t1 = verify_point_mapping(ex.f, ex.h, shifted, region, VerifyConfig{}, PointKind::Fixed);
    CHECK(t1.verdict == Verdict::Fails);
}

TEST_CASE("singular linear map: spectra are not compared", "[conjugacy]") {
    const auto f = make_field({"x", "y"}, {"x - y^2", "y + x"});
    const auto h = make_map({"x", "y"}, {"x + y", "2*x + 2*y"}, AnalysisRegion({{-1, 1}, {-1, 1}}), true, {"u", "v"});
    const auto g = make_field({"u", "v"}, {"u", "v"});
    const auto c = verify_spectrum_preservation(f, h, g, AnalysisRegion({{-1, 1}, {-1, 1}}), VerifyConfig{});
    CHECK(c.verdict == Verdict::NotApplicable);
}

TEST_CASE("preimages under the square map", "[conjugacy]") {
    const auto f = make_field({"x"}, {"x^2 - 1"});
    const auto h = make_map({"x"}, {"x^2"}, AnalysisRegion({{0, 2}}), false, {"y"});
    const auto hinv = make_map({"y"}, {"sqrt(y)"}, h.image_region(), false, {"x"});
    const ConjugacyVerifier v(f, h, transformed_system(f, h, hinv), VerifyConfig{});
    const auto p = v.preimage(std::vector<double>{2.25});
    REQUIRE(p);
    CHECK_THAT((*p)[0], WithinAbs(1.5, 1e-10));
    CHECK_FALSE(v.preimage(std::vector<double>{9.0}));
}

TEST_CASE("random polynomial systems under random affine maps", "[conjugacy][property]") {
    Rng rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 2);
        const auto p = testing_support::random_poly_system(rng, n, 2);
        const auto a = testing_support::random_affine(rng, n);
        std::vector<Interval> box(n, Interval{-1.5, 1.5});
        const AnalysisRegion region(box);
        const auto names = p.state_names();
        const auto targets = testing_support::target_names(n);
        const VectorField f(p.definition());
        const TransformationMap h(make_system("h", names, {}, a.map_sources(names)), region, true, targets);
        const TransformationMap hinv(make_system("hi", targets, {}, a.inverse_sources(targets)), h.image_region(),
                                     true, names);
        ConjugacyVerifier v(f, h, transformed_system(f, h, hinv), VerifyConfig{});
        const std::vector<TheoremId> ids{TheoremId::FixedPointMapping, TheoremId::PerpetualPointMapping,
                                         TheoremId::SpectrumPreservation, TheoremId::NewPoints};
        const auto rep = v.run(ids);
        INFO("trial " << trial);
        for (const auto& c : rep.checks) {
            INFO(to_string(c.id));
            CHECK(c.verdict != Verdict::Fails);
        }
        const auto& t3 = find_check(rep, TheoremId::SpectrumPreservation);
        CHECK(t3.worst_residual < 1e-6);
        if (t3.metrics.count("worst_similarity_residual")) CHECK(t3.metrics.at("worst_similarity_residual") < 1e-7);
    }
}

TEST_CASE("verify configuration validation", "[conjugacy]") {
    VerifyConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.effective_match_tol() == 10.0 * cfg.solver.dedup_tol);
    cfg.flow_time = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
