#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "perpconj/spectra.hpp"

namespace perpconj {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
};

/// Axis-aligned search box, one closed interval per state dimension.
struct AnalysisRegion {
    std::vector<Interval> bounds;

    AnalysisRegion() = default;
    explicit AnalysisRegion(std::vector<Interval> b);

    std::size_t dimension() const noexcept { return bounds.size(); }
    bool contains(std::span<const double> x) const noexcept;
    /// Box grown by `fraction` of its width on every side.
    AnalysisRegion expanded(double fraction) const;
    /// Distance of x outside the box (0 inside), max over dimensions.
    double excess(std::span<const double> x) const noexcept;
    /// Distance from x to the nearest face, for x inside.
    double face_distance(std::span<const double> x) const noexcept;

    /// Throws ValidationError unless every lo < hi and both are finite.
    void validate() const;
    std::string to_string() const;
};

/// Deterministic pseudo-random source. Uniform doubles are derived from the
/// raw 64-bit engine output so sequences do not depend on the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    Vector point_in(const AnalysisRegion& region);

private:
    std::mt19937_64 engine_;
};

}  // namespace perpconj
