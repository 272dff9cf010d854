#include "perpconj/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "perpconj/error.hpp"

namespace perpconj {

AnalysisRegion::AnalysisRegion(std::vector<Interval> b) : bounds(std::move(b)) { validate(); }

bool AnalysisRegion::contains(std::span<const double> x) const noexcept {
    if (x.size() != bounds.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= bounds[i].lo && x[i] <= bounds[i].hi)) return false;
    }
    return true;
}

AnalysisRegion AnalysisRegion::expanded(double fraction) const {
    AnalysisRegion out = *this;
    for (auto& b : out.bounds) {
        const double pad = fraction * b.width();
        b.lo -= pad;
        b.hi += pad;
    }
    return out;
}

double AnalysisRegion::excess(std::span<const double> x) const noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < bounds.size() && i < x.size(); ++i) {
        worst = std::max({worst, bounds[i].lo - x[i], x[i] - bounds[i].hi});
    }
    return worst;
}

double AnalysisRegion::face_distance(std::span<const double> x) const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bounds.size() && i < x.size(); ++i) {
        best = std::min({best, std::abs(x[i] - bounds[i].lo), std::abs(bounds[i].hi - x[i])});
    }
    return best;
}

void AnalysisRegion::validate() const {
    if (bounds.empty()) throw ValidationError("region has no dimensions");
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const auto& b = bounds[i];
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
            throw ValidationError("region dimension " + std::to_string(i + 1) + " needs finite lo < hi");
        }
    }
}

std::string AnalysisRegion::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (i) os << ',';
        os << bounds[i].lo << ':' << bounds[i].hi;
    }
    return os.str();
}

Vector Rng::point_in(const AnalysisRegion& region) {
    Vector x(region.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(region.bounds[i].lo, region.bounds[i].hi);
    return x;
}

}  // namespace perpconj
