#include "perpconj/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "perpconj/error.hpp"
#include "perpconj/tape.hpp"

namespace perpconj {

struct VectorField::Compiled {
    SystemDefinition definition;
    std::size_t n = 0;
    std::vector<Expression> partials;  // n*n, row-major
    Tape value_tape;                   // f
    Tape first_tape;                   // f, then Df row-major

    std::once_flag second_once;
    std::vector<Expression> second_partials;  // n*n*n
    Tape second_tape;                         // f, Df, D^2 f

    void build_second() {
        std::call_once(second_once, [this] {
            second_partials.reserve(n * n * n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    for (std::size_t k = 0; k < n; ++k) {
                        // mixed partials taken in a fixed order so [i][j][k] and [i][k][j] agree exactly
                        const std::size_t lo = std::min(j, k);
                        const std::size_t hi = std::max(j, k);
                        if (j > k) {
                            second_partials.push_back(second_partials[(i * n + k) * n + j]);
                        } else {
                            second_partials.push_back(
                                differentiate(partials[i * n + lo], definition.state_names[hi]));
                        }
                    }
                }
            }
            std::vector<Expression> outputs = definition.components;
            outputs.insert(outputs.end(), partials.begin(), partials.end());
            outputs.insert(outputs.end(), second_partials.begin(), second_partials.end());
            second_tape = Tape(outputs, definition.parameters);
        });
    }
};

VectorField::VectorField(SystemDefinition definition) : impl_(std::make_shared<Compiled>()) {
    definition.validate();
    auto& c = *impl_;
    c.definition = std::move(definition);
    c.n = c.definition.dimension();
    c.partials.reserve(c.n * c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
        for (std::size_t j = 0; j < c.n; ++j) {
            c.partials.push_back(differentiate(c.definition.components[i], c.definition.state_names[j]));
        }
    }
    c.value_tape = Tape(c.definition.components, c.definition.parameters);
    std::vector<Expression> outputs = c.definition.components;
    outputs.insert(outputs.end(), c.partials.begin(), c.partials.end());
    c.first_tape = Tape(outputs, c.definition.parameters);
}

const SystemDefinition& VectorField::definition() const noexcept { return impl_->definition; }

std::size_t VectorField::dimension() const noexcept { return impl_->n; }

const Expression& VectorField::component(std::size_t i) const { return impl_->definition.components.at(i); }

const Expression& VectorField::partial(std::size_t i, std::size_t j) const {
    const std::size_t n = impl_->n;
    if (i >= n || j >= n) throw ValidationError("partial index out of range");
    return impl_->partials[i * n + j];
}

const Expression& VectorField::second_partial(std::size_t i, std::size_t j, std::size_t k) const {
    const std::size_t n = impl_->n;
    if (i >= n || j >= n || k >= n) throw ValidationError("second partial index out of range");
    impl_->build_second();
    return impl_->second_partials[(i * n + j) * n + k];
}

Vector VectorField::value(std::span<const double> x) const {
    if (x.size() != impl_->n) throw ValidationError("point dimension does not match the field");
    return impl_->value_tape.run(x);
}

SquareMatrix VectorField::jacobian(std::span<const double> x) const { return jet(x, 1).jacobian; }

JetValue VectorField::jet(std::span<const double> x, int order) const {
    const std::size_t n = impl_->n;
    if (x.size() != n) throw ValidationError("point dimension does not match the field");
    if (order != 1 && order != 2) throw ValidationError("jet order must be 1 or 2");

    std::vector<double> out;
    if (order == 1) {
        out = impl_->first_tape.run(x);
    } else {
        impl_->build_second();
        out = impl_->second_tape.run(x);
    }
    JetValue jet;
    jet.value.assign(out.begin(), out.begin() + static_cast<long>(n));
    jet.jacobian = SquareMatrix(n, std::vector<double>(out.begin() + static_cast<long>(n),
                                                       out.begin() + static_cast<long>(n + n * n)));
    if (order == 2) jet.hessian = std::vector<double>(out.begin() + static_cast<long>(n + n * n), out.end());
    return jet;
}

TransformationMap::TransformationMap(SystemDefinition map, AnalysisRegion domain, bool declared_linear,
                                     std::vector<std::string> target_names, std::uint64_t sample_seed)
    : field_(std::move(map)),
      domain_(std::move(domain)),
      declared_linear_(declared_linear),
      target_names_(std::move(target_names)) {
    domain_.validate();
    if (domain_.dimension() != field_.dimension()) {
        throw ValidationError("map domain has " + std::to_string(domain_.dimension()) + " dimensions, map has " +
                              std::to_string(field_.dimension()));
    }
    if (target_names_.size() != field_.dimension()) {
        throw ValidationError("map needs " + std::to_string(field_.dimension()) + " target variable names");
    }
    if (!declared_linear_) return;

    Rng rng(sample_seed);
    for (int s = 0; s < 100; ++s) {
        const Vector x = rng.point_in(domain_);
        const JetValue j = field_.jet(x, 2);
        for (double v : *j.hessian) {
            if (!(std::abs(v) < 1e-12)) {
                throw ValidationError("map is declared linear but has a Hessian entry " + std::to_string(v) +
                                      " at a sampled domain point");
            }
        }
    }
}

AnalysisRegion TransformationMap::image_region(const AnalysisRegion& region, std::uint64_t seed) const {
    const std::size_t n = dimension();
    if (region.dimension() != n) throw ValidationError("region dimension does not match the map");
    std::vector<Interval> box(n, Interval{std::numeric_limits<double>::infinity(),
                                          -std::numeric_limits<double>::infinity()});
    auto include = [&](const Vector& x) {
        Vector y;
        try {
            y = apply(x);
        } catch (const DomainError&) {
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            box[i].lo = std::min(box[i].lo, y[i]);
            box[i].hi = std::max(box[i].hi, y[i]);
        }
    };

    // corners
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Vector x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? region.bounds[i].hi : region.bounds[i].lo;
        include(x);
    }
    // lattice
    const std::size_t per_dim = n == 1 ? 257 : (n == 2 ? 33 : (n == 3 ? 9 : 3));
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= per_dim;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vector x(n);
        std::size_t rest = idx;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = rest % per_dim;
            rest /= per_dim;
            const auto& b = region.bounds[i];
            x[i] = b.lo + b.width() * static_cast<double>(k) / static_cast<double>(per_dim - 1);
        }
        include(x);
    }
    Rng rng(seed);
    for (int s = 0; s < 1000; ++s) include(rng.point_in(region));

    for (auto& b : box) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) {
            throw DomainError("map could not be evaluated anywhere on its domain");
        }
        if (!(b.lo < b.hi)) {
            const double pad = 1e-6 * std::max(1.0, std::abs(b.lo));
            b.lo -= pad;
            b.hi += pad;
        }
    }
    return AnalysisRegion(std::move(box));
}

VectorField acceleration_field(const VectorField& f) {
    const std::size_t n = f.dimension();
    SystemDefinition def = f.definition();
    def.name = f.name() + "_acceleration";
    for (std::size_t i = 0; i < n; ++i) {
        Expression acc = Expression::constant(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            acc = algebra::sum(acc, algebra::product(f.partial(i, j), f.component(j)));
        }
        def.components[i] = acc;
    }
    return VectorField(std::move(def));
}

namespace {
void require_same_dimension(const VectorField& f, const TransformationMap& h) {
    if (f.dimension() != h.dimension()) {
        throw ValidationError("field has dimension " + std::to_string(f.dimension()) + " but map has " +
                              std::to_string(h.dimension()));
    }
}
}  // namespace

Vector pushforward_velocity(const VectorField& f, const TransformationMap& h, std::span<const double> x) {
    require_same_dimension(f, h);
    const Vector v = f.value(x);
    return h.jet(x, 1).jacobian * v;
}

Vector pushforward_acceleration(const VectorField& f, const TransformationMap& h, std::span<const double> x) {
    require_same_dimension(f, h);
    const std::size_t n = f.dimension();
    const JetValue fj = f.jet(x, 1);
    const Vector acc = fj.jacobian * fj.value;
    const JetValue hj = h.jet(x, 2);

    Vector out = hj.jacobian * acc;
    for (std::size_t i = 0; i < n; ++i) {
        double curvature = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) curvature += hj.second(i, j, k) * fj.value[j] * fj.value[k];
        }
        out[i] += curvature;
    }
    return out;
}

VectorField transformed_system(const VectorField& f, const TransformationMap& h, const TransformationMap& h_inverse) {
    require_same_dimension(f, h);
    const std::size_t n = f.dimension();
    if (h_inverse.dimension() != n) throw ValidationError("inverse map has the wrong dimension");
    if (h.field().definition().state_names != f.definition().state_names) {
        throw ValidationError("map must be written in the state variables of the system");
    }
    if (h_inverse.field().definition().state_names != h.target_names()) {
        throw ValidationError("inverse map must be written in the target variables of the map");
    }

    Rng rng(0x1a7e);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        const Vector x = rng.point_in(h.domain());
        const Vector back = h_inverse.apply(h.apply(x));
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(back[i] - x[i]));
    }
    if (!(worst < 1e-9)) {
        throw InverseMismatch("inverse map does not invert the map on its domain (worst residual " +
                                  std::to_string(worst) + ")",
                              worst);
    }

    ParameterSet params = f.definition().parameters;
    for (const auto& [name, value] : h.field().definition().parameters) {
        auto [it, inserted] = params.emplace(name, value);
        if (!inserted && it->second != value) {
            throw ValidationError("parameter '" + name + "' has different values in the system and the map");
        }
    }
    for (const auto& [name, value] : h_inverse.field().definition().parameters) {
        auto [it, inserted] = params.emplace(name, value);
        if (!inserted && it->second != value) {
            throw ValidationError("parameter '" + name + "' has different values in the map and its inverse");
        }
    }

    const std::vector<Expression>& inverse_components = h_inverse.field().definition().components;
    SystemDefinition g;
    g.name = f.name() + "_transformed";
    g.state_names = h.target_names();
    g.parameters = std::move(params);
    for (std::size_t i = 0; i < n; ++i) {
        Expression velocity = Expression::constant(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            velocity = algebra::sum(velocity, algebra::product(h.field().partial(i, j), f.component(j)));
        }
        g.components.push_back(substitute(velocity, inverse_components));
    }
    return VectorField(std::move(g));
}

}  // namespace perpconj
