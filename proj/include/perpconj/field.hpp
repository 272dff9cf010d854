#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perpconj/region.hpp"
#include "perpconj/spectra.hpp"
#include "perpconj/system.hpp"

namespace perpconj {

/// Value, Jacobian and (for order-2 jets) Hessian of a vector map at a point.
/// hessian[(i*n + j)*n + k] = d^2 component_i / dx_j dx_k.
struct JetValue {
    Vector value;
    SquareMatrix jacobian;
    std::optional<std::vector<double>> hessian;

    double second(std::size_t i, std::size_t j, std::size_t k) const {
        const std::size_t n = value.size();
        return (*hessian)[(i * n + j) * n + k];
    }
};

/// A system definition together with its symbolic first partials and
/// compiled evaluators. Copies share the (immutable) compiled state.
/// Second partials are derived on first use, guarded by std::call_once.
class VectorField {
public:
    explicit VectorField(SystemDefinition definition);

    const SystemDefinition& definition() const noexcept;
    const std::string& name() const noexcept { return definition().name; }
    std::size_t dimension() const noexcept;

    const Expression& component(std::size_t i) const;
    /// d f_i / d x_j
    const Expression& partial(std::size_t i, std::size_t j) const;
    /// d^2 f_i / d x_j d x_k
    const Expression& second_partial(std::size_t i, std::size_t j, std::size_t k) const;

    Vector value(std::span<const double> x) const;
    SquareMatrix jacobian(std::span<const double> x) const;
    /// order 1 or 2. Throws DomainError.
    JetValue jet(std::span<const double> x, int order) const;

private:
    struct Compiled;
    std::shared_ptr<Compiled> impl_;
};

/// The coordinate change Y = h(X) on a declared domain box.
class TransformationMap {
public:
    /// `map.state_names` are the source coordinates; `target_names` name Y.
    /// When `declared_linear` is set the Hessian is sampled at 100 domain
    /// points and must vanish (max |entry| < 1e-12), else ValidationError.
    TransformationMap(SystemDefinition map, AnalysisRegion domain, bool declared_linear,
                      std::vector<std::string> target_names, std::uint64_t sample_seed = 0x5eed);

    const VectorField& field() const noexcept { return field_; }
    const AnalysisRegion& domain() const noexcept { return domain_; }
    bool declared_linear() const noexcept { return declared_linear_; }
    const std::vector<std::string>& target_names() const noexcept { return target_names_; }
    std::size_t dimension() const noexcept { return field_.dimension(); }

    Vector apply(std::span<const double> x) const { return field_.value(x); }
    JetValue jet(std::span<const double> x, int order) const { return field_.jet(x, order); }

    /// Bounding box of h over `region` (default: the domain), from corners, a
    /// lattice and random samples.
    AnalysisRegion image_region(const AnalysisRegion& region, std::uint64_t seed = 0x1a9e) const;
    AnalysisRegion image_region() const { return image_region(domain_); }

private:
    VectorField field_;
    AnalysisRegion domain_;
    bool declared_linear_;
    std::vector<std::string> target_names_;
};

/// F = Df . f, built symbolically: F_i = sum_j (d f_i/d x_j) f_j.
VectorField acceleration_field(const VectorField& f);

/// Dh(x) . f(x): the transformed velocity at h(x).
Vector pushforward_velocity(const VectorField& f, const TransformationMap& h, std::span<const double> x);

/// sum_jk d^2h_i/dx_j dx_k f_j f_k + sum_j dh_i/dx_j F_j: the transformed
/// acceleration at h(x).
Vector pushforward_acceleration(const VectorField& f, const TransformationMap& h, std::span<const double> x);

/// g(Y) = [Dh . f](h_inverse(Y)). `h_inverse` is a map over the target
/// coordinates. It must invert h at 100 sampled domain points to 1e-9, else
/// InverseMismatch. Parameters of f and h are merged (conflicting values are
/// a ValidationError).
VectorField transformed_system(const VectorField& f, const TransformationMap& h, const TransformationMap& h_inverse);

}  // namespace perpconj
