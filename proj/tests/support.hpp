#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "perpconj/field.hpp"
#include "perpconj/region.hpp"
#include "perpconj/system.hpp"

namespace testing_support {

using perpconj::Vector;

struct Monomial {
    double coef = 0.0;
    std::array<int, 3> exp{0, 0, 0};
};

/// Polynomial vector field in coefficient form. Evaluated directly, without
/// the expression engine, so it can serve as an oracle.
struct PolySystem {
    std::size_t n = 1;
    std::vector<std::vector<Monomial>> comps;

    std::vector<std::string> state_names() const;
    std::vector<std::string> sources() const;
    perpconj::SystemDefinition definition(const std::string& name = "poly") const;

    Vector f(const Vector& x) const;
    Eigen::MatrixXd jacobian(const Vector& x) const;
    /// d^2 f_i / dx_j dx_k
    double second(std::size_t i, std::size_t j, std::size_t k, const Vector& x) const;
    /// F = J f
    Vector acceleration(const Vector& x) const;
    /// DF = sum_k (d J_ik / dx_j) f_k + (J J)_ij
    Eigen::MatrixXd acceleration_jacobian(const Vector& x) const;
};

/// Every monomial of total degree <= degree is kept with probability `density`
/// and gets a coefficient uniform in [-coef_range, coef_range]. Each component
/// keeps at least one term.
PolySystem random_poly_system(perpconj::Rng& rng, std::size_t n, int degree, double coef_range = 2.0,
                              double density = 0.7);

/// Affine map y = M x + b with cond(M) <= max_cond.
struct AffineMap {
    Eigen::MatrixXd M;
    Eigen::VectorXd b;

    std::vector<std::string> map_sources(const std::vector<std::string>& x) const;
    std::vector<std::string> inverse_sources(const std::vector<std::string>& y) const;
    Vector apply(const Vector& x) const;
};

AffineMap random_affine(perpconj::Rng& rng, std::size_t n, double max_cond = 50.0);

std::vector<std::string> target_names(std::size_t n);

std::string format_coef(double v);

Eigen::MatrixXd to_eigen(const perpconj::SquareMatrix& m);

/// Sorted eigenvalues from Eigen's general solver, as a Spectrum.
perpconj::Spectrum eigen_spectrum(const Eigen::MatrixXd& m);

/// Roots from plain Newton started on a uniform grid with spacing `step`,
/// polished, restricted to `region` and deduplicated at `dedup`.
/// kind 0: f = 0; kind 1: F = 0 with |f| > eps_v.
std::vector<Vector> oracle_roots(const PolySystem& p, const perpconj::AnalysisRegion& region, double step, int kind,
                                 double eps_v, double dedup);

}  // namespace testing_support
