#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace perpconj {

using Vector = std::vector<double>;

/// Dense n x n real matrix, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t order, double fill = 0.0) : n_(order), a_(order * order, fill) {}
    SquareMatrix(std::size_t order, std::vector<double> row_major);

    static SquareMatrix identity(std::size_t order);

    std::size_t order() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

    std::span<const double> data() const noexcept { return a_; }

    /// Maximum absolute row sum.
    double norm_inf() const noexcept;
    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
    friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b);
    friend Vector operator*(const SquareMatrix& a, std::span<const double> x);

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Eigenvalue multiset, sorted by (real, imag).
struct Spectrum {
    std::vector<std::complex<double>> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// All n eigenvalues. Closed form for n <= 2; balancing, Householder
/// reduction to Hessenberg form and Francis double-shift QR otherwise
/// (at most 30*n sweeps). Throws NoConvergence.
Spectrum eigenvalues(const SquareMatrix& m);

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-13 * ||m||_inf.
Vector solve_linear(const SquareMatrix& m, std::span<const double> rhs);

SquareMatrix inverse(const SquareMatrix& m);

/// Smallest pivot magnitude met during partially pivoted elimination, relative
/// to max(1, ||m||_inf). Zero for exactly singular input.
double smallest_relative_pivot(const SquareMatrix& m);

/// Bottleneck matching distance: min over pairings of the largest
/// |a_i - b_pi(i)|. Exhaustive for n <= 8, greedy above. Throws
/// ValidationError when the orders differ.
double spectrum_distance(const Spectrum& a, const Spectrum& b);

}  // namespace perpconj
