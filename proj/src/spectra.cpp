#include "perpconj/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "perpconj/error.hpp"

namespace perpconj {

namespace {

constexpr double kSingularPivot = 1e-13;

double sign_of(double magnitude, double sign) { return sign >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

void sort_spectrum(Spectrum& s) {
    std::sort(s.values.begin(), s.values.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

// Roots of t^2 - trace*t + det for the block [[a, b], [c, d]], computed from
// the half-difference form to avoid cancellation.
void block_eigenvalues(double a, double b, double c, double d, std::complex<double>& l1, std::complex<double>& l2) {
    const double p = 0.5 * (a - d);
    const double bc = b * c;
    const double disc = p * p + bc;
    const double mean = 0.5 * (a + d);
    if (disc >= 0.0) {
        const double z = p + sign_of(std::sqrt(disc), p);
        // eigenvalues are d + z and d - bc/z; fall back to the mean when z == 0
        if (z == 0.0) {
            l1 = l2 = mean;
        } else {
            l1 = d + z;
            l2 = d - bc / z;
        }
    } else {
        const double im = std::sqrt(-disc);
        l1 = {mean, im};
        l2 = {mean, -im};
    }
}

void balance(SquareMatrix& a) {
    const std::size_t n = a.order();
    constexpr double radix = 2.0;
    constexpr double radix2 = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix2;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix2;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double ginv = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= ginv;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

void reduce_to_hessenberg(SquareMatrix& a) {
    const std::size_t n = a.order();
    std::vector<double> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (a(k + 1, k) > 0.0) alpha = -alpha;

        std::fill(v.begin(), v.end(), 0.0);
        v[k + 1] = a(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;

        // A <- (I - 2vv'/v'v) A (I - 2vv'/v'v)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr layout).
std::vector<std::complex<double>> hessenberg_qr(SquareMatrix& a) {
    using Index = long;
    const Index n = static_cast<Index>(a.order());
    const double eps = std::numeric_limits<double>::epsilon();
    const std::size_t max_sweeps = 30 * a.order();
    std::vector<std::complex<double>> w(a.order());

    double anorm = 0.0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = std::max<Index>(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
    }

    std::size_t sweeps = 0;
    Index nn = n - 1;
    Index l = 0;
    double t = 0.0;
    double p = 0, q = 0, r = 0, s = 0, x = 0, y = 0, z = 0, ww = 0;
    while (nn >= 0) {
        int its = 0;
        do {
            for (l = nn; l > 0; --l) {
                s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= eps * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            x = a(nn, nn);
            if (l == nn) {
                w[nn--] = x + t;
            } else {
                y = a(nn - 1, nn - 1);
                ww = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    std::complex<double> e1, e2;
                    block_eigenvalues(a(nn - 1, nn - 1), a(nn - 1, nn), a(nn, nn - 1), a(nn, nn), e1, e2);
                    w[nn - 1] = e1 + t;
                    w[nn] = e2 + t;
                    nn -= 2;
                } else {
                    if (sweeps >= max_sweeps) {
                        throw NoConvergence("QR iteration did not converge for a matrix of order " +
                                                std::to_string(n) + " after " + std::to_string(sweeps) + " sweeps",
                                            sweeps, std::abs(a(nn, nn - 1)));
                    }
                    if (its > 0 && its % 10 == 0) {
                        // exceptional shift
                        t += x;
                        for (Index i = 0; i <= nn; ++i) a(i, i) -= x;
                        s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    ++sweeps;
                    Index m = nn - 2;
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (Index i = m; i < nn - 1; ++i) {
                        a(i + 2, i) = 0.0;
                        if (i != m) a(i + 2, i - 1) = 0.0;
                    }
                    for (Index k = m; k < nn; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k + 1 != nn) r = a(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (Index j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const Index mmin = nn < k + 3 ? nn : k + 3;
                            for (Index i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

}  // namespace

SquareMatrix::SquareMatrix(std::size_t order, std::vector<double> row_major) : n_(order), a_(std::move(row_major)) {
    if (a_.size() != n_ * n_) {
        throw ValidationError("matrix of order " + std::to_string(n_) + " needs " + std::to_string(n_ * n_) +
                              " entries, got " + std::to_string(a_.size()));
    }
}

SquareMatrix SquareMatrix::identity(std::size_t order) {
    SquareMatrix m(order);
    for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
    return m;
}

double SquareMatrix::norm_inf() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n_; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

double SquareMatrix::max_abs() const noexcept {
    double best = 0.0;
    for (double v : a_) best = std::max(best, std::abs(v));
    return best;
}

bool SquareMatrix::all_finite() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    const std::size_t n = a.order();
    SquareMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
}

Vector operator*(const SquareMatrix& a, std::span<const double> x) {
    Vector y(a.order(), 0.0);
    for (std::size_t i = 0; i < a.order(); ++i) {
        for (std::size_t j = 0; j < a.order(); ++j) y[i] += a(i, j) * x[j];
    }
    return y;
}

Spectrum eigenvalues(const SquareMatrix& m) {
    const std::size_t n = m.order();
    if (n == 0) throw ValidationError("eigenvalues of an empty matrix");
    if (!m.all_finite()) throw ValidationError("eigenvalues of a matrix with non-finite entries");

    Spectrum s;
    if (n == 1) {
        s.values = {m(0, 0)};
    } else if (n == 2) {
        std::complex<double> l1, l2;
        block_eigenvalues(m(0, 0), m(0, 1), m(1, 0), m(1, 1), l1, l2);
        s.values = {l1, l2};
    } else {
        SquareMatrix a = m;
        balance(a);
        reduce_to_hessenberg(a);
        s.values = hessenberg_qr(a);
    }
    sort_spectrum(s);
    return s;
}

Vector solve_linear(const SquareMatrix& m, std::span<const double> rhs) {
    const std::size_t n = m.order();
    if (rhs.size() != n) throw ValidationError("right-hand side length does not match matrix order");
    SquareMatrix a = m;
    Vector b(rhs.begin(), rhs.end());
    const double threshold = kSingularPivot * m.norm_inf();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        }
        const double pivot = a(piv, k);
        if (std::abs(pivot) <= threshold || pivot == 0.0) {
            throw SingularMatrix("singular matrix: pivot " + std::to_string(std::abs(pivot)) + " in column " +
                                     std::to_string(k),
                                 std::abs(pivot));
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a(i, k) / pivot;
            if (factor == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
            b[i] -= factor * b[k];
        }
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

SquareMatrix inverse(const SquareMatrix& m) {
    const std::size_t n = m.order();
    SquareMatrix inv(n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        Vector col = solve_linear(m, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

double smallest_relative_pivot(const SquareMatrix& m) {
    const std::size_t n = m.order();
    SquareMatrix a = m;
    const double scale = std::max(1.0, m.norm_inf());
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        }
        const double pivot = a(piv, k);
        smallest = std::min(smallest, std::abs(pivot) / scale);
        if (pivot == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a(i, k) / pivot;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
        }
    }
    return smallest;
}

double spectrum_distance(const Spectrum& a, const Spectrum& b) {
    const std::size_t n = a.size();
    if (b.size() != n) {
        throw ValidationError("spectra of different orders (" + std::to_string(n) + " vs " +
                              std::to_string(b.size()) + ")");
    }
    if (n == 0) return 0.0;

    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::abs(a.values[i] - b.values[j]);
    }

    if (n <= 8) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            double worst = 0.0;
            for (std::size_t i = 0; i < n && worst < best; ++i) worst = std::max(worst, cost[i * n + perm[i]]);
            best = std::min(best, worst);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    // Greedy: repeatedly take the globally closest unmatched pair.
    std::vector<bool> used_a(n, false), used_b(n, false);
    double worst = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (!used_b[j] && cost[i * n + j] < best) {
                    best = cost[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = used_b[bj] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace perpconj
