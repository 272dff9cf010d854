#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "perpconj/spectra.hpp"

namespace testing_support {

namespace {

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double monomial_value(const Monomial& m, const Vector& x) {
    double v = m.coef;
    for (std::size_t i = 0; i < x.size(); ++i) v *= ipow(x[i], m.exp[i]);
    return v;
}

// d/dx_j of the monomial
double monomial_d(const Monomial& m, std::size_t j, const Vector& x) {
    if (m.exp[j] == 0) return 0.0;
    Monomial d = m;
    d.coef *= m.exp[j];
    d.exp[j] -= 1;
    return monomial_value(d, x);
}

double monomial_dd(const Monomial& m, std::size_t j, std::size_t k, const Vector& x) {
    if (m.exp[j] == 0) return 0.0;
    Monomial d = m;
    d.coef *= m.exp[j];
    d.exp[j] -= 1;
    if (d.exp[k] == 0) return 0.0;
    d.coef *= d.exp[k];
    d.exp[k] -= 1;
    return monomial_value(d, x);
}

double norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

std::string format_coef(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> PolySystem::state_names() const {
    static const char* names[] = {"x", "y", "z"};
    return {names, names + n};
}

std::vector<std::string> PolySystem::sources() const {
    const auto names = state_names();
    std::vector<std::string> out;
    for (const auto& comp : comps) {
        std::string s;
        for (const auto& m : comp) {
            if (!s.empty()) s += " + ";
            s += "(" + format_coef(m.coef) + ")";
            for (std::size_t i = 0; i < n; ++i) {
                if (m.exp[i] == 1) s += "*" + names[i];
                if (m.exp[i] > 1) s += "*" + names[i] + "^" + std::to_string(m.exp[i]);
            }
        }
        out.push_back(s.empty() ? "0" : s);
    }
    return out;
}

perpconj::SystemDefinition PolySystem::definition(const std::string& name) const {
    const auto src = sources();
    return perpconj::make_system(name, state_names(), {}, src);
}

Vector PolySystem::f(const Vector& x) const {
    Vector out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& m : comps[i]) out[i] += monomial_value(m, x);
    }
    return out;
}

Eigen::MatrixXd PolySystem::jacobian(const Vector& x) const {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& m : comps[i]) {
            for (std::size_t c = 0; c < n; ++c) j(i, c) += monomial_d(m, c, x);
        }
    }
    return j;
}

double PolySystem::second(std::size_t i, std::size_t j, std::size_t k, const Vector& x) const {
    double s = 0.0;
    for (const auto& m : comps[i]) s += monomial_dd(m, j, k, x);
    return s;
}

Vector PolySystem::acceleration(const Vector& x) const {
    const Eigen::MatrixXd j = jacobian(x);
    const Vector fx = f(x);
    Vector out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) out[i] += j(i, k) * fx[k];
    }
    return out;
}

Eigen::MatrixXd PolySystem::acceleration_jacobian(const Vector& x) const {
    const Eigen::MatrixXd j = jacobian(x);
    const Vector fx = f(x);
    Eigen::MatrixXd out = j * j;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t k = 0; k < n; ++k) out(i, c) += second(i, k, c, x) * fx[k];
        }
    }
    return out;
}

PolySystem random_poly_system(perpconj::Rng& rng, std::size_t n, int degree, double coef_range, double density) {
    PolySystem p;
    p.n = n;
    p.comps.resize(n);
    std::vector<std::array<int, 3>> exps;
    for (int a = 0; a <= degree; ++a) {
        for (int b = 0; b <= (n > 1 ? degree - a : 0); ++b) {
            for (int c = 0; c <= (n > 2 ? degree - a - b : 0); ++c) exps.push_back({a, b, c});
        }
    }
    for (auto& comp : p.comps) {
        for (const auto& e : exps) {
            const bool keep = rng.uniform() < density;
            const double coef = rng.uniform(-coef_range, coef_range);
            if (keep) comp.push_back({coef, e});
        }
        if (comp.empty()) comp.push_back({rng.uniform(-coef_range, coef_range), exps[rng.uniform() < 0.5 ? 0 : 1]});
    }
    return p;
}

std::vector<std::string> target_names(std::size_t n) {
    if (n == 1) return {"y"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("y" + std::to_string(i + 1));
    return out;
}

std::vector<std::string> AffineMap::map_sources(const std::vector<std::string>& x) const {
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        std::string s = format_coef(b(i));
        for (Eigen::Index j = 0; j < M.cols(); ++j) s += " + (" + format_coef(M(i, j)) + ")*" + x[j];
        out.push_back(s);
    }
    return out;
}

std::vector<std::string> AffineMap::inverse_sources(const std::vector<std::string>& y) const {
    const Eigen::MatrixXd inv = M.inverse();
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        std::string s;
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) s += " + ";
            s += "(" + format_coef(inv(i, j)) + ")*(" + y[j] + " - (" + format_coef(b(j)) + "))";
        }
        out.push_back(s);
    }
    return out;
}

Vector AffineMap::apply(const Vector& x) const {
    Eigen::VectorXd v = b;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) v(i) += M(i, j) * x[j];
    }
    return Vector(v.data(), v.data() + v.size());
}

AffineMap random_affine(perpconj::Rng& rng, std::size_t n, double max_cond) {
    const auto dim = static_cast<Eigen::Index>(n);
    while (true) {
        AffineMap a;
        a.M.resize(dim, dim);
        a.b.resize(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) a.M(i, j) = rng.uniform(-2.0, 2.0);
            a.b(i) = rng.uniform(-2.0, 2.0);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.M);
        const auto& s = svd.singularValues();
        const double smin = s(dim - 1);
        if (smin < 0.05) continue;
        if (s(0) / smin <= max_cond) return a;
    }
}

Eigen::MatrixXd to_eigen(const perpconj::SquareMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.order());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    return out;
}

perpconj::Spectrum eigen_spectrum(const Eigen::MatrixXd& m) {
    perpconj::Spectrum s;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    for (Eigen::Index i = 0; i < m.rows(); ++i) s.values.push_back(es.eigenvalues()(i));
    std::sort(s.values.begin(), s.values.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return s;
}

std::vector<Vector> oracle_roots(const PolySystem& p, const perpconj::AnalysisRegion& region, double step, int kind,
                                 double eps_v, double dedup) {
    const std::size_t n = p.n;
    std::vector<std::size_t> counts(n);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        counts[i] = static_cast<std::size_t>(std::floor(region.bounds[i].width() / step)) + 1;
        total *= counts[i];
    }
    auto residual = [&](const Vector& x) { return kind == 0 ? p.f(x) : p.acceleration(x); };
    auto jac = [&](const Vector& x) { return kind == 0 ? p.jacobian(x) : p.acceleration_jacobian(x); };

    std::vector<Vector> roots;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vector x(n);
        std::size_t rest = idx;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = region.bounds[i].lo + step * static_cast<double>(rest % counts[i]);
            rest /= counts[i];
        }
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            const Vector r = residual(x);
            if (norm(r) < 1e-13) {
                ok = true;
                break;
            }
            const Eigen::MatrixXd j = jac(x);
            Eigen::VectorXd rv(static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) rv(static_cast<Eigen::Index>(i)) = r[i];
            Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
            if (!lu.isInvertible()) break;
            const Eigen::VectorXd d = lu.solve(rv);
            double dn = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] -= d(static_cast<Eigen::Index>(i));
                dn = std::max(dn, std::abs(d(static_cast<Eigen::Index>(i))));
            }
            if (!std::isfinite(dn) || norm(x) > 1e6) break;
            if (dn < 1e-15 * std::max(1.0, norm(x))) {
                ok = norm(residual(x)) < 1e-10;
                break;
            }
        }
        if (!ok) ok = norm(residual(x)) < 1e-10;
        if (!ok || !region.contains(x)) continue;
        if (kind == 1 && norm(p.f(x)) <= eps_v) continue;
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](const Vector& r) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += (r[i] - x[i]) * (r[i] - x[i]);
            return std::sqrt(d) <= dedup;
        });
        if (!dup) roots.push_back(x);
    }
    return roots;
}

}  // namespace testing_support
