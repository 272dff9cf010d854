#include "perpconj/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace perpconj {

namespace {

double max_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void axpy(Vector& out, std::span<const double> x, double h, std::initializer_list<std::pair<double, const Vector*>> terms) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (const auto& [c, k] : terms) s += c * (*k)[i];
        out[i] = x[i] + h * s;
    }
}

class Stepper {
public:
    Stepper(const VectorField& f, const IntegratorConfig& cfg) : f_(f), cfg_(cfg), n_(f.dimension()) {}

    // Classic RK4 step. Throws DomainError.
    Vector rk4(const Vector& x, double h) const {
        Vector tmp(n_);
        const Vector k1 = f_.value(x);
        axpy(tmp, x, h, {{0.5, &k1}});
        const Vector k2 = f_.value(tmp);
        axpy(tmp, x, h, {{0.5, &k2}});
        const Vector k3 = f_.value(tmp);
        axpy(tmp, x, h, {{1.0, &k3}});
        const Vector k4 = f_.value(tmp);
        Vector out(n_);
        axpy(out, x, h, {{1.0 / 6.0, &k1}, {2.0 / 6.0, &k2}, {2.0 / 6.0, &k3}, {1.0 / 6.0, &k4}});
        return out;
    }

    // Fehlberg 4(5) pair; returns the fifth-order solution and the scaled error norm.
    std::pair<Vector, double> rkf45(const Vector& x, double h) const {
        Vector tmp(n_);
        const Vector k1 = f_.value(x);
        axpy(tmp, x, h, {{1.0 / 4.0, &k1}});
        const Vector k2 = f_.value(tmp);
        axpy(tmp, x, h, {{3.0 / 32.0, &k1}, {9.0 / 32.0, &k2}});
        const Vector k3 = f_.value(tmp);
        axpy(tmp, x, h, {{1932.0 / 2197.0, &k1}, {-7200.0 / 2197.0, &k2}, {7296.0 / 2197.0, &k3}});
        const Vector k4 = f_.value(tmp);
        axpy(tmp, x, h, {{439.0 / 216.0, &k1}, {-8.0, &k2}, {3680.0 / 513.0, &k3}, {-845.0 / 4104.0, &k4}});
        const Vector k5 = f_.value(tmp);
        axpy(tmp, x, h,
             {{-8.0 / 27.0, &k1}, {2.0, &k2}, {-3544.0 / 2565.0, &k3}, {1859.0 / 4104.0, &k4}, {-11.0 / 40.0, &k5}});
        const Vector k6 = f_.value(tmp);

        Vector y5(n_);
        axpy(y5, x, h,
             {{16.0 / 135.0, &k1},
              {6656.0 / 12825.0, &k3},
              {28561.0 / 56430.0, &k4},
              {-9.0 / 50.0, &k5},
              {2.0 / 55.0, &k6}});
        // y5 - y4
        constexpr double e1 = 16.0 / 135.0 - 25.0 / 216.0;
        constexpr double e3 = 6656.0 / 12825.0 - 1408.0 / 2565.0;
        constexpr double e4 = 28561.0 / 56430.0 - 2197.0 / 4104.0;
        constexpr double e5 = -9.0 / 50.0 + 1.0 / 5.0;
        constexpr double e6 = 2.0 / 55.0;
        double err = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i]);
            const double scale = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(x[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
        return {std::move(y5), err};
    }

private:
    const VectorField& f_;
    const IntegratorConfig& cfg_;
    std::size_t n_;
};

}  // namespace

void IntegratorConfig::validate() const {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("integration end time must be positive");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ValidationError("integration tolerances must be positive");
    if (method == IntegrationMethod::Rk4Fixed && !(step > 0.0)) throw ValidationError("RK4 step must be positive");
    if (sample_count < 2) throw ValidationError("a trajectory needs at least two samples");
    if (min_step < 0.0 || max_step < 0.0) throw ValidationError("step bounds must be non-negative");
}

Trajectory integrate(const VectorField& f, std::span<const double> x0, const IntegratorConfig& cfg) {
    cfg.validate();
    if (x0.size() != f.dimension()) throw ValidationError("initial condition has the wrong dimension");
    for (double v : x0) {
        if (!std::isfinite(v)) throw ValidationError("initial condition must be finite");
    }

    Stepper stepper(f, cfg);
    Trajectory traj;
    Vector x(x0.begin(), x0.end());
    double t = 0.0;
    traj.samples.push_back({0.0, x});

    double h = cfg.method == IntegrationMethod::Rk4Fixed ? cfg.step : std::min(1e-3, cfg.t_end);
    const double last = static_cast<double>(cfg.sample_count - 1);

    for (std::size_t s = 1; s < cfg.sample_count; ++s) {
        const double target = s + 1 == cfg.sample_count ? cfg.t_end : cfg.t_end * static_cast<double>(s) / last;
        while (t < target) {
            double remaining = target - t;
            if (cfg.method == IntegrationMethod::Rk4Fixed) {
                const double hs = std::min(cfg.step, remaining);
                try {
                    x = stepper.rk4(x, hs);
                } catch (const DomainError& e) {
                    throw StepUnderflow(std::string("field undefined along the trajectory: ") + e.what(), t, traj);
                }
                t = hs == remaining ? target : t + hs;
            } else {
                const double floor = cfg.min_step > 0.0
                                         ? cfg.min_step
                                         : 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
                if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
                const bool clipped = h >= remaining;
                const double h_try = clipped ? remaining : h;
                double err = std::numeric_limits<double>::infinity();
                Vector next;
                try {
                    std::tie(next, err) = stepper.rkf45(x, h_try);
                } catch (const DomainError&) {
                    err = std::numeric_limits<double>::infinity();
                }
                if (err <= 1.0) {
                    x = std::move(next);
                    t = clipped ? target : t + h_try;
                    const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                    if (!clipped) h = h_try * grow;
                } else {
                    const double shrink =
                        std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.25), 0.1, 0.5) : 0.25;
                    h = h_try * shrink;
                    if (h < floor) {
                        throw StepUnderflow("step size underflow at t = " + std::to_string(t), t, traj);
                    }
                    continue;
                }
            }
            if (!(max_norm(x) <= cfg.blowup_norm)) {
                throw BlowUp("trajectory escaped (|x| > " + std::to_string(cfg.blowup_norm) + ") at t = " +
                                 std::to_string(t),
                             t, traj);
            }
        }
        traj.samples.push_back({target, x});
    }
    return traj;
}

Vector flow_map(const VectorField& f, std::span<const double> x0, double t, const IntegratorConfig& cfg) {
    if (t < 0.0) throw ValidationError("flow_map needs t >= 0");
    if (t == 0.0) return Vector(x0.begin(), x0.end());
    IntegratorConfig c = cfg;
    c.t_end = t;
    c.sample_count = 2;
    return integrate(f, x0, c).samples.back().state;
}

}  // namespace perpconj
