#pragma once

#include <span>
#include <vector>

#include "perpconj/error.hpp"
#include "perpconj/field.hpp"

namespace perpconj {

enum class IntegrationMethod { Rk4Fixed, Rkf45Adaptive };

struct IntegratorConfig {
    IntegrationMethod method = IntegrationMethod::Rkf45Adaptive;
    double step = 1e-3;        // RK4 step
    double abs_tol = 1e-9;     // RKF45
    double rel_tol = 1e-9;
    double min_step = 0.0;     // 0: 64 ulp of the current time
    double max_step = 0.0;     // 0: unbounded
    double t_end = 1.0;
    std::size_t sample_count = 101;  // evenly spaced output times, including 0 and t_end
    double blowup_norm = 1e12;

    void validate() const;
};

struct TrajectorySample {
    double t = 0.0;
    Vector state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

/// Finite-time escape: |state| exceeded the blow-up threshold.
class BlowUp : public Error {
public:
    BlowUp(const std::string& message, double escape_time, Trajectory partial)
        : Error(message), escape_time_(escape_time), partial_(std::move(partial)) {}

    double escape_time() const noexcept { return escape_time_; }
    /// Samples recorded before the escape.
    const Trajectory& partial() const noexcept { return partial_; }

private:
    double escape_time_;
    Trajectory partial_;
};

/// The adaptive step shrank below the minimum (stiffness or a domain wall).
class StepUnderflow : public Error {
public:
    StepUnderflow(const std::string& message, double time, Trajectory partial)
        : Error(message), time_(time), partial_(std::move(partial)) {}

    double time() const noexcept { return time_; }
    const Trajectory& partial() const noexcept { return partial_; }

private:
    double time_;
    Trajectory partial_;
};

/// Samples of phi_t(x0) at sample_count evenly spaced times in [0, t_end].
/// Steps are clipped to land on every sample time. Throws BlowUp, StepUnderflow.
Trajectory integrate(const VectorField& f, std::span<const double> x0, const IntegratorConfig& cfg);

/// phi_t(x0) for t >= 0.
Vector flow_map(const VectorField& f, std::span<const double> x0, double t, const IntegratorConfig& cfg);

}  // namespace perpconj
