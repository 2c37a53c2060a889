#include "protmeas/weak_measurement.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "protmeas/errors.hpp"

namespace protmeas {

MeasurementSchedule::MeasurementSchedule(double duration, double ramp_fraction, std::size_t steps)
    : duration_(duration), ramp_fraction_(ramp_fraction), steps_(steps) {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw RangeError("MeasurementSchedule: duration must be positive");
    }
    if (!(ramp_fraction >= 0.0 && ramp_fraction < 0.5)) {
        throw RangeError("MeasurementSchedule: ramp_fraction must lie in [0, 0.5)");
    }
    if (steps == 0) {
        throw RangeError("MeasurementSchedule: steps must be positive");
    }
}

double MeasurementSchedule::plateau() const noexcept {
    return 1.0 / (duration_ * (1.0 - ramp_fraction_));
}

double MeasurementSchedule::coupling(double t) const noexcept {
    if (t < 0.0 || t > duration_) {
        return 0.0;
    }
    const double ramp = ramp_fraction_ * duration_;
    const double edge = std::min(t, duration_ - t);
    if (edge >= ramp) {
        return plateau();
    }
    return plateau() * 0.5 * (1.0 - std::cos(std::numbers::pi * edge / ramp));
}

double MeasurementSchedule::integrated_coupling(double t) const noexcept {
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= duration_) {
        return 1.0;
    }
    const double ramp = ramp_fraction_ * duration_;
    auto ramp_area = [ramp](double s) {
        return 0.5 * s - ramp / (2.0 * std::numbers::pi) * std::sin(std::numbers::pi * s / ramp);
    };
    if (ramp == 0.0) {
        return t / duration_;
    }
    if (t < ramp) {
        return plateau() * ramp_area(t);
    }
    if (t <= duration_ - ramp) {
        return plateau() * (0.5 * ramp + (t - ramp));
    }
    return 1.0 - plateau() * ramp_area(duration_ - t);
}

std::vector<double> MeasurementSchedule::grid() const {
    std::vector<double> g(steps_ + 1);
    for (std::size_t k = 0; k <= steps_; ++k) {
        g[k] = duration_ * static_cast<double>(k) / static_cast<double>(steps_);
    }
    g.back() = duration_;
    return g;
}

bool MeasurementSchedule::in_ramp(double t) const noexcept {
    const double ramp = ramp_fraction_ * duration_;
    return t < ramp || t > duration_ - ramp;
}

MeasurementSchedule MeasurementSchedule::with_steps(std::size_t steps) const {
    return MeasurementSchedule(duration_, ramp_fraction_, steps);
}

double hermiticity_defect(const OperatorMatrix& A) {
    if (A.size() == 0) {
        return 0.0;
    }
    return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

double expectation(const OperatorMatrix& A, const StateVector& state) {
    const auto dim = static_cast<Eigen::Index>(state.basis().dim());
    if (A.rows() != dim || A.cols() != dim) {
        throw ContractError("expectation: operator shape does not match the state");
    }
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if (hermiticity_defect(A) > kHermitianTolerance * scale) {
        throw ContractError("expectation: operator is not Hermitian (defect " +
                            std::to_string(hermiticity_defect(A)) + ")");
    }
    const Complex v = state.amplitudes().dot(A * state.amplitudes());
    return v.real();
}

namespace {

struct WeakTerms {
    Complex numerator;
    Complex overlap;
};

WeakTerms weak_terms(const OperatorMatrix& A, const StateVector& pre, const DualState& post,
                     double t, double T) {
    if (!(pre.basis() == post.basis())) {
        throw ContractError("weak_value: pre- and post-selected states use different bases");
    }
    const auto dim = static_cast<Eigen::Index>(pre.basis().dim());
    if (A.rows() != dim || A.cols() != dim) {
        throw ContractError("weak_value: operator shape does not match the states");
    }
    if (!(t >= 0.0 && t <= T)) {
        throw RangeError("weak_value: t = " + std::to_string(t) + " outside [0, T]");
    }
    const ComplexVector ket = pre.amplitudes().cwiseProduct(pre.basis().phases(t));
    const ComplexVector bra = post.amplitudes().cwiseProduct(post.basis().phases(T - t));
    return {bra.transpose() * (A * ket), bra.transpose() * ket};
}

} // namespace

Complex weak_value(const OperatorMatrix& A, const StateVector& pre, const DualState& post,
                   double t, double T, double overlap_floor) {
    const auto terms = weak_terms(A, pre, post, t, T);
    if (std::abs(terms.overlap) <= overlap_floor) {
        throw OrthogonalPostSelectionError(
            "weak_value: |<post|pre>| = " + std::to_string(std::abs(terms.overlap)) +
                " is below the overlap floor; the weak value is unreliable",
            std::abs(terms.overlap));
    }
    return terms.numerator / terms.overlap;
}

double closed_form_pvi_weak(double alpha_mod, double delta, double x0, double omega, double T,
                            double t) {
    if (!(t >= 0.0 && t <= T)) {
        throw RangeError("closed_form_pvi_weak: t outside [0, T]");
    }
    const double a2 = alpha_mod * alpha_mod;
    const double angle = omega * (T - t) + delta;
    const double xi = 0.5 * omega * T + 0.5 * a2 * std::sin(2.0 * angle) -
                      std::numbers::sqrt2 * alpha_mod * x0 * std::sin(angle);
    const double offset = x0 - std::numbers::sqrt2 * alpha_mod * std::cos(angle);
    return std::exp(0.5 * (a2 - x0 * x0)) / std::sqrt(std::numbers::pi) * std::cos(xi) *
           std::exp(-0.5 * offset * offset);
}

PointerTrace pointer_trace(const MeasurementSchedule& schedule, const StateVector& pre,
                           const std::optional<DualState>& post, const OperatorMatrix& A,
                           double overlap_floor) {
    PointerTrace trace;
    trace.times = schedule.grid();
    const std::size_t count = trace.times.size();
    trace.weak_re.resize(count);
    trace.weak_im.resize(count, 0.0);
    trace.readings.assign(count, 0.0);
    const double T = schedule.duration();

    if (!post) {
        // Trivial post-selection: the pointer couples to the expectation value,
        // evaluated at each time so non-stationary pre-selections are honored.
        for (std::size_t k = 0; k < count; ++k) {
            trace.weak_re[k] = expectation(A, evolve(pre, trace.times[k]));
        }
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            const auto terms = weak_terms(A, pre, *post, trace.times[k], T);
            if (std::abs(terms.overlap) <= overlap_floor) {
                trace.flagged.push_back(k);
                trace.weak_re[k] = std::numeric_limits<double>::quiet_NaN();
                trace.weak_im[k] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const Complex w = terms.numerator / terms.overlap;
            trace.weak_re[k] = w.real();
            trace.weak_im[k] = w.imag();
        }
    }

    double acc = 0.0;
    for (std::size_t k = 1; k < count; ++k) {
        const double h = trace.times[k] - trace.times[k - 1];
        acc += 0.5 * h *
               (schedule.coupling(trace.times[k - 1]) * trace.weak_re[k - 1] +
                schedule.coupling(trace.times[k]) * trace.weak_re[k]);
        trace.readings[k] = acc;
    }
    return trace;
}

} // namespace protmeas
