#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "protmeas/oscillator.hpp"
#include "protmeas/region.hpp"

namespace protmeas {

inline constexpr double kOverlapFloor = 1e-8;
inline constexpr double kHermitianTolerance = 1e-10;

/// Coupling profile g(t) on [0, T]: raised-cosine turn-on and turn-off over
/// ramp_fraction * T at each end, plateau scaled so that int_0^T g dt = 1.
class MeasurementSchedule {
public:
    MeasurementSchedule(double duration, double ramp_fraction = 0.05, std::size_t steps = 4096);

    double duration() const noexcept { return duration_; }
    double ramp_fraction() const noexcept { return ramp_fraction_; }
    std::size_t steps() const noexcept { return steps_; }
    double dt() const noexcept { return duration_ / static_cast<double>(steps_); }

    /// Plateau height; 1/T for an abrupt (ramp-free) schedule.
    double plateau() const noexcept;
    double coupling(double t) const noexcept;
    /// int_0^t g, closed form.
    double integrated_coupling(double t) const noexcept;
    /// steps + 1 equally spaced times from 0 to T.
    std::vector<double> grid() const;
    bool in_ramp(double t) const noexcept;

    MeasurementSchedule with_steps(std::size_t steps) const;

private:
    double duration_;
    double ramp_fraction_;
    std::size_t steps_;
};

/// Max-norm Hermiticity defect ||A - A^dagger||.
double hermiticity_defect(const OperatorMatrix& A);

/// <state|A|state>; throws ContractError when A is not Hermitian.
double expectation(const OperatorMatrix& A, const StateVector& state);

/// <Phi_f(t)|A|Phi_i(t)> / <Phi_f(t)|Phi_i(t)> with the pre-selected state
/// evolved forward from 0 and the post-selected bra backward from T.
/// Throws OrthogonalPostSelectionError below the overlap floor.
Complex weak_value(const OperatorMatrix& A, const StateVector& pre, const DualState& post,
                   double t, double T, double overlap_floor = kOverlapFloor);

/// Point-approximation formula for Re{(P_V)_w(t)} of a narrow interval at x0
/// with ground-state pre-selection and coherent post-selection <alpha|,
/// alpha = alpha_mod e^{i delta}. Per unit interval width. Includes the
/// constant phase omega*T/2 in the cosine argument exactly as published.
double closed_form_pvi_weak(double alpha_mod, double delta, double x0, double omega, double T,
                            double t);

struct PointerTrace {
    std::vector<double> times;
    /// Expected pointer position int_0^t g Re{A_w}, coupling-normalized.
    std::vector<double> readings;
    /// Instantaneous Re{A_w(t)} (or <A> for trivial post-selection).
    std::vector<double> weak_re;
    std::vector<double> weak_im;
    /// Grid indices where the pre/post overlap fell below the floor.
    std::vector<std::size_t> flagged;

    bool is_flagged() const noexcept { return !flagged.empty(); }
};

/// Trapezoidal accumulation of g(t) Re{A_w(t)} over the schedule grid. With no
/// post-selection the expectation value is used. Flagged points contribute NaN
/// to the readings from that point on; no extrapolation is attempted.
PointerTrace pointer_trace(const MeasurementSchedule& schedule, const StateVector& pre,
                           const std::optional<DualState>& post, const OperatorMatrix& A,
                           double overlap_floor = kOverlapFloor);

// ---------------------------------------------------------------------------
// Bipartite system + pointer simulation.

struct PointerModel {
    std::size_t grid_points = 512;
    /// Standard deviation of the initial pointer position distribution.
    double sigma = 10.0;
    /// Half-width of the position grid in units of sigma.
    double extent_sigmas = 8.0;
};

struct BipartiteConfig {
    StateVector pre;
    /// Hermitian observable coupled to the pointer momentum.
    OperatorMatrix observable;
    MeasurementSchedule schedule;
    PointerModel pointer{};
    /// Multiplies g(t); zero switches the interaction off.
    double coupling_scale = 1.0;
    /// Pointer-shift change allowed between successive step doublings.
    double shift_tolerance = 1e-4;
    std::size_t max_doublings = 6;
};

struct BipartiteSimResult {
    double pointer_shift = 0.0;
    /// <H_int>/p = g(T/2) <A> at the plateau midpoint, averaged over pointer momenta.
    double energy_shift_per_p = 0.0;
    /// <psi_free(T)| rho_sys |psi_free(T)> with rho_sys the pointer-traced state.
    double survival_probability = 0.0;
    std::size_t steps_used = 0;
    std::vector<double> pointer_x;
    std::vector<double> pointer_density_initial;
    std::vector<double> pointer_density_final;
    OperatorMatrix system_density;
};

/// Joint evolution under H_sys (x) 1 + g(t) A (x) p by symmetric second-order
/// splitting, refined by step doubling until the pointer shift settles.
/// Throws ConvergenceError if it never does.
BipartiteSimResult bipartite_protective_sim(const BipartiteConfig& config);

/// One run at the schedule's own step count (no refinement).
BipartiteSimResult bipartite_protective_run(const BipartiteConfig& config);

// ---------------------------------------------------------------------------
// Zeno protection.

struct ZenoMeasurement {
    OperatorMatrix observable;
    /// Constant coupling kappa added as H_sys + kappa * A between protections.
    double strength = 0.0;
};

struct ZenoConfig {
    StateVector initial;
    std::size_t n_protections = 1;
    double duration = 1.0;
    std::optional<ZenoMeasurement> measurement;
    /// Keep the full Heisenberg-picture operator before/after every protection.
    bool record_snapshots = false;
};

struct OperatorSnapshot {
    double t = 0.0;
    OperatorMatrix before;
    OperatorMatrix after;
};

struct ZenoResult {
    double survival_probability = 1.0;
    /// Survival after each protection.
    std::vector<double> survival_history;
    /// Protection times k T / n.
    std::vector<double> protection_times;
    /// Conditional expectation of the measured operator just before / after each protection.
    std::vector<double> expectation_before;
    std::vector<double> expectation_after;
    /// Frobenius norm of the operator jump at each protection.
    std::vector<double> jump_norms;
    std::vector<OperatorSnapshot> snapshots;
};

/// n projections onto the initial state at t = kT/n, interleaved with free (or
/// measurement-coupled) evolution.
ZenoResult zeno_protect_sim(const ZenoConfig& config);

} // namespace protmeas
