#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qwipe/analytic.hpp"
#include "qwipe/channel.hpp"
#include "qwipe/errors.hpp"

namespace qwipe {

enum class SweepKind { factors, eta, compare, convergence };

/// Inclusive range for -(ln x)/c; steps counts intervals, so the sweep emits
/// steps+1 points and hits both endpoints (and exact interior points such as
/// the branch point at 1) without rounding drift.
struct LnxOverCRange {
    double min = 0.0;
    double max = 10.0;
    std::size_t steps = 500;
};

/// Uniform time grid: `steps` points t_i = i * (t_final / steps), i < steps.
struct TimeGrid {
    double t_final = 1e-2;
    std::size_t steps = 1000;
};

struct SweepSpec {
    SweepKind kind;
    ModelParams base_params;
    std::vector<double> epsilon_list;
    std::vector<double> p_list;
    LnxOverCRange lnx_over_c_range;
    TimeGrid time_grid;
    std::vector<double> dt_list;
};

struct FactorsRow {
    double epsilon;
    double lnx_over_c;
    double re_rp_over_c;
    double im_rp_over_c;
    double re_rm_over_c;
    double im_rm_over_c;
};

struct EtaRow {
    double p;
    double epsilon;
    double t;
    double abs_eta_over_b;
};

struct SimulateRow {
    double t;
    double abs_coherence;
    double rho01_re;
    double rho01_im;
    double trace_error;
    double min_eig;
};

struct ConvergenceRow {
    double dt;
    double max_abs_error;
};

/// Discretization study output. estimated_order is NaN in the exact regime
/// (all errors at roundoff level, nothing to extrapolate).
struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double estimated_order = std::numeric_limits<double>::quiet_NaN();
    bool exact_regime = false;
};

inline std::vector<double> time_grid_points(const TimeGrid &grid) {
    if (!(grid.t_final > 0.0) || grid.steps == 0)
        throw DomainError("time grid requires t_final > 0 and at least one step");
    const double dt = grid.t_final / static_cast<double>(grid.steps);
    std::vector<double> points;
    points.reserve(grid.steps);
    for (std::size_t i = 0; i < grid.steps; ++i)
        points.push_back(static_cast<double>(i) * dt);
    return points;
}

/// Decoherence factors r+-/c over the -(ln x)/c grid, one block per epsilon.
inline std::vector<FactorsRow> sweep_factors(const SweepSpec &spec) {
    if (spec.kind != SweepKind::factors)
        throw DomainError("sweep_factors: spec kind mismatch");
    if (spec.epsilon_list.empty())
        throw DomainError("sweep_factors: epsilon list must not be empty");
    const LnxOverCRange &range = spec.lnx_over_c_range;
    if (!(range.min >= 0.0) || !(range.max >= range.min) || range.steps == 0)
        throw DomainError("sweep_factors: range must satisfy 0 <= min <= max with steps >= 1");
    const double c = spec.base_params.c();
    if (!(c > 0.0))
        throw DomainError("sweep_factors: coupling c must be positive");

    std::vector<FactorsRow> rows;
    rows.reserve(spec.epsilon_list.size() * (range.steps + 1));
    for (double eps : spec.epsilon_list) {
        for (std::size_t i = 0; i <= range.steps; ++i) {
            const double v =
                range.min + static_cast<double>(i) * (range.max - range.min) /
                                static_cast<double>(range.steps);
            const DecoherenceFactors f = decoherence_factors_from_lnx(-(v * c), c, eps);
            rows.push_back({eps, v, f.r_plus.real() / c, f.r_plus.imag() / c,
                            f.r_minus.real() / c, f.r_minus.imag() / c});
        }
    }
    return rows;
}

/// |eta(t)|/|b| over the time grid for each (epsilon, p) pair.
inline std::vector<EtaRow> sweep_eta(const SweepSpec &spec) {
    if (spec.kind != SweepKind::eta)
        throw DomainError("sweep_eta: spec kind mismatch");
    if (spec.epsilon_list.empty() || spec.p_list.empty())
        throw DomainError("sweep_eta: epsilon and p lists must not be empty");
    const double abs_b = std::abs(spec.base_params.b());
    if (!(abs_b > 0.0))
        throw DomainError("sweep_eta: initial coherence b must be nonzero");

    const std::vector<double> times = time_grid_points(spec.time_grid);
    const double tau = spec.base_params.dissipation().tau();

    std::vector<EtaRow> rows;
    rows.reserve(spec.epsilon_list.size() * spec.p_list.size() * times.size());
    for (double eps : spec.epsilon_list) {
        for (double p : spec.p_list) {
            const ModelParams params(spec.base_params.a(), spec.base_params.b(),
                                     spec.base_params.c(), DissipationParams(p, tau), eps);
            for (double t : times)
                rows.push_back({p, eps, t, std::abs(eta_closed(t, params)) / abs_b});
        }
    }
    return rows;
}

/// Single trajectory of the discrete map with per-record state diagnostics.
inline std::vector<SimulateRow> simulate_rows(const ModelParams &params,
                                              const EvolutionConfig &cfg) {
    const ComplexMatrix h = ising_hamiltonian(params.c());
    const DensityMatrix sigma = thermal_sigma(params.epsilon());
    const DensityMatrix rho1 = initial_rho1(params.a(), params.b());
    const BipartiteState initial = product_state(rho1, sigma);

    std::vector<SimulateRow> rows;
    for (const EvolveRecord &r : evolve(initial, h, params.dissipation(), cfg, sigma)) {
        const Complex off = r.reduced(0, 1);
        rows.push_back({r.t, std::abs(off), off.real(), off.imag(),
                        std::abs(r.reduced.matrix().trace() - Complex(1.0, 0.0)),
                        min_hermitian_eigenvalue(r.reduced.matrix())});
    }
    return rows;
}

/// Max over recorded times of | |rho01(t)| - |eta(t)| | between the discrete
/// map and the closed form, both at the model's own parameters.
inline double compare_discrete_analytic(const ModelParams &params, const EvolutionConfig &cfg) {
    const ComplexMatrix h = ising_hamiltonian(params.c());
    const DensityMatrix sigma = thermal_sigma(params.epsilon());
    const DensityMatrix rho1 = initial_rho1(params.a(), params.b());
    const BipartiteState initial = product_state(rho1, sigma);

    double max_err = 0.0;
    for (const EvolveRecord &r : evolve(initial, h, params.dissipation(), cfg, sigma)) {
        const double discrete = coherence_of(r.reduced);
        const double analytic = std::abs(eta_closed(r.t, params));
        max_err = std::max(max_err, std::abs(discrete - analytic));
    }
    return max_err;
}

/// Error threshold below which a convergence study is pure roundoff.
inline constexpr double kExactRegimeError = 1e-9;

/// Runs compare_discrete_analytic per dt and estimates the convergence order
/// from successive error ratios.
inline ConvergenceReport convergence_order(const ModelParams &params,
                                           const std::vector<double> &dt_list, double t_final) {
    if (dt_list.size() < 2)
        throw DomainError("convergence_order: need at least 2 dt values");
    if (!(t_final > 0.0))
        throw DomainError("convergence_order: t_final must be positive");
    for (std::size_t i = 0; i < dt_list.size(); ++i) {
        if (!(dt_list[i] > 0.0))
            throw DomainError("convergence_order: dt values must be positive");
        if (i > 0 && !(dt_list[i] < dt_list[i - 1]))
            throw DomainError("convergence_order: dt values must be strictly decreasing");
        const double ratio = t_final / dt_list[i];
        if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio)
            throw DomainError("convergence_order: each dt must divide t_final");
    }

    ConvergenceReport report;
    for (double dt : dt_list)
        report.rows.push_back(
            {dt, compare_discrete_analytic(params, EvolutionConfig(dt, t_final))});

    double max_error = 0.0;
    for (const ConvergenceRow &row : report.rows)
        max_error = std::max(max_error, row.max_abs_error);
    if (max_error <= kExactRegimeError) {
        report.exact_regime = true;
        return report;
    }

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        const double e0 = report.rows[i].max_abs_error;
        const double e1 = report.rows[i + 1].max_abs_error;
        if (e0 > 0.0 && e1 > 0.0) {
            sum += std::log(e0 / e1) / std::log(report.rows[i].dt / report.rows[i + 1].dt);
            ++count;
        }
    }
    if (count > 0)
        report.estimated_order = sum / static_cast<double>(count);
    return report;
}

} // namespace qwipe
