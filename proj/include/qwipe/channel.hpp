#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qwipe/complex_matrix.hpp"
#include "qwipe/density_matrix.hpp"
#include "qwipe/errors.hpp"

namespace qwipe {

/// Replacement probability p per interval tau, stored as ln x = ln(1-p)/tau.
/// x itself underflows badly (p=0.5, tau=1e-3 gives x ~ 9e-302), so x is never
/// formed; weights are computed as exp(dt * ln x). p=1 is kept as an explicit
/// -infinity sentinel rather than relying on exp(-inf).
class DissipationParams {
  public:
    DissipationParams(double p, double tau) : p_(p), tau_(tau) {
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError("dissipation probability p must be in [0,1], got " +
                              std::to_string(p));
        if (!(tau > 0.0))
            throw DomainError("dissipation interval tau must be positive, got " +
                              std::to_string(tau));
        ln_x_ = (p == 1.0) ? -std::numeric_limits<double>::infinity() : std::log1p(-p) / tau;
    }

    double p() const { return p_; }
    double tau() const { return tau_; }
    double ln_x() const { return ln_x_; }
    bool full_replacement() const { return p_ == 1.0; }

  private:
    double p_;
    double tau_;
    double ln_x_;
};

/// Time discretization of one evolution run. t_final is rounded to a whole
/// number of steps so recorded times stay on the recurrence grid.
class EvolutionConfig {
  public:
    EvolutionConfig(double dt, double t_final, std::size_t record_stride = 1)
        : dt_(dt), record_stride_(record_stride) {
        if (!(dt > 0.0))
            throw DomainError("dt must be positive, got " + std::to_string(dt));
        if (!(t_final > 0.0) || dt > t_final)
            throw DomainError("t_final must satisfy 0 < dt <= t_final");
        if (record_stride == 0)
            throw DomainError("record_stride must be at least 1");
        m_max_ = static_cast<std::size_t>(std::llround(t_final / dt));
        if (m_max_ < 1)
            throw DomainError("t_final/dt rounds to zero steps");
        t_final_ = static_cast<double>(m_max_) * dt;
    }

    double dt() const { return dt_; }
    double t_final() const { return t_final_; } // adjusted to m_max * dt
    std::size_t m_max() const { return m_max_; }
    std::size_t record_stride() const { return record_stride_; }

  private:
    double dt_;
    double t_final_;
    std::size_t m_max_;
    std::size_t record_stride_;
};

/// Joint state of principal system (dim1) and environment (dim2).
class BipartiteState {
  public:
    BipartiteState(DensityMatrix rho12, std::size_t dim1, std::size_t dim2)
        : rho12_(std::move(rho12)), dim1_(dim1), dim2_(dim2) {
        if (dim1 == 0 || dim2 == 0 || rho12_.dim() != dim1 * dim2)
            throw DimensionError("BipartiteState: density matrix dimension " +
                                 std::to_string(rho12_.dim()) + " != dim1*dim2 = " +
                                 std::to_string(dim1 * dim2));
    }

    const DensityMatrix &rho12() const { return rho12_; }
    std::size_t dim1() const { return dim1_; }
    std::size_t dim2() const { return dim2_; }

  private:
    DensityMatrix rho12_;
    std::size_t dim1_, dim2_;
};

/// Product state rho1 (x) sigma.
inline BipartiteState product_state(const DensityMatrix &rho1, const DensityMatrix &sigma) {
    ComplexMatrix joint = kron(rho1.matrix(), sigma.matrix());
    return BipartiteState(validate_density(std::move(joint)), rho1.dim(), sigma.dim());
}

/// Weight x^dt = exp(dt * ln x) of the survive-branch of the map.
inline double replacement_weight(const DissipationParams &d, double dt) {
    if (d.full_replacement())
        return 0.0;
    return std::exp(dt * d.ln_x());
}

namespace detail {

// The map formula without state validation; shared by step() and evolve().
inline ComplexMatrix step_matrix(const ComplexMatrix &rho12, const ComplexMatrix &u, double w,
                                 const ComplexMatrix &sigma, std::size_t dim1, std::size_t dim2) {
    const ComplexMatrix reduced = partial_trace_second(rho12, dim1, dim2);
    ComplexMatrix mixed = kron(reduced, sigma);
    mixed *= Complex(1.0 - w, 0.0);
    if (w != 0.0) {
        ComplexMatrix survive = rho12;
        survive *= Complex(w, 0.0);
        mixed += survive;
    }
    return conjugate(u, mixed);
}

} // namespace detail

/// One step of the dissipative map:
///   rho -> U [ w rho + (1-w) Tr2(rho) (x) sigma ] U^dagger,  w = x^dt.
/// u must be the precomputed propagator exp(-i H dt).
inline BipartiteState step(const BipartiteState &state, const ComplexMatrix &u,
                           const DissipationParams &d, double dt, const DensityMatrix &sigma) {
    const std::size_t dim = state.dim1() * state.dim2();
    if (!u.is_square() || u.rows() != dim)
        throw DimensionError("step: propagator dimension mismatch");
    if (sigma.dim() != state.dim2())
        throw DimensionError("step: environment state dimension mismatch");

    const double w = replacement_weight(d, dt);
    ComplexMatrix next =
        detail::step_matrix(state.rho12().matrix(), u, w, sigma.matrix(), state.dim1(),
                            state.dim2());
    return BipartiteState(validate_density(std::move(next)), state.dim1(), state.dim2());
}

struct EvolveRecord {
    double t;
    DensityMatrix reduced;
};

struct FullRecord {
    double t;
    BipartiteState state;
};

/// Iterates the map from t=0, recording the full joint state every
/// record_stride steps (t=0 and the final step always included).
/// Recorded times are m*dt to keep them exactly on the step grid.
inline std::vector<FullRecord> evolve_full(const BipartiteState &initial, const ComplexMatrix &h,
                                           const DissipationParams &d, const EvolutionConfig &cfg,
                                           const DensityMatrix &sigma) {
    const std::size_t dim = initial.dim1() * initial.dim2();
    if (!h.is_square() || h.rows() != dim)
        throw DimensionError("evolve: Hamiltonian dimension mismatch");
    if (sigma.dim() != initial.dim2())
        throw DimensionError("evolve: environment state dimension mismatch");

    // H is time-independent, so the propagator is computed once.
    const ComplexMatrix u = hermitian_propagator(h, cfg.dt());
    const double w = replacement_weight(d, cfg.dt());

    std::vector<FullRecord> records;
    records.reserve(cfg.m_max() / cfg.record_stride() + 2);
    records.push_back({0.0, initial});

    BipartiteState state = initial;
    for (std::size_t m = 1; m <= cfg.m_max(); ++m) {
        ComplexMatrix next = detail::step_matrix(state.rho12().matrix(), u, w, sigma.matrix(),
                                                 state.dim1(), state.dim2());
        if (!next.all_finite())
            throw NumericError("evolution produced a non-finite value at step " +
                               std::to_string(m));
        state = BipartiteState(validate_density(std::move(next)), state.dim1(), state.dim2());
        if (m % cfg.record_stride() == 0 || m == cfg.m_max())
            records.push_back({static_cast<double>(m) * cfg.dt(), state});
    }
    return records;
}

/// Reduced-trajectory view: (t, Tr2 rho12(t)), every recorded reduced state
/// re-validated as a density matrix.
inline std::vector<EvolveRecord> evolve(const BipartiteState &initial, const ComplexMatrix &h,
                                        const DissipationParams &d, const EvolutionConfig &cfg,
                                        const DensityMatrix &sigma) {
    std::vector<FullRecord> full = evolve_full(initial, h, d, cfg, sigma);
    std::vector<EvolveRecord> records;
    records.reserve(full.size());
    for (const FullRecord &r : full) {
        ComplexMatrix reduced =
            partial_trace_second(r.state.rho12().matrix(), r.state.dim1(), r.state.dim2());
        records.push_back({r.t, validate_density(std::move(reduced))});
    }
    return records;
}

/// |rho[0][1]| of a one-qubit state: the coherence tracked throughout.
inline double coherence_of(const DensityMatrix &reduced) {
    if (reduced.dim() != 2)
        throw DimensionError("coherence_of: expected a 2x2 density matrix, got dim " +
                             std::to_string(reduced.dim()));
    return std::abs(reduced(0, 1));
}

} // namespace qwipe
