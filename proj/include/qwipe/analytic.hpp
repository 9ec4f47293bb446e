#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qwipe/channel.hpp"
#include "qwipe/complex_matrix.hpp"
#include "qwipe/density_matrix.hpp"
#include "qwipe/errors.hpp"

namespace qwipe {

/// Thermal polarization tanh(E_delta / (2 kB T)) of a two-level environment.
inline double polarization(double e_delta, double kb_t) {
    if (!(kb_t > 0.0))
        throw DomainError("polarization: kB*T must be positive, got " + std::to_string(kb_t));
    return std::tanh(e_delta / (2.0 * kb_t));
}

/// Thermal environment state diag((1+eps)/2, (1-eps)/2).
inline DensityMatrix thermal_sigma(double epsilon) {
    if (!(std::abs(epsilon) <= 1.0))
        throw DomainError("thermal_sigma: |epsilon| must be <= 1, got " + std::to_string(epsilon));
    ComplexMatrix m = ComplexMatrix::diagonal({0.5 * (1.0 + epsilon), 0.5 * (1.0 - epsilon)});
    return validate_density(std::move(m));
}

/// Principal-system initial state [[a, b], [conj(b), 1-a]].
/// Requires 0 <= a <= 1 and |b| <= sqrt(a(1-a)).
inline DensityMatrix initial_rho1(double a, Complex b) {
    if (!(a >= 0.0 && a <= 1.0))
        throw DomainError("initial_rho1: population a must be in [0,1], got " + std::to_string(a));
    const double b_max = std::sqrt(a * (1.0 - a));
    if (std::abs(b) > b_max + 1e-12)
        throw DomainError("initial_rho1: |b| = " + std::to_string(std::abs(b)) +
                          " exceeds sqrt(a(1-a)) = " + std::to_string(b_max));
    ComplexMatrix m(2, 2, {Complex(a, 0.0), b, std::conj(b), Complex(1.0 - a, 0.0)});
    return validate_density(std::move(m));
}

/// Ising coupling c Iz (x) Iz = diag(c/4, -c/4, -c/4, c/4).
inline ComplexMatrix ising_hamiltonian(double c) {
    const double q = 0.25 * c;
    return ComplexMatrix::diagonal({q, -q, -q, q});
}

/// Every scalar of the analytic model in one place.
class ModelParams {
  public:
    ModelParams(double a, Complex b, double c, DissipationParams dissipation, double epsilon)
        : a_(a), b_(b), c_(c), dissipation_(dissipation), epsilon_(epsilon) {
        if (!(a >= 0.0 && a <= 1.0))
            throw DomainError("ModelParams: population a must be in [0,1]");
        if (std::abs(b) > std::sqrt(a * (1.0 - a)) + 1e-12)
            throw DomainError("ModelParams: |b| exceeds sqrt(a(1-a))");
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw DomainError("ModelParams: polarization epsilon must be in [0,1]");
    }

    double a() const { return a_; }
    Complex b() const { return b_; }
    double c() const { return c_; }
    const DissipationParams &dissipation() const { return dissipation_; }
    double epsilon() const { return epsilon_; }

  private:
    double a_;
    Complex b_;
    double c_;
    DissipationParams dissipation_;
    double epsilon_;
};

/// The complex pair r+- of the closed-form solution, roots of
///   r^2 + (ln x) r + (c^2/4 - i c eps (ln x)/2) = 0.
struct DecoherenceFactors {
    Complex r_plus;
    Complex r_minus;
    bool degenerate = false;
};

namespace detail {

// Signed zeros steer std::sqrt across its branch cut; components that are
// zero must enter as +0.0 so the root labeling stays fixed (e.g. at eps=0
// the discriminant must be treated as (negative real) + 0i, giving
// r+ = -ic/2 at ln x = 0, not +ic/2).
inline double scrub_zero(double v) { return v == 0.0 ? 0.0 : v; }

} // namespace detail

/// Decoherence factors from ln x directly (the factors sweep varies ln x
/// without going through a dissipation probability).
inline DecoherenceFactors decoherence_factors_from_lnx(double ln_x, double c, double epsilon) {
    if (!(ln_x <= 0.0) || !std::isfinite(ln_x))
        throw DomainError("decoherence_factors: ln x must be finite and <= 0");
    const Complex disc(detail::scrub_zero(ln_x * ln_x - c * c),
                       detail::scrub_zero(2.0 * c * epsilon * ln_x));
    const Complex root = std::sqrt(disc);
    DecoherenceFactors f;
    f.r_plus = -0.5 * (Complex(ln_x, 0.0) + root);
    f.r_minus = -0.5 * (Complex(ln_x, 0.0) - root);
    f.degenerate = std::abs(f.r_plus - f.r_minus) <= 1e-9 * std::max(std::abs(ln_x), std::abs(c));
    return f;
}

inline DecoherenceFactors decoherence_factors(const DissipationParams &d, double c,
                                              double epsilon) {
    if (d.full_replacement())
        throw DomainError("decoherence_factors: p=1 has no finite ln x; "
                          "use eta_limit_p1 for the full-replacement limit");
    return decoherence_factors_from_lnx(d.ln_x(), c, epsilon);
}

/// Coefficients of kappa(t) = u e^{-r+ t} + v e^{-r- t} for kappa = f and g.
struct ClosedFormCoefficients {
    Complex u_f, v_f;
    Complex u_g, v_g;
};

inline ClosedFormCoefficients closed_form_coefficients(const ModelParams &params,
                                                       const DecoherenceFactors &factors) {
    if (factors.degenerate)
        throw ConfluenceError("closed_form_coefficients: factors are degenerate; "
                              "use the confluent coherence path");
    const Complex b = params.b();
    const double eps = params.epsilon();
    const Complex ic_half(0.0, 0.5 * params.c());
    const Complex gap = factors.r_plus - factors.r_minus;

    ClosedFormCoefficients co;
    co.u_f = -b * (1.0 + eps) * (factors.r_minus - ic_half) / (2.0 * gap);
    co.v_f = b * (1.0 + eps) * (factors.r_plus - ic_half) / (2.0 * gap);
    co.u_g = -b * (1.0 - eps) * (factors.r_minus + ic_half) / (2.0 * gap);
    co.v_g = b * (1.0 - eps) * (factors.r_plus + ic_half) / (2.0 * gap);
    return co;
}

/// f_m, g_m satisfying
///   f_{m+1} = e^{-ic dt/2} [ w f_m + (1+eps)/2 (1-w)(f_m+g_m) ]
///   g_{m+1} = e^{+ic dt/2} [ w g_m + (1-eps)/2 (1-w)(f_m+g_m) ]
/// with f_0 = b(1+eps)/2, g_0 = b(1-eps)/2 and w = x^dt. The sum f_m + g_m is
/// the off-diagonal of the reduced state on the discrete time grid.
struct RecurrencePoint {
    Complex f;
    Complex g;
};

inline std::vector<RecurrencePoint> recurrence_series(const ModelParams &params, double dt,
                                                      std::size_t m_max) {
    if (!(dt > 0.0))
        throw DomainError("recurrence_series: dt must be positive");
    const double w = replacement_weight(params.dissipation(), dt);
    const double eps = params.epsilon();
    const Complex phase_f = std::exp(Complex(0.0, -0.5 * params.c() * dt));
    const Complex phase_g = std::conj(phase_f);

    std::vector<RecurrencePoint> series;
    series.reserve(m_max + 1);
    Complex f = params.b() * (0.5 * (1.0 + eps));
    Complex g = params.b() * (0.5 * (1.0 - eps));
    series.push_back({f, g});
    for (std::size_t m = 0; m < m_max; ++m) {
        const Complex mix = (1.0 - w) * (f + g);
        const Complex f_next = phase_f * (w * f + 0.5 * (1.0 + eps) * mix);
        const Complex g_next = phase_g * (w * g + 0.5 * (1.0 - eps) * mix);
        f = f_next;
        g = g_next;
        series.push_back({f, g});
    }
    return series;
}

/// Full-replacement limit of the coherence: eta(t) = b e^{-i c eps t / 2}.
/// |eta| = |b| for all t.
inline Complex eta_limit_p1(double t, const ModelParams &params) {
    return params.b() * std::exp(Complex(0.0, -0.5 * params.c() * params.epsilon() * t));
}

/// Coherence from explicitly supplied decoherence factors. Exposed so the
/// root-branch swap symmetry can be exercised directly.
inline Complex eta_from_factors(double t, const ModelParams &params,
                                const DecoherenceFactors &factors) {
    const Complex b = params.b();
    if (t == 0.0)
        return b;
    const Complex ic_eps_half(0.0, 0.5 * params.c() * params.epsilon());
    if (factors.degenerate) {
        // Double root: eta(t) = b e^{-rt} (1 + (r - ic eps/2) t), fixed by
        // eta(0) = b and eta'(0) = -i b c eps / 2.
        const Complex r = 0.5 * (factors.r_plus + factors.r_minus);
        return b * std::exp(-r * t) * (1.0 + (r - ic_eps_half) * t);
    }
    const Complex gap = factors.r_plus - factors.r_minus;
    const Complex coeff_plus = (-factors.r_minus + ic_eps_half) / gap;
    const Complex coeff_minus = (factors.r_plus - ic_eps_half) / gap;
    return b * (coeff_plus * std::exp(-factors.r_plus * t) +
                coeff_minus * std::exp(-factors.r_minus * t));
}

/// Closed-form coherence eta(t) of the reduced state
/// [[a, eta(t)], [conj(eta(t)), 1-a]].
inline Complex eta_closed(double t, const ModelParams &params) {
    if (t < 0.0)
        throw DomainError("eta_closed: t must be non-negative");
    if (params.dissipation().full_replacement())
        return eta_limit_p1(t, params);
    const DecoherenceFactors factors =
        decoherence_factors(params.dissipation(), params.c(), params.epsilon());
    return eta_from_factors(t, params, factors);
}

struct CoherencePoint {
    double t;
    Complex eta;
    double abs_eta;
};

/// Time-stamped eta(t) records; t strictly increasing.
struct CoherenceSeries {
    std::vector<CoherencePoint> points;
};

inline CoherenceSeries eta_series(const ModelParams &params, const std::vector<double> &t_grid) {
    CoherenceSeries series;
    series.points.reserve(t_grid.size());
    double prev = -1.0;
    for (double t : t_grid) {
        if (t < 0.0)
            throw DomainError("eta_series: grid times must be non-negative");
        if (t <= prev)
            throw DomainError("eta_series: grid times must be strictly increasing");
        prev = t;
        const Complex eta = eta_closed(t, params);
        series.points.push_back({t, eta, std::abs(eta)});
    }
    return series;
}

} // namespace qwipe
