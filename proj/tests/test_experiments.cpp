#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "qwipe/csv.hpp"
#include "test_support.hpp"

using namespace qwipe;

namespace {

ModelParams figure_params(double p = 0.0, double epsilon = 0.0) {
    return ModelParams(0.5, Complex(0.5, 0.0), 1e3, DissipationParams(p, 1e-3), epsilon);
}

SweepSpec factors_spec(std::vector<double> eps_list, LnxOverCRange range = {0.0, 10.0, 500}) {
    return SweepSpec{SweepKind::factors, figure_params(), std::move(eps_list),
                     {},              range,              {},
                     {}};
}

SweepSpec eta_spec(std::vector<double> eps_list, std::vector<double> p_list,
                   TimeGrid grid = {1e-2, 1000}) {
    return SweepSpec{SweepKind::eta, figure_params(), std::move(eps_list), std::move(p_list),
                     {},             grid,            {}};
}

} // namespace

TEST_CASE("factors sweep endpoints and branch point", "[experiments]") {
    const auto rows = sweep_factors(factors_spec({0.0}));
    REQUIRE(rows.size() == 501);

    // No dissipation: the factors are the bare +-ic/2 phases.
    REQUIRE(rows[0].lnx_over_c == 0.0);
    REQUIRE(rows[0].re_rp_over_c == 0.0);
    REQUIRE(rows[0].im_rp_over_c == -0.5);
    REQUIRE(rows[0].re_rm_over_c == 0.0);
    REQUIRE(rows[0].im_rm_over_c == 0.5);

    // The grid hits the branch point -(ln x)/c = 1 exactly; both real parts
    // peak at 1/2 there.
    const FactorsRow &branch = rows[50];
    REQUIRE(branch.lnx_over_c == 1.0);
    REQUIRE(branch.re_rp_over_c == 0.5);
    REQUIRE(branch.re_rm_over_c == 0.5);
    REQUIRE(branch.im_rp_over_c == 0.0);
    REQUIRE(branch.im_rm_over_c == 0.0);
}

TEST_CASE("factors sweep matches the scalar root formula deep in overdamping",
          "[experiments]") {
    const auto rows = sweep_factors(factors_spec({0.0}));
    const FactorsRow &last = rows.back();
    REQUIRE(last.lnx_over_c == 10.0);
    const double root = std::sqrt(10.0 * 10.0 - 1.0);
    REQUIRE(last.re_rp_over_c == Catch::Approx((10.0 - root) / 2.0).epsilon(1e-12));
    REQUIRE(last.re_rm_over_c == Catch::Approx((10.0 + root) / 2.0).epsilon(1e-12));
    REQUIRE(last.re_rp_over_c == Catch::Approx(0.02506).margin(5e-6));
    REQUIRE(last.re_rm_over_c == Catch::Approx(9.975).margin(5e-4));
}

TEST_CASE("factors sweep root-sum and conjugacy structure", "[experiments]") {
    const auto rows = sweep_factors(factors_spec({0.0, 0.25, 0.8}));
    for (const FactorsRow &row : rows) {
        REQUIRE(row.re_rp_over_c + row.re_rm_over_c ==
                Catch::Approx(row.lnx_over_c).margin(1e-9 * std::max(1.0, row.lnx_over_c)));
        if (row.epsilon == 0.0 && row.lnx_over_c < 1.0)
            REQUIRE(row.im_rp_over_c + row.im_rm_over_c == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("factor real parts split monotonically past the branch point", "[experiments]") {
    const auto rows = sweep_factors(factors_spec({0.0}));
    for (std::size_t i = 51; i + 1 < rows.size(); ++i) {
        REQUIRE(rows[i + 1].re_rp_over_c < rows[i].re_rp_over_c);
        REQUIRE(rows[i + 1].re_rm_over_c > rows[i].re_rm_over_c);
    }
}

TEST_CASE("factors sweep validates its spec", "[experiments]") {
    REQUIRE_THROWS_AS(sweep_factors(eta_spec({0.0}, {0.0})), DomainError);
    REQUIRE_THROWS_AS(sweep_factors(factors_spec({})), DomainError);
    REQUIRE_THROWS_AS(sweep_factors(factors_spec({0.0}, {-1.0, 10.0, 100})), DomainError);
}

TEST_CASE("eta sweep conserves coherence at full replacement", "[experiments]") {
    const auto rows = sweep_eta(eta_spec({0.0, 0.25, 0.8}, {1.0}));
    REQUIRE(rows.size() == 3000);
    for (const EtaRow &row : rows)
        REQUIRE(row.abs_eta_over_b == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("eta sweep reduces to |cos(ct/2)| without dissipation", "[experiments]") {
    const auto rows = sweep_eta(eta_spec({0.0}, {0.0}));
    REQUIRE(rows.size() == 1000);
    REQUIRE(rows[0].t == 0.0);
    REQUIRE(rows[0].abs_eta_over_b == 1.0);
    for (const EtaRow &row : rows)
        REQUIRE(row.abs_eta_over_b ==
                Catch::Approx(std::abs(std::cos(0.5 * 1e3 * row.t))).margin(1e-9));

    // First minimum sits within one grid step of t = pi/c.
    std::size_t min_index = 0;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        if (rows[i].abs_eta_over_b < rows[i - 1].abs_eta_over_b &&
            rows[i].abs_eta_over_b < rows[i + 1].abs_eta_over_b) {
            min_index = i;
            break;
        }
    }
    REQUIRE(min_index > 0);
    REQUIRE(std::abs(rows[min_index].t - M_PI / 1e3) <= 1e-2 / 1000.0);
}

TEST_CASE("eta sweep stays within the coherence bound", "[experiments]") {
    const auto rows =
        sweep_eta(eta_spec({0.0, 0.25, 0.8}, {0.0, 0.25, 0.5, 0.75, 0.95, 1.0}, {1e-2, 100}));
    for (const EtaRow &row : rows) {
        REQUIRE(row.abs_eta_over_b >= 0.0);
        REQUIRE(row.abs_eta_over_b <= 1.0 + 1e-9);
    }
}

TEST_CASE("wipe effect orders the eta curves by dissipation rate", "[experiments]") {
    for (double eps : {0.0, 0.25, 0.8}) {
        const auto rows =
            sweep_eta(eta_spec({eps}, {0.25, 0.5, 0.75, 0.95, 1.0}, {1e-2, 1000}));
        // t = 2e-3 is grid point 200 within each p block of 1000 times.
        double prev = 0.0;
        for (std::size_t block = 0; block < 5; ++block) {
            const EtaRow &row = rows[block * 1000 + 200];
            REQUIRE(row.t == Catch::Approx(2e-3).epsilon(1e-12));
            REQUIRE(row.abs_eta_over_b > prev);
            prev = row.abs_eta_over_b;
        }
    }
}

TEST_CASE("discrete and analytic coherence agree in the exact regime", "[experiments]") {
    const double err = compare_discrete_analytic(figure_params(), EvolutionConfig(1e-5, 1e-2));
    REQUIRE(err <= 1e-9);
}

TEST_CASE("discrete-analytic error shrinks at second order in dt", "[experiments]") {
    // The recurrence's characteristic roots match exp(-r dt) through O(dt^2)
    // (the dt^3 mismatch was confirmed against a high-precision evaluation),
    // so halving dt divides the error by ~4.
    const ModelParams params = figure_params(0.5, 0.25);
    const double err_coarse = compare_discrete_analytic(params, EvolutionConfig(1e-5, 1e-2));
    REQUIRE(err_coarse <= 5e-3);
    const double err_fine = compare_discrete_analytic(params, EvolutionConfig(5e-6, 1e-2));
    REQUIRE(err_coarse / err_fine == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("convergence study estimates the discretization order", "[experiments]") {
    const ConvergenceReport report =
        convergence_order(figure_params(0.5, 0.0), {1e-4, 5e-5, 2.5e-5}, 1e-2);
    REQUIRE(report.rows.size() == 3);
    REQUIRE_FALSE(report.exact_regime);
    REQUIRE(report.rows[0].max_abs_error > report.rows[1].max_abs_error);
    REQUIRE(report.rows[1].max_abs_error > report.rows[2].max_abs_error);
    REQUIRE(report.estimated_order > 1.7);
    REQUIRE(report.estimated_order < 2.3);

    const ConvergenceReport thermal =
        convergence_order(figure_params(0.95, 0.8), {1e-4, 5e-5, 2.5e-5}, 1e-2);
    REQUIRE(thermal.estimated_order > 1.7);
    REQUIRE(thermal.estimated_order < 2.3);
}

TEST_CASE("convergence study flags the exact regime", "[experiments]") {
    const ConvergenceReport report =
        convergence_order(figure_params(0.0, 0.0), {1e-4, 5e-5, 2.5e-5}, 1e-2);
    REQUIRE(report.exact_regime);
    REQUIRE(std::isnan(report.estimated_order));
    for (const ConvergenceRow &row : report.rows)
        REQUIRE(row.max_abs_error <= 1e-9);
}

TEST_CASE("convergence study validates its dt list", "[experiments]") {
    const ModelParams params = figure_params(0.5, 0.0);
    REQUIRE_THROWS_AS(convergence_order(params, {1e-4}, 1e-2), DomainError);
    REQUIRE_THROWS_AS(convergence_order(params, {1e-4, 2e-4}, 1e-2), DomainError);
    REQUIRE_THROWS_AS(convergence_order(params, {1e-4, 3.3e-5}, 1e-2), DomainError);
}

TEST_CASE("csv emission is deterministic", "[experiments]") {
    const auto rows = sweep_factors(factors_spec({0.0, 0.25}, {0.0, 10.0, 50}));
    std::ostringstream first, second;
    write_factors_csv(first, "# qwipe factors", rows, 9);
    write_factors_csv(second, "# qwipe factors", rows, 9);
    REQUIRE(first.str() == second.str());
    REQUIRE(first.str().find("-0.0") == std::string::npos);
}

TEST_CASE("scientific formatting honors the precision setting", "[experiments]") {
    REQUIRE(format_sci(0.5, 9) == "5.00000000e-01");
    REQUIRE(format_sci(-0.0, 9) == "0.00000000e+00");
    REQUIRE(format_sci(1.0 / 3.0, 3) == "3.33e-01");
    REQUIRE(format_full(1e-5) == "1e-05");
    REQUIRE(format_full(0.25) == "0.25");
}
