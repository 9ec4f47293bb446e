#pragma once

#include <charconv>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "qwipe/experiments.hpp"

namespace qwipe {

/// Scientific notation with `precision` significant digits. -0 is folded
/// into +0 so output bytes do not depend on how a zero was produced.
inline std::string format_sci(double v, int precision) {
    if (v == 0.0)
        v = 0.0;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*e", precision > 0 ? precision - 1 : 0, v);
    return buf;
}

/// Shortest representation that parses back to the same double; used when
/// echoing parameters into header comments.
inline std::string format_full(double v) {
    if (v == 0.0)
        v = 0.0;
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_list(const std::vector<double> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0)
            out += ',';
        out += format_full(values[i]);
    }
    return out;
}

inline void write_factors_csv(std::ostream &os, const std::string &header_comment,
                              const std::vector<FactorsRow> &rows, int precision) {
    os << header_comment << '\n';
    os << "epsilon,lnx_over_c,re_rp_over_c,im_rp_over_c,re_rm_over_c,im_rm_over_c\n";
    for (const FactorsRow &r : rows)
        os << format_sci(r.epsilon, precision) << ',' << format_sci(r.lnx_over_c, precision)
           << ',' << format_sci(r.re_rp_over_c, precision) << ','
           << format_sci(r.im_rp_over_c, precision) << ','
           << format_sci(r.re_rm_over_c, precision) << ','
           << format_sci(r.im_rm_over_c, precision) << '\n';
}

inline void write_eta_csv(std::ostream &os, const std::string &header_comment,
                          const std::vector<EtaRow> &rows, int precision) {
    os << header_comment << '\n';
    os << "p,epsilon,t,abs_eta_over_b\n";
    for (const EtaRow &r : rows)
        os << format_sci(r.p, precision) << ',' << format_sci(r.epsilon, precision) << ','
           << format_sci(r.t, precision) << ',' << format_sci(r.abs_eta_over_b, precision)
           << '\n';
}

inline void write_simulate_csv(std::ostream &os, const std::string &header_comment,
                               const std::vector<SimulateRow> &rows, int precision) {
    os << header_comment << '\n';
    os << "t,abs_coherence,rho01_re,rho01_im,trace_error,min_eig\n";
    for (const SimulateRow &r : rows)
        os << format_sci(r.t, precision) << ',' << format_sci(r.abs_coherence, precision) << ','
           << format_sci(r.rho01_re, precision) << ',' << format_sci(r.rho01_im, precision)
           << ',' << format_sci(r.trace_error, precision) << ','
           << format_sci(r.min_eig, precision) << '\n';
}

inline void write_compare_csv(std::ostream &os, const std::string &header_comment,
                              double max_abs_error, int precision) {
    os << header_comment << '\n';
    os << "max_abs_error\n";
    os << format_sci(max_abs_error, precision) << '\n';
}

inline void write_convergence_csv(std::ostream &os, const std::string &header_comment,
                                  const ConvergenceReport &report, int precision) {
    os << header_comment << '\n';
    os << "dt,max_abs_error\n";
    for (const ConvergenceRow &r : report.rows)
        os << format_sci(r.dt, precision) << ',' << format_sci(r.max_abs_error, precision)
           << '\n';
    os << "# estimated_order=" << format_sci(report.estimated_order, precision)
       << " exact_regime=" << (report.exact_regime ? 1 : 0) << '\n';
}

} // namespace qwipe
