#pragma once

// CSV emission. Reals are written with 17 significant digits so files are
// byte-identical across runs with identical inputs.

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "afl/core.hpp"
#include "afl/experiments.hpp"
#include "afl/spectral.hpp"

namespace afl::io {

inline std::string real17(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline const char* sweep_header = "nu,theta,lam1_re,lam1_im,lam2_re,lam2_im,e1_principal,e1_spurious,e2_principal,collision_flag";
inline const char* solution_header = "x_center,average,exact_average,x_right_interface,point_value,exact_point_value";
inline const char* convergence_header = "n_cells,l1_avg,l2_avg,linf_avg,l1_pt,l2_pt,linf_pt,eoc_l2_avg";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool header = true) {
    if (header) {
        os << sweep_header << '\n';
    }
    for (const auto& r : rows) {
        os << real17(r.nu) << ',' << real17(r.theta) << ',' << real17(r.lam1.real()) << ','
           << real17(r.lam1.imag()) << ',' << real17(r.lam2.real()) << ',' << real17(r.lam2.imag()) << ','
           << real17(r.e1_principal) << ',' << real17(r.e1_spurious) << ','
           << real17(r.e2_principal.value_or(std::nan(""))) << ',' << (r.collision ? 1 : 0) << '\n';
    }
}

inline void write_solution_csv(std::ostream& os, const Grid1D& grid, const SolutionState& numerical,
                               const SolutionState& exact) {
    os << solution_header << '\n';
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
        os << real17(grid.center(i)) << ',' << real17(numerical.averages()[i]) << ','
           << real17(exact.averages()[i]) << ',' << real17(grid.right_interface(i)) << ','
           << real17(numerical.point_values()[i]) << ',' << real17(exact.point_values()[i]) << '\n';
    }
}

inline void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study) {
    os << convergence_header << '\n';
    for (const auto& r : study.rows) {
        const auto& e = r.errors;
        os << r.n_cells << ',' << real17(e.averages.l1) << ',' << real17(e.averages.l2) << ','
           << real17(e.averages.linf) << ',' << real17(e.point_values.l1) << ',' << real17(e.point_values.l2)
           << ',' << real17(e.point_values.linf) << ',';
        if (const auto eoc = r.headline_eoc()) {
            os << real17(*eoc);
        }
        os << '\n';
    }
}

}  // namespace afl::io
