// Minimal library tour: one Quidditch optimum and one MOBA reward sweep,
// everything computed in-process with no input files.

#include <iostream>

#include "gamechanger/io.hpp"
#include "gamechanger/moba.hpp"
#include "gamechanger/quidditch.hpp"

int main() {
    using namespace gamechanger;
    using namespace gamechanger::quidditch;

    const QuidditchParams params(0.2, 0.1);
    const std::int64_t xs = optimal_x_bruteforce(params);
    std::cout << "quidditch p=0.2 q=0.1\n"
              << "  optimal snitch score x* = " << xs << "\n"
              << "  surprise at x*          = "
              << format_number(surprise_closed_form(params, static_cast<double>(xs))) << "\n"
              << "  surprise at x=0         = " << format_number(surprise_closed_form(params, 0.0))
              << "\n";

    const moba::MobaModel model{
        PiecewiseLinear::constant(0.4),
        PiecewiseLinear({{1.0, 0.05}, {20.0, 0.3}}),
        PiecewiseLinear::constant(1500.0),
        PiecewiseLinear::constant(2250.0),
        PiecewiseLinear::constant(750.0),
        6.0,    // theta
        1.0,    // lambda
        0.0,    // delta_GC, swept below
        5,      // objective spawn round
        3,      // respawn delay
        7500.0, 7500.0,
        20,     // horizon
    };
    moba::SolveOptions opt;
    opt.grid_step = 125.0; // keeps the zero-reward control above the coarseness floor
    const moba::OptimizeResult res =
        moba::optimize_gc(model, {0.0, 500.0, 1000.0, 1500.0, 2000.0, 3000.0, 4500.0}, opt);
    std::cout << "moba synthetic horizon-20 model\n";
    for (const auto& pt : res.curve)
        std::cout << "  delta_gc=" << format_number(pt.delta_gc)
                  << "  surprise=" << format_number(pt.surprise) << "\n";
    std::cout << "  surprise-maximizing reward delta_gc* = " << format_number(res.delta_gc_star)
              << "\n";
    return 0;
}
