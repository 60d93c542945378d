// Sweep the technical-noise range for a correlated target and print the
// fidelity curve as CSV on stdout.

#include <cstdio>

#include "ionsynth/ionsynth.hpp"

using namespace ionsynth;

int main() {
    const TargetState target = correlated_state(cplx{2.0, 0.0}, 8);
    const PulseSequence prep = preparation_sequence(de_evolve(target));

    const std::vector<double> deltas{0.0, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    const auto reports = sweep(prep, target, deltas, 100, /*seed=*/7,
                               NoiseWindow::centered, /*threads=*/0);
    std::fputs(sweep_csv(reports).c_str(), stdout);
    return 0;
}
