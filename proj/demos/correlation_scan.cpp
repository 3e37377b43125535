// Writes the two-click correlation and its integrated detection probability
// for a few pulse widths (CSV to stdout).

#include <iostream>

#include "stimwave/stimwave.hpp"

int main() {
    using namespace stimwave;
    CsvWriter csv(std::cout);
    csv.comment("curve", "g2(0,tau) and p2(tau) for several pulse widths");
    csv.header({"tau", "g2_d1", "g2_d3", "p2_d1", "p2_d3"});
    for (int i = 0; i <= 120; ++i) {
        const double tau = 6.0 * i / 120;
        csv.row({tau, g2(0.0, tau, {1.0, 1.0, 0.0}), g2(0.0, tau, {1.0, 3.0, 0.0}),
                 p2_integrated(tau, {1.0, 1.0, 0.0}),
                 p2_integrated(tau, {1.0, 3.0, 0.0})});
    }
    return 0;
}
