#pragma once

#include <string>
#include <vector>

namespace qpart {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

/// Numerical average of m1^2 against the closed form at the reference
/// two-frequency parameters, over randomized initial conditions.
std::vector<CheckResult> verify_harmonic();

/// Numerical average of m^2 against 1/2 F^2/(lambda^2 + Omega^2) over
/// randomized initial conditions; also the sample spread (single basin).
std::vector<CheckResult> verify_dissipative();

/// Convergence-order ratios for rk4 and symplectic4, the augmented-Hamiltonian
/// conservation check (secular drift of Hbar), and symplectic time
/// reversibility.
std::vector<CheckResult> verify_integrator();

int count_failures(const std::vector<CheckResult>& results);

} // namespace qpart
