#pragma once

namespace debtcrit {

/// Knobs shared by every iterative solver in the library.
struct SolveConfig {
    double tol = 1e-12;   // convergence tolerance on successive iterates
    int max_iter = 10000;
    double damping = 1.0; // fixed-point relaxation factor, in (0, 1]

    /// Throws InvalidArgument when any field is out of range.
    void validate(const char* module) const;
};

}  // namespace debtcrit
