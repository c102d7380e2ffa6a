#include "debtcrit/solve_config.hpp"

#include <cmath>

#include "debtcrit/errors.hpp"

namespace debtcrit {

void SolveConfig::validate(const char* module) const {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw Error(ErrorKind::InvalidArgument, module, "solver tolerance must be positive");
    }
    if (max_iter < 1) {
        throw Error(ErrorKind::InvalidArgument, module, "max_iter must be at least 1");
    }
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, module, "damping must lie in (0, 1]");
    }
}

}  // namespace debtcrit
