#pragma once

#include <stdexcept>
#include <string>

namespace lhit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// walk_law
struct BadProbabilities : Error { using Error::Error; };
struct NotZeroMean : Error { using Error::Error; };
struct NotIrreducible : Error { using Error::Error; };

// continuum kernels
struct DomainError : Error { using Error::Error; };
struct SingularArguments : Error { using Error::Error; };
struct OnSlit : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };

// lattice solvers
struct SingularSystem : Error { using Error::Error; };
struct WindowTooSmall : Error { using Error::Error; };
struct BudgetInfeasible : Error { using Error::Error; };
struct SeriesNotConverged : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };

// lab
struct WrongWalk : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace lhit
