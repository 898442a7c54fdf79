#pragma once

/// @file linsolve.hpp
/// @brief Direct solvers for the periodic tridiagonal systems produced by
///        assembly: Thomas elimination on the band plus a low-rank
///        Sherman-Morrison-Woodbury correction for the wrap-around corners.

#include <stdexcept>
#include <string>
#include <vector>

#include "csflow/assembly.hpp"

namespace csflow {

/// Elimination hit a pivot below the relative tolerance; the system is
/// singular or too close to it.
struct SingularSystemError : std::runtime_error {
    int pivot;
    explicit SingularSystemError(int p)
        : std::runtime_error("singular system: pivot " + std::to_string(p) +
                             " below tolerance"),
          pivot(p) {}
};

/// Solve A x = rhs for a cyclic tridiagonal A. Deterministic; throws
/// SingularSystemError when a pivot falls below 1e-13 relative to the
/// largest row magnitude of A.
std::vector<double> solve_cyclic_tridiag(const CyclicTridiagonal& A,
                                         const std::vector<double>& rhs);

/// Solve A x = rhs for a block cyclic tridiagonal A with 2x2 blocks, same
/// guarantees as the scalar solver.
std::vector<Vec2> solve_block_cyclic(const BlockCyclicTridiagonal& A,
                                     const std::vector<Vec2>& rhs);

}  // namespace csflow
