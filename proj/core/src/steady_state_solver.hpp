#pragma once

// Internal machinery behind solve_steady_state(): the parity sector, the
// trace-constrained system, and the two linear solvers.

#include <optional>
#include <vector>

#include "quadblockade/hilbert.hpp"

namespace quadblockade::detail {

/// Unknowns of the even (m - m') phonon-parity sector, grouped into photon
/// blocks (s, s') ordered by decreasing s + s'. Within a block the order is
/// column-major in (m, m').
struct SectorLayout {
  int hilbert_dim = 0;
  std::vector<int> full_index;         // sector position -> column-major vec index
  std::vector<int> sector_index;       // vec index -> sector position, or -1
  std::vector<int> block_start;        // size n_blocks + 1
  std::vector<int> block_level;        // s + s' of each block
  std::vector<int> block_of;           // sector position -> block
  int pinned_row = 0;                  // equation replaced by the trace constraint

  int size() const noexcept { return static_cast<int>(full_index.size()); }
  int n_blocks() const noexcept { return static_cast<int>(block_level.size()); }
};

SectorLayout even_parity_sector(const FockSpace& space);

/// Restriction of L to the sector with the pinned row replaced by tr(rho).
SparseOperator constrained_system(const SparseOperator& liouvillian, const SectorLayout& layout);

/// Restriction of L to the sector, without the trace row.
SparseOperator sector_generator(const SparseOperator& liouvillian, const SectorLayout& layout);

/// Right-hand side e_pinned matching constrained_system().
Eigen::VectorXcd constraint_rhs(const SectorLayout& layout);

/// Sparse LU (UMFPACK). Returns nullopt when the factorization is singular.
std::optional<Eigen::VectorXcd> solve_direct(const SparseOperator& system, const Eigen::VectorXcd& rhs);

struct KrylovOutcome {
  Eigen::VectorXcd solution;
  int iterations = 0;
  bool converged = false;
};

/// GMRES preconditioned by the photon-block Gauss-Seidel splitting of the
/// system: every coupling from a block of lower s + s' into a higher one is
/// dropped (those are drive-induced), leaving a block upper-triangular
/// operator that is inverted block by block with sparse LU. Returns nullopt if
/// a diagonal block is singular.
std::optional<KrylovOutcome> solve_krylov(const SparseOperator& system, const Eigen::VectorXcd& rhs,
                                          const SectorLayout& layout, double tolerance,
                                          int max_iterations);

/// Expands a sector vector back to a full column-major vec(rho).
Eigen::VectorXcd expand(const Eigen::VectorXcd& sector_vector, const SectorLayout& layout);

}  // namespace quadblockade::detail
