#include "steady_state_solver.hpp"

#include <algorithm>
#include <memory>
#include <utility>

#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>
#include <unsupported/Eigen/IterativeSolvers>

namespace quadblockade::detail {

SectorLayout even_parity_sector(const FockSpace& space) {
  const int na = space.photon_levels();
  const int nb = space.phonon_levels();
  const int d = space.dim();

  std::vector<std::pair<int, int>> blocks;
  for (int s = 0; s < na; ++s) {
    for (int sp = 0; sp < na; ++sp) blocks.emplace_back(s, sp);
  }
  std::stable_sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) {
    return x.first + x.second > y.first + y.second;
  });

  SectorLayout layout;
  layout.hilbert_dim = d;
  layout.sector_index.assign(static_cast<std::size_t>(d) * d, -1);
  const std::size_t expected = static_cast<std::size_t>(na) * na * ((nb * nb + 1) / 2);
  layout.full_index.reserve(expected);
  layout.block_of.reserve(expected);

  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto [s, sp] = blocks[k];
    layout.block_start.push_back(layout.size());
    layout.block_level.push_back(s + sp);
    for (int mp = 0; mp < nb; ++mp) {
      for (int m = mp % 2; m < nb; m += 2) {
        const int i = space.index(s, m);
        const int j = space.index(sp, mp);
        const int vec = i + d * j;
        layout.sector_index[vec] = layout.size();
        layout.full_index.push_back(vec);
        layout.block_of.push_back(static_cast<int>(k));
      }
    }
  }
  layout.block_start.push_back(layout.size());
  layout.pinned_row = layout.sector_index[0];  // vacuum population rho(00, 00)
  return layout;
}

namespace {

SparseOperator restrict_generator(const SparseOperator& liouvillian, const SectorLayout& layout,
                                  bool with_trace_row) {
  const int n = layout.size();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(liouvillian.nonZeros() / 2 + layout.hilbert_dim));
  for (int col = 0; col < liouvillian.outerSize(); ++col) {
    const int c = layout.sector_index[col];
    if (c < 0) continue;
    for (SparseOperator::InnerIterator it(liouvillian, col); it; ++it) {
      const int r = layout.sector_index[it.row()];
      if (r < 0) continue;
      if (with_trace_row && r == layout.pinned_row) continue;
      triplets.emplace_back(r, c, it.value());
    }
  }
  if (with_trace_row) {
    const int d = layout.hilbert_dim;
    for (int k = 0; k < d; ++k) {
      triplets.emplace_back(layout.pinned_row, layout.sector_index[k + d * k], Complex(1.0, 0.0));
    }
  }
  SparseOperator out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

}  // namespace

SparseOperator constrained_system(const SparseOperator& liouvillian, const SectorLayout& layout) {
  return restrict_generator(liouvillian, layout, true);
}

SparseOperator sector_generator(const SparseOperator& liouvillian, const SectorLayout& layout) {
  return restrict_generator(liouvillian, layout, false);
}

Eigen::VectorXcd constraint_rhs(const SectorLayout& layout) {
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(layout.size());
  rhs(layout.pinned_row) = 1.0;
  return rhs;
}

std::optional<Eigen::VectorXcd> solve_direct(const SparseOperator& system, const Eigen::VectorXcd& rhs) {
  Eigen::UmfPackLU<SparseOperator> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) return std::nullopt;
  Eigen::VectorXcd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) return std::nullopt;
  return x;
}

namespace {

// Eigen preconditioner concept: analyzePattern / factorize / compute / solve / info.
class PhotonBlockPreconditioner {
 public:
  PhotonBlockPreconditioner() = default;

  void set_layout(const SectorLayout* layout) { layout_ = layout; }

  template <typename MatType>
  PhotonBlockPreconditioner& analyzePattern(const MatType&) {
    return *this;
  }
  template <typename MatType>
  PhotonBlockPreconditioner& factorize(const MatType& a) {
    return compute(a);
  }
  template <typename MatType>
  PhotonBlockPreconditioner& compute(const MatType& a) {
    build(SparseOperator(a));
    return *this;
  }

  template <typename Rhs>
  Eigen::VectorXcd solve(const Rhs& b) const {
    return apply(Eigen::VectorXcd(b));
  }

  Eigen::ComputationInfo info() const { return info_; }

 private:
  void build(const SparseOperator& a) {
    info_ = Eigen::InvalidInput;
    if (layout_ == nullptr || a.rows() != layout_->size()) return;
    const auto& lay = *layout_;
    const int nblocks = lay.n_blocks();

    std::vector<std::vector<Eigen::Triplet<Complex>>> diag(nblocks);
    std::vector<std::vector<Eigen::Triplet<Complex>>> upper(nblocks);
    for (int col = 0; col < a.outerSize(); ++col) {
      const int cb = lay.block_of[col];
      for (SparseOperator::InnerIterator it(a, col); it; ++it) {
        const int row = static_cast<int>(it.row());
        const int rb = lay.block_of[row];
        const int r0 = lay.block_start[rb];
        if (rb == cb) {
          diag[rb].emplace_back(row - r0, col - lay.block_start[cb], it.value());
        } else if (lay.block_level[cb] > lay.block_level[rb]) {
          upper[rb].emplace_back(row - r0, col, it.value());
        }
      }
    }

    blocks_.clear();
    couplings_.clear();
    for (int k = 0; k < nblocks; ++k) {
      const int size = lay.block_start[k + 1] - lay.block_start[k];
      SparseOperator block(size, size);
      block.setFromTriplets(diag[k].begin(), diag[k].end());
      block.makeCompressed();
      auto lu = std::make_unique<Eigen::SparseLU<SparseOperator>>();
      lu->compute(block);
      if (lu->info() != Eigen::Success) {
        info_ = Eigen::NumericalIssue;
        return;
      }
      blocks_.push_back(std::move(lu));

      SparseOperator coupling(size, lay.size());
      coupling.setFromTriplets(upper[k].begin(), upper[k].end());
      coupling.makeCompressed();
      couplings_.push_back(std::move(coupling));
    }
    info_ = Eigen::Success;
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& b) const {
    const auto& lay = *layout_;
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(b.size());
    for (int k = 0; k < lay.n_blocks(); ++k) {
      const int start = lay.block_start[k];
      const int size = lay.block_start[k + 1] - start;
      Eigen::VectorXcd local = b.segment(start, size);
      if (couplings_[k].nonZeros() > 0) {
        local -= couplings_[k] * x;
      }
      x.segment(start, size) = blocks_[k]->solve(local);
    }
    return x;
  }

  const SectorLayout* layout_ = nullptr;
  std::vector<std::unique_ptr<Eigen::SparseLU<SparseOperator>>> blocks_;
  std::vector<SparseOperator> couplings_;
  Eigen::ComputationInfo info_ = Eigen::Success;
};

}  // namespace

std::optional<KrylovOutcome> solve_krylov(const SparseOperator& system, const Eigen::VectorXcd& rhs,
                                          const SectorLayout& layout, double tolerance,
                                          int max_iterations) {
  Eigen::GMRES<SparseOperator, PhotonBlockPreconditioner> gmres;
  gmres.preconditioner().set_layout(&layout);
  gmres.set_restart(80);
  gmres.setTolerance(tolerance);
  gmres.setMaxIterations(max_iterations);
  gmres.compute(system);
  if (gmres.info() != Eigen::Success) return std::nullopt;

  KrylovOutcome outcome;
  outcome.solution = gmres.solve(rhs);
  outcome.iterations = static_cast<int>(gmres.iterations());
  outcome.converged = gmres.info() == Eigen::Success && outcome.solution.allFinite();
  return outcome;
}

Eigen::VectorXcd expand(const Eigen::VectorXcd& sector_vector, const SectorLayout& layout) {
  const int d = layout.hilbert_dim;
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  for (int k = 0; k < layout.size(); ++k) {
    full(layout.full_index[k]) = sector_vector(k);
  }
  return full;
}

}  // namespace quadblockade::detail
