#ifndef ORELAB_LINALG_HPP
#define ORELAB_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "orelab/field.hpp"

namespace orelab {

using Vec = std::vector<FieldElem>;

/// A growing row space in reduced row echelon form over a fixed finite
/// coordinate list. Rows are kept normalized (leading 1, cleared columns),
/// so two equal subspaces have identical row lists.
class RowSpace {
public:
    RowSpace(const FieldCtx* ctx, std::size_t ncols);

    /// Inserts v into the space. Returns the pivot column of the newly
    /// created row, or nullopt if v was already in the span.
    std::optional<std::size_t> add(Vec v);

    /// Residual of v after elimination against the current rows.
    Vec reduce(Vec v) const;

    bool contains(const Vec& v) const;
    std::size_t dim() const { return rows_.size(); }
    std::size_t ncols() const { return ncols_; }
    const std::vector<Vec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Number of rows whose pivot column is >= boundary. With coordinates
    /// ordered so that a distinguished block comes last, this equals the
    /// dimension of the intersection with that coordinate block.
    std::size_t dim_from(std::size_t boundary) const;

    bool operator==(const RowSpace& o) const { return ncols_ == o.ncols_ && rows_ == o.rows_; }

private:
    const FieldCtx* ctx_;
    std::size_t ncols_;
    std::vector<Vec> rows_;            // RREF, pivot columns strictly increasing
    std::vector<std::size_t> pivots_;  // pivot column per row
};

/// Row space that remembers how each basis row was formed from the inserted
/// generators, so arbitrary vectors can be expressed in terms of them.
class TrackedRowSpace {
public:
    TrackedRowSpace(const FieldCtx* ctx, std::size_t ncols);

    /// Inserts a generator; returns false if it was dependent on earlier ones.
    bool add(const Vec& g);

    /// Coefficients c with v = sum c_i * generator_i, or nullopt if v is
    /// outside the span. Dependent generators always get coefficient 0.
    std::optional<Vec> express(const Vec& v) const;

    std::size_t dim() const { return rows_.size(); }
    std::size_t num_generators() const { return ngens_; }
    bool contains(const Vec& v) const;

private:
    const FieldCtx* ctx_;
    std::size_t ncols_;
    std::size_t ngens_ = 0;
    std::vector<Vec> rows_;    // echelon (not necessarily fully reduced)
    std::vector<Vec> combos_;  // row i = sum_j combos_[i][j] * generator_j
    std::vector<std::size_t> pivots_;
};

/// Solves the linear system: find c with sum c_i * cols[i] = rhs (exact).
/// Returns nullopt if inconsistent; free variables are set to zero.
std::optional<Vec> solve_linear(const FieldCtx* ctx, const std::vector<Vec>& cols, const Vec& rhs);

/// Basis of the intersection of two row spaces given by generator lists
/// (Zassenhaus). All vectors must have the same length.
std::vector<Vec> intersect_spans(const FieldCtx* ctx, const std::vector<Vec>& a, const std::vector<Vec>& b);

}  // namespace orelab

#endif
