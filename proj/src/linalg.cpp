#include "orelab/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace orelab {

namespace {

std::size_t leading_index(const Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) return i;
    return v.size();
}

}  // namespace

RowSpace::RowSpace(const FieldCtx* ctx, std::size_t ncols) : ctx_(ctx), ncols_(ncols) {}

Vec RowSpace::reduce(Vec v) const {
    if (v.size() != ncols_) throw std::invalid_argument("linalg: vector length mismatch");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const FieldElem& c = v[pivots_[r]];
        if (c.is_zero()) continue;
        FieldElem factor = c;  // rows are normalized to leading 1
        for (std::size_t j = pivots_[r]; j < ncols_; ++j) v[j] -= factor * rows_[r][j];
    }
    return v;
}

std::optional<std::size_t> RowSpace::add(Vec v) {
    v = reduce(std::move(v));
    std::size_t lead = leading_index(v);
    if (lead == ncols_) return std::nullopt;
    FieldElem inv = v[lead].inv();
    for (std::size_t j = lead; j < ncols_; ++j) v[j] *= inv;
    // clear this column in the existing rows to stay fully reduced
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const FieldElem& c = rows_[r][lead];
        if (c.is_zero()) continue;
        FieldElem factor = c;
        for (std::size_t j = lead; j < ncols_; ++j) rows_[r][j] -= factor * v[j];
    }
    auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
    rows_.insert(rows_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, lead);
    return lead;
}

bool RowSpace::contains(const Vec& v) const { return leading_index(reduce(v)) == ncols_; }

std::size_t RowSpace::dim_from(std::size_t boundary) const {
    std::size_t n = 0;
    for (auto p : pivots_)
        if (p >= boundary) ++n;
    return n;
}

TrackedRowSpace::TrackedRowSpace(const FieldCtx* ctx, std::size_t ncols) : ctx_(ctx), ncols_(ncols) {}

bool TrackedRowSpace::add(const Vec& g) {
    if (g.size() != ncols_) throw std::invalid_argument("linalg: vector length mismatch");
    const std::size_t idx = ngens_++;
    Vec w = g;
    Vec combo;  // grown lazily; combo[j] = coefficient of generator j
    combo.resize(ngens_, ctx_->zero());
    combo[idx] = ctx_->one();
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const FieldElem& c = w[pivots_[r]];
        if (c.is_zero()) continue;
        FieldElem factor = c;
        for (std::size_t j = pivots_[r]; j < ncols_; ++j) w[j] -= factor * rows_[r][j];
        for (std::size_t j = 0; j < combos_[r].size(); ++j) combo[j] -= factor * combos_[r][j];
    }
    std::size_t lead = leading_index(w);
    if (lead == ncols_) return false;
    FieldElem inv = w[lead].inv();
    for (std::size_t j = lead; j < ncols_; ++j) w[j] *= inv;
    for (auto& c : combo) c *= inv;
    auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
    rows_.insert(rows_.begin() + pos, std::move(w));
    combos_.insert(combos_.begin() + pos, std::move(combo));
    pivots_.insert(pivots_.begin() + pos, lead);
    return true;
}

std::optional<Vec> TrackedRowSpace::express(const Vec& v) const {
    if (v.size() != ncols_) throw std::invalid_argument("linalg: vector length mismatch");
    Vec w = v;
    Vec combo(ngens_, ctx_->zero());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const FieldElem& c = w[pivots_[r]];
        if (c.is_zero()) continue;
        FieldElem factor = c;
        for (std::size_t j = pivots_[r]; j < ncols_; ++j) w[j] -= factor * rows_[r][j];
        for (std::size_t j = 0; j < combos_[r].size(); ++j) combo[j] += factor * combos_[r][j];
    }
    if (leading_index(w) != ncols_) return std::nullopt;
    return combo;
}

bool TrackedRowSpace::contains(const Vec& v) const { return express(v).has_value(); }

std::optional<Vec> solve_linear(const FieldCtx* ctx, const std::vector<Vec>& cols, const Vec& rhs) {
    TrackedRowSpace t(ctx, rhs.size());
    for (const auto& c : cols) t.add(c);
    return t.express(rhs);
}

std::vector<Vec> intersect_spans(const FieldCtx* ctx, const std::vector<Vec>& a, const std::vector<Vec>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t n = a[0].size();
    // Zassenhaus: rows [u | u] for u in a, [v | 0] for v in b; the right
    // halves of RREF rows with zero left half span the intersection.
    RowSpace rs(ctx, 2 * n);
    for (const auto& u : a) {
        Vec w(2 * n, ctx->zero());
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = u[i];
            w[n + i] = u[i];
        }
        rs.add(std::move(w));
    }
    for (const auto& v : b) {
        Vec w(2 * n, ctx->zero());
        for (std::size_t i = 0; i < n; ++i) w[i] = v[i];
        rs.add(std::move(w));
    }
    std::vector<Vec> out;
    for (std::size_t r = 0; r < rs.rows().size(); ++r) {
        if (rs.pivots()[r] < n) continue;
        Vec w(n, ctx->zero());
        for (std::size_t i = 0; i < n; ++i) w[i] = rs.rows()[r][n + i];
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace orelab
