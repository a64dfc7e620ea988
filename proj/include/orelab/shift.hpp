#ifndef ORELAB_SHIFT_HPP
#define ORELAB_SHIFT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "orelab/freealg.hpp"

namespace orelab {

/// Coefficients of v under the substitution x -> x + y, collected by formal
/// y-degree: gamma_y(v) = sum_j y^j comp_j(v). comp_0(v) = v. Computed
/// combinatorially (each x either stays or is deleted against one factor y).
std::vector<FreePoly> gamma_components(const FreePoly& v);

/// The shift automorphism gamma_t: a -> a, b -> b, x -> x + t.
FreePoly gamma_t(const FreePoly& v, const FieldElem& t);
MatFree gamma_t(const MatFree& m, const FieldElem& t);

/// True iff gamma_t(v) = v for every sampled t. Elements of P are fixed by
/// every shift; a false return on a claimed P-element signals a bug.
bool gamma_fixes_check(const FreePoly& v, const std::vector<FieldElem>& samples);

/// gamma_y(M) = sum_i y^i M_i together with the w(n, m) recurrence
///   w(n, m) = sum_i w(i, 1) w(n-i, m-1),   w(n, 1) = M_n,
/// memoized per expansion. The evaluation property (substituting y := s
/// reproduces gamma_s(M)) is spot-checked at construction.
class GammaExpansion {
public:
    static GammaExpansion expand(const MatFree& m);

    const MatFree& base() const { return base_; }
    std::size_t ydeg() const { return comps_.size() - 1; }
    std::size_t dim() const { return base_.dim(); }
    const FieldCtx* ctx() const { return base_.ctx(); }
    const std::vector<MatFree>& components() const { return comps_; }
    /// M_j, a zero matrix beyond the top y-degree.
    const MatFree& component(std::size_t j) const;

    /// w(n, m): sum of all m-fold products of components with indices
    /// summing to n. Zero whenever n > ydeg * m. Memoized; not thread-safe
    /// across shared instances.
    const MatFree& w(std::size_t n, std::size_t m) const;

private:
    GammaExpansion(MatFree base, std::vector<MatFree> comps);

    MatFree base_;
    std::vector<MatFree> comps_;
    MatFree zero_;
    mutable std::map<std::pair<std::size_t, std::size_t>, MatFree> wmemo_;
};

/// Recovers the gamma_y components of M from evaluations at distinct nodes
/// by solving the Vandermonde system sum_j t_i^j X_j = value_i.
std::vector<MatFree> vandermonde_extract(const std::vector<std::pair<FieldElem, MatFree>>& values);

/// Builds ydeg+1 distinct nodes (throws the "field too small" error when the
/// field cannot supply them), extracts, and asserts agreement with the
/// generic expansion.
std::vector<MatFree> vandermonde_recover(const GammaExpansion& g);

/// L(S): the smallest subspace containing S and closed under every shift
/// gamma_t. Computed generically as the span of all gamma_y components of
/// the basis; closure under sampled shifts is asserted.
Span platinum_closure(const Span& s);

/// Generating-function sums e(n, m) = sum over compositions of n into m
/// parts of products r_{i_1} ... r_{i_m}, memoized via the k = 1 recurrence.
class ESeq {
public:
    ESeq(const FieldCtx* ctx, std::vector<FreePoly> gens);

    const FieldCtx* ctx() const { return ctx_; }
    const std::vector<FreePoly>& gens() const { return gens_; }
    std::size_t top_index() const { return gens_.size() - 1; }

    /// e(n, m), m >= 1. Zero whenever n > top_index * m.
    const FreePoly& e(std::size_t n, std::size_t m) const;

private:
    const FieldCtx* ctx_;
    std::vector<FreePoly> gens_;
    FreePoly zero_;
    mutable std::map<std::pair<std::size_t, std::size_t>, FreePoly> memo_;
};

/// S(L(M^m)) as the span of the entries of w(i, m), i = 0..ydeg*m.
Span slm_span(const GammaExpansion& g, std::size_t m);
Span slm_span(const MatFree& m, std::size_t mm);

struct ScanRow {
    std::size_t n;
    std::size_t dim_r;        // dim(R  ∩ S(L(M^n)))
    bool bound_met;           // dim_r^2 <= n, exact integer comparison
    std::optional<bool> entries_in_ideal_x;  // all entries of M^n in <x>, when checked
};

struct ScanReport {
    std::vector<ScanRow> rows;
    std::vector<std::size_t> witnesses;  // n with the bound met
};

/// Window scan for the sqrt(n) dimension bound. Reports evidence for the
/// scanned window only; the unbounded statement is never claimed.
ScanReport assumption1_scan(const MatFree& m, std::size_t n_from, std::size_t n_to, bool check_ideal_x = false);

}  // namespace orelab

#endif
