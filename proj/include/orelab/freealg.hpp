#ifndef ORELAB_FREEALG_HPP
#define ORELAB_FREEALG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orelab/linalg.hpp"

namespace orelab {

/// Monomial of the free algebra F<a,b,x>: a string over {'a','b','x'}.
/// The empty word is the identity of the unital extension.
using Word = std::string;

/// Gradation counts only the letters a and b; x contributes 0.
std::size_t gradation(const Word& w);

/// Canonical word order: by length, then lexicographic with a < b < x.
struct WordOrder {
    bool operator()(const Word& u, const Word& v) const {
        if (u.size() != v.size()) return u.size() < v.size();
        return u < v;
    }
};

bool word_valid(const Word& w);

/// Membership tags for the distinguished subspaces, decidable per word.
struct WordClass {
    bool in_R = false;       // no letter x
    bool in_A = false;       // first letter is a or b
    bool in_Astar = false;   // A-word, even gradation, all aligned 2-blocks equal-letter
    bool in_Bcomp = false;   // A-word, even gradation, not Astar
    bool in_ideal_x = false; // contains at least one x
    bool in_Abar = false;    // gradation >= 1
};

WordClass classify_word(const Word& w);

/// Sparse element of F<a,b,x> (with constants allowed, i.e. the unital
/// extension): a finite map word -> nonzero coefficient.
class FreePoly {
public:
    FreePoly() : ctx_(nullptr) {}
    explicit FreePoly(const FieldCtx* ctx) : ctx_(ctx) {}
    FreePoly(const FieldCtx* ctx, const Word& w);  // single monomial, coefficient 1

    static FreePoly zero(const FieldCtx* ctx) { return FreePoly(ctx); }
    static FreePoly constant(const FieldCtx* ctx, const FieldElem& c);
    static FreePoly monomial(const FieldCtx* ctx, const Word& w, const FieldElem& c);

    const FieldCtx* ctx() const { return ctx_; }
    const std::map<Word, FieldElem, WordOrder>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }
    FieldElem coeff(const Word& w) const;
    void add_term(const Word& w, const FieldElem& c);

    FreePoly operator+(const FreePoly& o) const;
    FreePoly operator-(const FreePoly& o) const;
    FreePoly operator-() const;
    FreePoly operator*(const FreePoly& o) const;  // bilinear word concatenation
    FreePoly scaled(const FieldElem& c) const;
    FreePoly& operator+=(const FreePoly& o) { return *this = *this + o; }
    FreePoly& operator-=(const FreePoly& o) { return *this = *this - o; }

    bool operator==(const FreePoly& o) const;
    bool operator!=(const FreePoly& o) const { return !(*this == o); }

    /// Gradation if homogeneous (all words of equal gradation), else nullopt.
    /// The zero element reports gradation 0.
    std::optional<std::size_t> homogeneous_gradation() const;
    bool is_homogeneous() const { return homogeneous_gradation().has_value(); }

    /// "axb + 2*ba + (1+t)*xx"; deterministic canonical word order.
    std::string str() const;
    static FreePoly parse(const FieldCtx* ctx, const std::string& text);

private:
    void check_same_ctx(const FreePoly& o) const;

    const FieldCtx* ctx_;
    std::map<Word, FieldElem, WordOrder> terms_;
};

FreePoly operator*(const FieldElem& c, const FreePoly& v);

/// A finite-dimensional subspace of FreePoly values: an explicit coordinate
/// word list plus a reduced row echelon basis. Coordinates are ordered with
/// x-containing words first so the intersection with R can be read off the
/// echelon rows (pivots in the trailing x-free block).
class Span {
public:
    /// Span of the given elements; the coordinate universe is the union of
    /// their supports.
    static Span from(const FieldCtx* ctx, const std::vector<FreePoly>& gens);

    /// Empty span over an explicit universe (for incremental sweeps).
    static Span over_universe(const FieldCtx* ctx, const std::vector<Word>& universe);

    struct AddResult {
        bool grew = false;    // element was independent of the current span
        bool grew_r = false;  // the R-intersection dimension increased
    };
    /// Inserts v; every word of v must lie in the universe.
    AddResult add(const FreePoly& v);

    std::size_t dim() const { return rows_.dim(); }
    /// dim(R  ∩ span): number of echelon rows supported on x-free words.
    std::size_t r_dim() const { return rows_.dim_from(xfree_begin_); }

    bool contains(const FreePoly& v) const;
    std::vector<FreePoly> basis() const;
    /// Subspace of vectors supported only on x-free words, as a new Span.
    Span intersect_with_R() const;

    const FieldCtx* ctx() const { return ctx_; }
    const std::vector<Word>& universe() const { return coords_; }

    bool equals(const Span& o) const;
    static Span sum(const Span& a, const Span& b);

private:
    Span(const FieldCtx* ctx, std::vector<Word> coords);
    Vec to_vec(const FreePoly& v) const;
    FreePoly from_vec(const Vec& v) const;

    const FieldCtx* ctx_;
    std::vector<Word> coords_;  // x-containing words first, then x-free words
    std::map<Word, std::size_t, WordOrder> index_;
    std::size_t xfree_begin_;
    RowSpace rows_;
};

/// Convenience wrappers matching the operation names used elsewhere.
inline Span span_from(const FieldCtx* ctx, const std::vector<FreePoly>& gens) { return Span::from(ctx, gens); }

/// Square matrix with FreePoly entries.
class MatFree {
public:
    MatFree() : ctx_(nullptr), d_(0) {}
    MatFree(const FieldCtx* ctx, std::size_t d);  // zero matrix

    static MatFree from_entries(const FieldCtx* ctx, std::vector<std::vector<FreePoly>> rows);

    std::size_t dim() const { return d_; }
    const FieldCtx* ctx() const { return ctx_; }
    const FreePoly& at(std::size_t r, std::size_t c) const { return e_[r * d_ + c]; }
    FreePoly& at(std::size_t r, std::size_t c) { return e_[r * d_ + c]; }

    MatFree operator+(const MatFree& o) const;
    MatFree operator-(const MatFree& o) const;
    MatFree operator*(const MatFree& o) const;
    MatFree scaled(const FieldElem& c) const;
    MatFree pow(std::size_t n) const;  // n >= 1

    bool is_zero() const;
    bool operator==(const MatFree& o) const;
    bool operator!=(const MatFree& o) const { return !(*this == o); }

    std::vector<FreePoly> entries() const { return e_; }

    /// Common gradation of all nonzero entries, if homogeneous.
    std::optional<std::size_t> homogeneous_gradation() const;

private:
    const FieldCtx* ctx_;
    std::size_t d_;
    std::vector<FreePoly> e_;  // row-major
};

}  // namespace orelab

#endif
