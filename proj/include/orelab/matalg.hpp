#ifndef ORELAB_MATALG_HPP
#define ORELAB_MATALG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orelab/freealg.hpp"
#include "orelab/linalg.hpp"

namespace orelab {

/// Square matrix with field entries.
class MatConst {
public:
    MatConst() : ctx_(nullptr), d_(0) {}
    MatConst(const FieldCtx* ctx, std::size_t d);  // zero matrix
    static MatConst identity(const FieldCtx* ctx, std::size_t d);
    static MatConst from_rows(const FieldCtx* ctx, const std::vector<std::vector<FieldElem>>& rows);
    static MatConst unit(const FieldCtx* ctx, std::size_t d, std::size_t r, std::size_t c);  // E_rc

    const FieldCtx* ctx() const { return ctx_; }
    std::size_t dim() const { return d_; }
    const FieldElem& at(std::size_t r, std::size_t c) const { return e_[r * d_ + c]; }
    FieldElem& at(std::size_t r, std::size_t c) { return e_[r * d_ + c]; }

    MatConst operator+(const MatConst& o) const;
    MatConst operator-(const MatConst& o) const;
    MatConst operator*(const MatConst& o) const;
    MatConst operator-() const;
    MatConst scaled(const FieldElem& c) const;
    MatConst pow(std::uint64_t n) const;  // n >= 1

    bool is_zero() const;
    bool is_identity() const;
    bool operator==(const MatConst& o) const;
    bool operator!=(const MatConst& o) const { return !(*this == o); }
    bool operator<(const MatConst& o) const;  // entry-wise, for use as map key

    /// Invertibility by Gaussian elimination; over a finite field this is
    /// exactly "all eigenvalues nonzero".
    bool invertible() const;

    FieldElem trace() const;

    Vec flatten() const { return e_; }
    static MatConst unflatten(const FieldCtx* ctx, std::size_t d, const Vec& v);

    std::string str() const;

private:
    const FieldCtx* ctx_;
    std::size_t d_;
    std::vector<FieldElem> e_;  // row-major
};

/// M with constant entries lifted to FreePoly entries.
MatFree lift(const MatConst& m);
/// Matrix with entries A[r][c] * v for a scalar polynomial v.
MatFree scalar_term(const MatConst& a, const FreePoly& v);

/// A multiplicatively closed matrix subspace: basis in discovery order plus
/// the multiplication table expanded over the basis.
class AlgebraBasis {
public:
    const FieldCtx* ctx() const { return ctx_; }
    std::size_t ambient_dim() const { return d_; }
    const std::vector<MatConst>& gens() const { return gens_; }
    const std::vector<std::uint32_t>& weights() const { return weights_; }
    const std::vector<MatConst>& basis() const { return basis_; }
    std::size_t dim() const { return basis_.size(); }
    /// table()[i][j] = coefficients of basis[i]*basis[j] over the basis.
    const std::vector<std::vector<Vec>>& table() const { return table_; }

    bool contains(const MatConst& m) const;
    /// Coordinates of m over the basis; nullopt if outside the span.
    std::optional<Vec> express(const MatConst& m) const;

    /// Smallest m with H^m = 0, or nullopt if the algebra is not nilpotent.
    std::optional<std::size_t> nilpotency_index() const;

    friend AlgebraBasis algebra_closure(const std::vector<MatConst>& gens,
                                        const std::vector<std::uint32_t>& weights);

private:
    const FieldCtx* ctx_ = nullptr;
    std::size_t d_ = 0;
    std::vector<MatConst> gens_;
    std::vector<std::uint32_t> weights_;
    std::vector<MatConst> basis_;
    std::vector<std::vector<Vec>> table_;
};

/// Closes the generator set under multiplication (basis in discovery order:
/// independent generators first, then independent pairwise products).
/// Each generator carries weight 1 unless an explicit list is given.
AlgebraBasis algebra_closure(const std::vector<MatConst>& gens, const std::vector<std::uint32_t>& weights = {});

/// The Wedderburn radical: basis of the largest nilpotent two-sided ideal
/// and its nilpotency index s (W^s = 0, W^(s-1) != 0; s = 1 for W = 0).
struct RadicalData {
    std::vector<MatConst> basis;
    std::size_t s = 1;
    std::size_t dim() const { return basis.size(); }
};

/// Characteristic-p radical via the chain of trace-of-p-power-map kernels
/// (Friedl/Ronyai; Cohen-Ivanyos-Wales), run over the prime subfield after
/// restriction of scalars, on the unital extension H + F*Id; the radical of
/// H is recovered as the intersection with H. Postconditions (two-sided
/// ideal, nilpotency index, semisimple quotient via the regular
/// representation) are verified on every call.
RadicalData radical(const AlgebraBasis& h);

/// Exhaustive oracle for tiny instances: the sum of all nilpotent two-sided
/// ideals found by enumerating every subspace. Exponential; dim <= 4 only.
std::vector<MatConst> radical_bruteforce(const AlgebraBasis& h);

struct IdempotentPower {
    std::size_t gamma = 0;                 // smallest exponent with (m^gamma)^2 = m^gamma
    MatConst power;                        // m^gamma
    std::optional<std::size_t> beta;       // smallest exponent with m^beta = Id, when invertible
};

/// Finds the idempotent power of m by cycle detection on m, m^2, m^3, ...
/// with a final explicit check; the beta branch applies when m is invertible.
IdempotentPower idempotent_power(const MatConst& m);

struct PseudoHomogeneousSpan {
    std::vector<MatConst> basis;  // of the span of all weight-beta products
    std::size_t dim() const { return basis.size(); }
};

/// Span of all products of generators of total weight exactly beta.
PseudoHomogeneousSpan pseudo_homogeneous_span(const AlgebraBasis& h, std::uint32_t beta);

struct PseudoIdempotent {
    MatConst e;               // pseudo-homogeneous lift of the identity of H/W
    std::uint32_t beta_e = 0; // weight of e
    MatConst f;               // e^(p^lift_steps), exactly idempotent
    std::uint32_t lift_steps = 0;
    std::uint64_t beta_f = 0; // weight of f = beta_e * p^lift_steps
};

/// Pseudo-homogeneous idempotent acting as identity modulo the radical:
/// sweeps the weight beta upward solving e = u (mod W) inside the
/// weight-beta span, then lifts via p-th powers until exactly idempotent.
/// Throws for nilpotent algebras and when the sweep exceeds the ceiling
/// (default 2*dim(H) + s).
PseudoIdempotent pseudo_idempotent(const AlgebraBasis& h,
                                   std::optional<std::uint32_t> beta_ceiling = std::nullopt);

/// Decomposition N = sum_i A_i * a_i by coefficient extraction over the
/// word basis: a_i are the distinct monomials (linearly independent by
/// construction), A_i the corresponding coefficient matrices.
struct WordDecomposition {
    std::vector<Word> words;
    std::vector<MatConst> coeffs;
    std::size_t alpha = 0;  // common gradation
    bool x_case = false;    // true: every word contains x; false: all words x-free
};

WordDecomposition extract_decomposition(const MatFree& n);

struct Assumption3Witness {
    MatFree m;
    std::vector<MatConst> a_mats;   // A_1..A_xi, A_1 = e
    std::vector<FreePoly> a_elems;  // a_1..a_xi, independent, homogeneous of gradation alpha
    std::size_t alpha = 0;
    bool x_case = false;
    AlgebraBasis h;                 // algebra generated by the A_i
    RadicalData w;
    MatConst e;                     // = a_mats[0]
};

/// Re-verifies every witness condition from scratch; throws on violation.
void assumption3_check(const Assumption3Witness& w);

struct PowerOutcome {
    std::optional<Assumption3Witness> witness;
    std::optional<std::size_t> zero_exponent;  // coefficient algebra nilpotent: N^exp = 0
    std::uint64_t beta = 0;                    // exponent used for M = N^beta (witness case)
    bool is_zero() const { return zero_exponent.has_value(); }
};

/// Either detects a nilpotent coefficient algebra (then some power of N is
/// zero, returned with the vanishing exponent) or produces a verified
/// witness for M = N^beta with the leading coefficient matrix idempotent.
PowerOutcome power_to_assumption3(const MatFree& n);

}  // namespace orelab

#endif
