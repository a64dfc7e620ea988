#ifndef ORELAB_STARCAL_HPP
#define ORELAB_STARCAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orelab/matalg.hpp"
#include "orelab/shift.hpp"

namespace orelab {

/// Symbolic entry of a star prefix. The order of the enum values realizes
/// the symbol ordering E_1 < ... < E_beta < 1-e < e < P_1 < ... < P_beta'.
enum class SymKind : std::uint8_t { RadBasis = 0, OneMinusE = 1, Idem = 2, Compl = 3 };

struct Sym {
    SymKind kind;
    std::uint32_t index = 0;  // for RadBasis (E_i) and Compl (P_i), 1-based

    bool operator==(const Sym& o) const { return kind == o.kind && index == o.index; }
    bool operator<(const Sym& o) const {
        if (kind != o.kind) return kind < o.kind;
        return index < o.index;
    }
    std::string str() const;
};

/// Finite star prefix (f_1, f_2, ...); entries beyond the stored symbols
/// are the identity. Good elements carry their distance q+1.
struct StarPrefix {
    std::vector<Sym> syms;
    std::optional<std::uint32_t> distance;

    std::string str() const;
    bool operator==(const StarPrefix& o) const { return syms == o.syms; }
};

/// Materialization tables for a witness: the radical basis E_1..E_beta, the
/// complement P_1..P_beta' (P_i = r e, so P_i e = P_i by construction), and
/// the good set D(M) of all prefixes (E entries up to position q, then a
/// distinguished entry, then identities).
class StarContext {
public:
    explicit StarContext(const Assumption3Witness& wit);

    const Assumption3Witness& witness() const { return *wit_; }
    const std::vector<MatConst>& rad_basis() const { return rad_basis_; }
    const std::vector<MatConst>& complement() const { return compl_; }
    const MatConst& idem() const { return e_; }
    const MatConst& one_minus_e() const { return one_minus_e_; }

    MatConst materialize(const Sym& s) const;

    /// All good elements with their distances; |D(M)| is finite since the
    /// distance is at most s.
    std::vector<StarPrefix> good_set() const;

    /// t_n = (1-e, ..., 1-e, e, I, ...) with e at position n (n >= 1).
    StarPrefix t_prefix(std::uint32_t n) const;
    /// t'_n = (1-e, ..., 1-e, I, ...) with n leading 1-e entries.
    StarPrefix t_bar_prefix(std::uint32_t n) const;

    /// (f_1, f_2, ...) * w(n, m) = sum over compositions of n into m parts
    /// of f_1 M_{i_1} f_2 M_{i_2} ... f_m M_{i_m}; identity prefix gives the
    /// plain w(n, m). Memoized over prefix suffixes via the split
    /// star(u, n, m) = sum_j f_1 M_j * star(tail(u), n-j, m-1).
    const MatFree& star(const StarPrefix& u, std::size_t n, std::size_t m) const;

    const GammaExpansion& expansion() const { return g_; }
    std::size_t ydeg() const { return g_.ydeg(); }
    std::size_t s() const { return wit_->w.s; }
    std::size_t dim() const { return g_.dim(); }
    const FieldCtx* ctx() const { return g_.ctx(); }

private:
    const Assumption3Witness* wit_;
    GammaExpansion g_;
    std::vector<MatConst> rad_basis_;
    std::vector<MatConst> compl_;
    MatConst e_;
    MatConst one_minus_e_;
    mutable std::map<std::tuple<std::vector<Sym>, std::size_t, std::size_t>, MatFree> memo_;
};

/// Exact telescoping identity: w(n, m) equals the sum of t_i * w(n, m) for
/// i = 1..s plus the residual t'_s * w(n, m); for m > s the residual
/// vanishes (length-s prefixes over W  ∪ {1-e} annihilate w). Returns false
/// on any violation.
bool telescope_check(const StarContext& sc, std::size_t n, std::size_t m);

/// Quintuple [u * w(n, m)]_{k, l}; k, l are 1-based entry positions.
struct Quintuple {
    StarPrefix u;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t k = 1;
    std::size_t l = 1;
};

/// Total order for fixed m: larger distance first, then n, then the symbol
/// sequence lexicographically, then (k, l). Throws on an m mismatch.
int quintuple_cmp(const Quintuple& a, const Quintuple& b);

struct SweepRecord {
    Quintuple q;
    bool in_b = false;  // value dependent on strictly earlier star values
    bool in_z = false;  // value contributed a new R-direction
};

struct BZReport {
    std::size_t m = 0;
    std::size_t n_cap = 0;
    std::vector<SweepRecord> records;
    std::size_t b_count = 0;
    std::size_t z_count = 0;
    std::size_t r_dim = 0;  // dim R_m(M), computed independently
};

/// Sweeps all quintuples (u in D(M), n <= n_cap, entry positions) in
/// increasing order, classifying each into B_m / Z_m, and checks the
/// cardinality identity |Z_m| = dim R_m(M) plus disjointness.
BZReport compute_bz(const StarContext& sc, std::size_t m, std::optional<std::size_t> n_cap = std::nullopt);

/// Direct split of an element of A into the parts V = A(k) a_1^t A and
/// U = A(k) Q_t over the extended scalar basis (witness scalars completed
/// with the first absent words of gradation alpha).
struct UVSplit {
    FreePoly v_part;
    FreePoly u_part;
    /// V-part in factored form: coefficient * prefix * a_1^t * tail.
    struct VTerm {
        FieldElem coeff;
        Word prefix;
        Word tail;
    };
    std::vector<VTerm> v_terms;
};

UVSplit uv_split(const StarContext& sc, const FreePoly& v, std::size_t k, std::size_t t);

/// The deletion map G on the V-part: coefficient * prefix * tail.
FreePoly apply_deletion(const FieldCtx* ctx, const UVSplit& split);

struct NajReport {
    std::size_t m = 0, t = 0;
    std::size_t z_count = 0;
    std::size_t checked = 0;
    std::size_t vacuous = 0;  // n beyond the cap at level m-t (star value zero)
    std::vector<Quintuple> violations;
    std::size_t c_m_cardinality = 0;  // quintuples enumerated at level m
    bool ok() const { return violations.empty(); }
};

/// Spot check: every quintuple in Z_m must reappear in B_{m-t}. Hypotheses
/// t > s and m > t + s (and the <x> membership case) are enforced.
NajReport naj_spot_check(const StarContext& sc, std::size_t m, std::size_t t);

}  // namespace orelab

#endif
