#ifndef ORELAB_ORE_HPP
#define ORELAB_ORE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orelab/freealg.hpp"

namespace orelab {

/// C(n, k) mod p by Lucas' theorem (p prime). Matches the mod-p vanishing
/// of binomial coefficients, e.g. C(p^m, i) = 0 for 0 < i < p^m.
std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p);

/// The derivation D = ad_x: c -> xc - cx on the free algebra.
FreePoly ad_x(const FreePoly& c);

/// n-fold ad_x. Equals the closed binomial form
/// D^n(a) = sum_i (-1)^i C(n,i) x^(n-i) a x^i on generators.
FreePoly iterated_d(const FreePoly& c, std::size_t n);

// ---------------------------------------------------------------------------
// P-expressions: the subring P generated by D^k(a), D^k(b). Elements carry
// both the generator expression and the expanded free-algebra value, so
// membership in P is by construction.

/// A product of generators D^k(letter); (letter, k) pairs.
using PWord = std::vector<std::pair<char, std::uint32_t>>;

class PElem {
public:
    explicit PElem(const FieldCtx* ctx) : ctx_(ctx), expanded_(ctx) {}

    /// The generator D^k(letter), letter in {a, b}.
    static PElem generator(const FieldCtx* ctx, char letter, std::uint32_t k);
    static PElem zero(const FieldCtx* ctx) { return PElem(ctx); }

    const FieldCtx* ctx() const { return ctx_; }
    const std::map<PWord, FieldElem>& expr() const { return expr_; }
    const FreePoly& expanded() const { return expanded_; }
    bool is_zero() const { return expr_.empty(); }

    PElem operator+(const PElem& o) const;
    PElem operator*(const PElem& o) const;
    PElem scaled(const FieldElem& c) const;
    PElem& operator+=(const PElem& o) { return *this = *this + o; }

    /// Applies D = ad_x (P is closed under D).
    PElem derive() const;

    bool operator==(const PElem& o) const { return expr_ == o.expr_ && expanded_ == o.expanded_; }

    /// "D2(a)*b + a*D1(b)" style; generator D^0 prints as the bare letter.
    std::string str() const;

private:
    void add_pword(const PWord& w, const FieldElem& c);

    const FieldCtx* ctx_;
    std::map<PWord, FieldElem> expr_;
    FreePoly expanded_;
};

/// Unique decomposition v = p_0 + p_1 x + p_2 x^2 + ... with p_i in P,
/// for v in Abar (every monomial of gradation >= 1). Monomials with
/// gradation 0 raise std::domain_error.
///
/// Per monomial, scanning right to left: a maximal run x^n in front of an
/// already-decomposed tail sum_j q_j x^j is folded via
///   x^n q = sum_i C(n,i) D^i(q) x^(n-i),
/// and letters are prepended by multiplication inside P.
std::vector<PElem> p_decompose(const FreePoly& v);

/// Reassembles sum_i parts[i] * x^i.
FreePoly p_reassemble(const FieldCtx* ctx, const std::vector<PElem>& parts);

// ---------------------------------------------------------------------------
// Differential polynomial arithmetic over a coefficient ring with a
// registered derivation. Coeff must provide ctx(), +, -, *, unary -,
// scaled(FieldElem), is_zero(), ==.

template <class Coeff>
class DerivationOracle {
public:
    using Map = std::function<Coeff(const Coeff&)>;

    /// Registers a derivation. The Leibniz rule D(uv) = D(u)v + uD(v) is
    /// spot-checked on the supplied sample pairs; violations throw.
    /// `zero` is the additive identity of the coefficient ring.
    DerivationOracle(const FieldCtx* ctx, Coeff zero, Map d, std::vector<std::pair<Coeff, Coeff>> samples,
                     std::optional<std::uint32_t> nilpotency_bound = std::nullopt)
        : ctx_(ctx), zero_(std::move(zero)), d_(std::move(d)), nilpotency_bound_(nilpotency_bound) {
        for (const auto& [u, v] : samples) {
            Coeff lhs = d_(u * v);
            Coeff rhs = d_(u) * v + u * d_(v);
            if (!(lhs == rhs))
                throw std::invalid_argument("ore: registered map violates the Leibniz rule on a sample pair");
        }
    }

    const FieldCtx* ctx() const { return ctx_; }
    const Coeff& zero() const { return zero_; }
    Coeff apply(const Coeff& c) const { return d_(c); }
    std::optional<std::uint32_t> nilpotency_bound() const { return nilpotency_bound_; }

private:
    const FieldCtx* ctx_;
    Coeff zero_;
    Map d_;
    std::optional<std::uint32_t> nilpotency_bound_;
};

/// Element sum_i c_i x^i of R[x; D]. Multiplication uses the Leibniz
/// expansion per monomial: (c x^n)(d x^m) = c * sum_i C(n,i) D^i(d) x^(n-i+m)
/// with binomials reduced mod p.
template <class Coeff>
class OrePoly {
public:
    using Oracle = std::shared_ptr<const DerivationOracle<Coeff>>;

    explicit OrePoly(Oracle oracle) : oracle_(std::move(oracle)) {}
    OrePoly(Oracle oracle, std::vector<Coeff> coeffs) : oracle_(std::move(oracle)), c_(std::move(coeffs)) { trim(); }

    static OrePoly embed(Oracle oracle, const Coeff& c) { return OrePoly(std::move(oracle), {c}); }

    const Oracle& oracle() const { return oracle_; }
    const std::vector<Coeff>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }

    OrePoly operator+(const OrePoly& o) const {
        check(o);
        std::vector<Coeff> out = c_;
        if (o.c_.size() > out.size()) out.resize(o.c_.size(), zero_coeff());
        for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] = out[i] + o.c_[i];
        return OrePoly(oracle_, std::move(out));
    }

    OrePoly operator-(const OrePoly& o) const { return *this + (-o); }

    OrePoly operator-() const {
        std::vector<Coeff> out;
        out.reserve(c_.size());
        for (const auto& c : c_) out.push_back(-c);
        return OrePoly(oracle_, std::move(out));
    }

    OrePoly operator*(const OrePoly& o) const {
        check(o);
        if (is_zero() || o.is_zero()) return OrePoly(oracle_);
        const std::uint32_t p = oracle_->ctx()->p();
        std::vector<Coeff> out(c_.size() + o.c_.size() - 1, zero_coeff());
        for (std::size_t n = 0; n < c_.size(); ++n) {
            if (c_[n].is_zero()) continue;
            for (std::size_t m = 0; m < o.c_.size(); ++m) {
                if (o.c_[m].is_zero()) continue;
                Coeff dterm = o.c_[m];
                for (std::size_t i = 0; i <= n; ++i) {
                    std::uint32_t bin = binom_mod_p(n, i, p);
                    if (bin)
                        out[n - i + m] =
                            out[n - i + m] + (c_[n] * dterm).scaled(oracle_->ctx()->from_uint(bin));
                    if (i < n) dterm = oracle_->apply(dterm);
                }
            }
        }
        return OrePoly(oracle_, std::move(out));
    }

    bool operator==(const OrePoly& o) const {
        check(o);
        if (c_.size() != o.c_.size()) return false;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!(c_[i] == o.c_[i])) return false;
        return true;
    }
    bool operator!=(const OrePoly& o) const { return !(*this == o); }

    /// "c0 + (c1)x + (c2)x^2 + ..." with coefficient text from the ring.
    template <class Str>
    std::string str(Str coeff_str) const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + coeff_str(c_[i]) + ")";
            if (i == 1) out += "x";
            if (i > 1) out += "x^" + std::to_string(i);
        }
        return out.empty() ? "0" : out;
    }

private:
    void check(const OrePoly& o) const {
        if (oracle_ != o.oracle_) throw std::invalid_argument("ore: operands use different derivation oracles");
    }
    Coeff zero_coeff() const { return oracle_->zero(); }
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    Oracle oracle_;
    std::vector<Coeff> c_;
};

// ---------------------------------------------------------------------------
// Quasi-inverses of nilpotent elements: s with r + s + rs = r + s + sr = 0.

/// Truncated geometric series s = sum_{i=1}^{bound-1} (-1)^i r^i after
/// verifying r^bound = 0 by computation. Both defining equations and the
/// left-accumulated recomputation are asserted before returning.
template <class R>
R quasi_inverse_nilpotent(const R& r, std::uint32_t bound) {
    if (bound == 0) throw std::invalid_argument("ore: nilpotency bound must be >= 1");
    R zero = r - r;
    R s = zero;
    R power = r;  // r^i, accumulated on the right
    for (std::uint32_t i = 1; i < bound; ++i) {
        s = (i % 2 == 1) ? s - power : s + power;
        power = power * r;
    }
    if (!power.is_zero())
        throw std::domain_error("ore: element is not nilpotent at declared bound " + std::to_string(bound));
    // left-accumulated series must give the same element (uniqueness route)
    R s2 = zero;
    R lpower = r;
    for (std::uint32_t i = 1; i < bound; ++i) {
        s2 = (i % 2 == 1) ? s2 - lpower : s2 + lpower;
        lpower = r * lpower;
    }
    if (!(s == s2)) throw std::logic_error("ore: left/right series for the quasi-inverse disagree");
    R lhs = r + s + r * s;
    R rhs = r + s + s * r;
    if (!lhs.is_zero() || !rhs.is_zero()) throw std::logic_error("ore: quasi-inverse equations failed");
    return s;
}

/// Checks that s1 and s2 are quasi-inverses of r (precondition; throws
/// std::invalid_argument otherwise) and returns whether s1 == s2. A false
/// return contradicts uniqueness of quasi-inverses and signals a bug.
template <class R>
bool quasi_inverse_unique_check(const R& r, const R& s1, const R& s2) {
    auto is_qi = [&](const R& s) {
        return (r + s + r * s).is_zero() && (r + s + s * r).is_zero();
    };
    if (!is_qi(s1) || !is_qi(s2))
        throw std::invalid_argument("ore: input does not satisfy the quasi-inverse equations");
    return s1 == s2;
}

}  // namespace orelab

#endif
