#ifndef ORELAB_FIELD_HPP
#define ORELAB_FIELD_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace orelab {

class FieldElem;

/// Context for GF(p^k): prime characteristic p and a monic irreducible
/// modulus of degree k over GF(p). Elements are coordinate vectors in the
/// power basis of the modulus generator t. Immutable after construction.
class FieldCtx {
public:
    /// Builds GF(p^k) with a modulus from the built-in table, falling back
    /// to the first irreducible polynomial in counting order.
    FieldCtx(std::uint32_t p, std::uint32_t k);

    /// Builds GF(p^k) with a user-supplied monic modulus (little-endian
    /// coefficients, length k+1). Throws if p is not prime or the modulus
    /// is not monic/irreducible.
    FieldCtx(std::uint32_t p, std::vector<std::uint32_t> modulus);

    std::uint32_t p() const { return p_; }
    std::uint32_t k() const { return k_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    /// p^k; throws std::overflow_error if it does not fit in 64 bits.
    std::uint64_t order() const;

    bool same(const FieldCtx& other) const;

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_uint(std::uint64_t v) const;
    /// Element with the given power-basis coordinates (length <= k, mod p).
    FieldElem from_coeffs(std::vector<std::uint32_t> c) const;
    /// The residue class of the modulus generator t (requires k >= 2).
    FieldElem gen() const;

    /// The i-th field element in the deterministic enumeration order
    /// (base-p digits of i, least significant digit = constant coordinate).
    FieldElem element_at(std::uint64_t index) const;

    /// n pairwise-distinct elements in enumeration order. Throws a
    /// "field too small" error naming the minimal sufficient k if n > p^k.
    std::vector<FieldElem> enumerate_distinct(std::uint64_t n) const;

    /// Parses the textual form produced by FieldElem::str().
    FieldElem parse(const std::string& text) const;

    std::string describe() const;  // e.g. "GF(4)=GF(2)[t]/(1+t+t^2)"
    std::string modulus_str() const;

private:
    void validate();

    std::uint32_t p_;
    std::uint32_t k_;
    std::vector<std::uint32_t> modulus_;  // little-endian, monic, length k_+1
};

/// Smallest k' >= k with p^k' >= n (used by the auto-extension policy).
std::uint32_t min_extension_for(std::uint32_t p, std::uint32_t k, std::uint64_t n);

/// Element of GF(p^k). Holds a pointer to its context; contexts must
/// outlive their elements. All arithmetic is exact.
class FieldElem {
public:
    FieldElem() : ctx_(nullptr) {}

    const FieldCtx* ctx() const { return ctx_; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator-() const;
    FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
    FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
    FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

    /// Multiplicative inverse; throws std::domain_error on zero.
    FieldElem inv() const;
    FieldElem operator/(const FieldElem& o) const { return *this * o.inv(); }

    FieldElem pow(std::uint64_t e) const;
    /// The p-power (Frobenius) map a -> a^p; additive and multiplicative.
    FieldElem frobenius() const;

    bool operator==(const FieldElem& o) const;
    bool operator!=(const FieldElem& o) const { return !(*this == o); }
    /// Enumeration order (base-p value); usable as a map key within one ctx.
    bool operator<(const FieldElem& o) const;

    /// "0", "2", "t", "1+t", "2+t^2", ... Prime fields print plain integers.
    std::string str() const;

private:
    friend class FieldCtx;
    FieldElem(const FieldCtx* ctx, std::vector<std::uint32_t> c)
        : ctx_(ctx), c_(std::move(c)) {}

    void check_same_ctx(const FieldElem& o) const;

    const FieldCtx* ctx_;
    std::vector<std::uint32_t> c_;  // length k, entries in [0, p)
};

bool is_prime_u32(std::uint32_t n);

}  // namespace orelab

#endif
