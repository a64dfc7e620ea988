#include "orelab/field.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace orelab {

namespace {

using poly = std::vector<std::uint32_t>;  // little-endian over GF(p)

void trim(poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

// remainder of f modulo monic divisor g, all coefficients mod p
poly poly_rem(poly f, const poly& g, std::uint32_t p) {
    trim(f);
    const std::size_t dg = g.size() - 1;
    while (f.size() > dg) {
        const std::uint64_t lead = f.back();
        const std::size_t shift = f.size() - 1 - dg;
        if (lead != 0) {
            for (std::size_t i = 0; i <= dg; ++i) {
                std::uint64_t sub = (lead * g[i]) % p;
                std::uint64_t cur = f[shift + i];
                f[shift + i] = static_cast<std::uint32_t>((cur + p - sub) % p);
            }
        }
        f.pop_back();
        trim(f);
    }
    trim(f);
    return f;
}

bool poly_is_zero(const poly& f) {
    for (auto c : f)
        if (c) return false;
    return true;
}

// Trial factorization: a monic polynomial of degree k >= 1 is irreducible
// over GF(p) iff no monic polynomial of degree 1..k/2 divides it.
bool poly_irreducible(const poly& f, std::uint32_t p) {
    const std::size_t k = f.size() - 1;
    if (k == 0) return false;
    if (k == 1) return true;
    for (std::size_t d = 1; d <= k / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t v = 0; v < count; ++v) {
            poly g(d + 1, 0);
            std::uint64_t w = v;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<std::uint32_t>(w % p);
                w /= p;
            }
            g[d] = 1;
            if (poly_is_zero(poly_rem(f, g, p))) return false;
        }
    }
    return true;
}

// Built-in moduli for common small (p, k); little-endian, monic.
const poly* builtin_modulus(std::uint32_t p, std::uint32_t k) {
    struct Entry {
        std::uint32_t p, k;
        poly m;
    };
    static const std::vector<Entry> table = {
        {2, 2, {1, 1, 1}},
        {2, 3, {1, 1, 0, 1}},
        {2, 4, {1, 1, 0, 0, 1}},
        {2, 5, {1, 0, 1, 0, 0, 1}},
        {2, 6, {1, 1, 0, 0, 0, 0, 1}},
        {2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
        {2, 8, {1, 1, 0, 1, 1, 0, 0, 0, 1}},
        {3, 2, {1, 0, 1}},
        {3, 3, {1, 2, 0, 1}},
        {3, 4, {2, 1, 0, 0, 1}},
        {3, 5, {1, 2, 0, 0, 0, 1}},
        {5, 2, {2, 0, 1}},
        {5, 3, {1, 1, 0, 1}},
        {7, 2, {1, 0, 1}},
        {7, 3, {2, 1, 0, 1}},
    };
    for (const auto& e : table)
        if (e.p == p && e.k == k) return &e.m;
    return nullptr;
}

poly find_modulus(std::uint32_t p, std::uint32_t k) {
    if (k == 1) return {0, 1};  // t itself; residue ring is GF(p)
    if (const poly* m = builtin_modulus(p, k)) return *m;
    // First monic irreducible of degree k in counting order.
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        if (count > (1ull << 40) / p) throw std::overflow_error("field: modulus search space too large");
        count *= p;
    }
    for (std::uint64_t v = 0; v < count; ++v) {
        poly f(k + 1, 0);
        std::uint64_t w = v;
        for (std::uint32_t i = 0; i < k; ++i) {
            f[i] = static_cast<std::uint32_t>(w % p);
            w /= p;
        }
        f[k] = 1;
        if (poly_irreducible(f, p)) return f;
    }
    throw std::logic_error("field: no irreducible modulus found");
}

}  // namespace

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint32_t min_extension_for(std::uint32_t p, std::uint32_t k, std::uint64_t n) {
    std::uint32_t kk = std::max<std::uint32_t>(k, 1);
    while (true) {
        std::uint64_t order = 1;
        bool ok = true;
        for (std::uint32_t i = 0; i < kk; ++i) {
            if (order > UINT64_MAX / p) {
                ok = false;
                break;
            }
            order *= p;
        }
        if (ok && order >= n) return kk;
        if (!ok) throw std::overflow_error("field: required extension exceeds 64-bit order");
        ++kk;
    }
}

FieldCtx::FieldCtx(std::uint32_t p, std::uint32_t k) : p_(p), k_(k), modulus_(find_modulus(p, k)) {
    validate();
}

FieldCtx::FieldCtx(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), k_(modulus.empty() ? 0 : static_cast<std::uint32_t>(modulus.size() - 1)), modulus_(std::move(modulus)) {
    validate();
}

void FieldCtx::validate() {
    if (!is_prime_u32(p_)) throw std::invalid_argument("field: characteristic " + std::to_string(p_) + " is not prime");
    if (k_ < 1) throw std::invalid_argument("field: extension degree must be >= 1");
    if (modulus_.size() != k_ + 1 || modulus_.back() != 1)
        throw std::invalid_argument("field: modulus must be monic of degree k");
    for (auto& c : modulus_) c %= p_;
    if (modulus_.back() != 1) throw std::invalid_argument("field: modulus must be monic of degree k");
    if (k_ >= 2 && !poly_irreducible(modulus_, p_))
        throw std::invalid_argument("field: modulus is reducible over GF(" + std::to_string(p_) + ")");
}

std::uint64_t FieldCtx::order() const {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
        if (r > UINT64_MAX / p_) throw std::overflow_error("field: order overflows 64 bits");
        r *= p_;
    }
    return r;
}

bool FieldCtx::same(const FieldCtx& other) const {
    return p_ == other.p_ && modulus_ == other.modulus_;
}

FieldElem FieldCtx::zero() const { return FieldElem(this, std::vector<std::uint32_t>(k_, 0)); }

FieldElem FieldCtx::one() const {
    std::vector<std::uint32_t> c(k_, 0);
    c[0] = 1 % p_;
    return FieldElem(this, std::move(c));
}

FieldElem FieldCtx::from_uint(std::uint64_t v) const {
    std::vector<std::uint32_t> c(k_, 0);
    c[0] = static_cast<std::uint32_t>(v % p_);
    return FieldElem(this, std::move(c));
}

FieldElem FieldCtx::from_coeffs(std::vector<std::uint32_t> c) const {
    if (c.size() > k_) throw std::invalid_argument("field: coefficient vector longer than extension degree");
    c.resize(k_, 0);
    for (auto& x : c) x %= p_;
    return FieldElem(this, std::move(c));
}

FieldElem FieldCtx::gen() const {
    if (k_ < 2) throw std::domain_error("field: prime field has no extension generator");
    std::vector<std::uint32_t> c(k_, 0);
    c[1] = 1;
    return FieldElem(this, std::move(c));
}

FieldElem FieldCtx::element_at(std::uint64_t index) const {
    std::vector<std::uint32_t> c(k_, 0);
    for (std::uint32_t i = 0; i < k_ && index; ++i) {
        c[i] = static_cast<std::uint32_t>(index % p_);
        index /= p_;
    }
    return FieldElem(this, std::move(c));
}

std::vector<FieldElem> FieldCtx::enumerate_distinct(std::uint64_t n) const {
    if (n > order()) {
        std::uint32_t need = min_extension_for(p_, k_, n);
        throw std::domain_error("field too small: need " + std::to_string(n) + " distinct elements but |GF(" +
                                std::to_string(p_) + "^" + std::to_string(k_) + ")| = " + std::to_string(order()) +
                                "; requires k >= " + std::to_string(need));
    }
    std::vector<FieldElem> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(element_at(i));
    return out;
}

bool FieldElem::is_zero() const {
    for (auto c : c_)
        if (c) return false;
    return true;
}

bool FieldElem::is_one() const {
    if (c_.empty() || c_[0] != 1 % ctx_->p()) return false;
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return false;
    return true;
}

void FieldElem::check_same_ctx(const FieldElem& o) const {
    if (!ctx_ || !o.ctx_ || !ctx_->same(*o.ctx_))
        throw std::invalid_argument("field: operands from different field contexts");
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    check_same_ctx(o);
    std::vector<std::uint32_t> c(c_.size());
    const std::uint32_t p = ctx_->p();
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = (c_[i] + o.c_[i]) % p;
    return FieldElem(ctx_, std::move(c));
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
    check_same_ctx(o);
    std::vector<std::uint32_t> c(c_.size());
    const std::uint32_t p = ctx_->p();
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = (c_[i] + p - o.c_[i]) % p;
    return FieldElem(ctx_, std::move(c));
}

FieldElem FieldElem::operator-() const {
    std::vector<std::uint32_t> c(c_.size());
    const std::uint32_t p = ctx_->p();
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = (p - c_[i]) % p;
    return FieldElem(ctx_, std::move(c));
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    check_same_ctx(o);
    const std::uint32_t p = ctx_->p();
    const std::size_t k = c_.size();
    std::vector<std::uint64_t> prod(2 * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (!c_[i]) continue;
        for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + static_cast<std::uint64_t>(c_[i]) * o.c_[j]) % p;
    }
    // reduce modulo the monic modulus
    const auto& m = ctx_->modulus();
    for (std::size_t d = 2 * k; d-- > k;) {
        const std::uint64_t lead = prod[d];
        if (!lead) continue;
        prod[d] = 0;
        for (std::size_t i = 0; i < k; ++i) {
            std::uint64_t sub = (lead * m[i]) % p;
            prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
        }
    }
    std::vector<std::uint32_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = static_cast<std::uint32_t>(prod[i]);
    return FieldElem(ctx_, std::move(c));
}

FieldElem FieldElem::pow(std::uint64_t e) const {
    FieldElem base = *this;
    FieldElem acc = ctx_->one();
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

FieldElem FieldElem::inv() const {
    if (is_zero()) throw std::domain_error("field: division by zero");
    return pow(ctx_->order() - 2);
}

FieldElem FieldElem::frobenius() const { return pow(ctx_->p()); }

bool FieldElem::operator==(const FieldElem& o) const {
    check_same_ctx(o);
    return c_ == o.c_;
}

bool FieldElem::operator<(const FieldElem& o) const {
    check_same_ctx(o);
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    }
    return false;
}

std::string FieldElem::str() const {
    if (ctx_->k() == 1) return std::to_string(c_.empty() ? 0 : c_[0]);
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (!c_[i]) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << c_[i];
        } else {
            if (c_[i] != 1) os << c_[i] << "*";
            os << "t";
            if (i > 1) os << "^" << i;
        }
    }
    if (first) return "0";
    return os.str();
}

FieldElem FieldCtx::parse(const std::string& text) const {
    std::vector<std::uint32_t> c(k_, 0);
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i >= text.size()) throw std::invalid_argument("field: empty element text");
    bool expect_term = true;
    std::uint32_t sign = 0;  // 0 = plus, 1 = minus
    while (i < text.size()) {
        skip_ws();
        if (i >= text.size()) break;
        if (!expect_term) {
            if (text[i] == '+') {
                sign = 0;
                ++i;
            } else if (text[i] == '-') {
                sign = 1;
                ++i;
            } else {
                throw std::invalid_argument("field: unexpected character in element text: " + text.substr(i));
            }
            expect_term = true;
            continue;
        }
        if (text[i] == '-') {
            sign = 1;
            ++i;
            skip_ws();
        }
        std::uint64_t coef = 1;
        bool have_digits = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            coef = 0;
            have_digits = true;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                coef = coef * 10 + (text[i] - '0');
                ++i;
            }
        }
        skip_ws();
        if (i < text.size() && text[i] == '*') {
            ++i;
            skip_ws();
        }
        std::uint32_t power = 0;
        if (i < text.size() && text[i] == 't') {
            ++i;
            power = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                std::uint64_t e = 0;
                if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                    throw std::invalid_argument("field: malformed exponent in element text");
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    e = e * 10 + (text[i] - '0');
                    ++i;
                }
                power = static_cast<std::uint32_t>(e);
            }
        } else if (!have_digits) {
            throw std::invalid_argument("field: malformed element text: " + text);
        }
        if (power >= k_) throw std::invalid_argument("field: generator power exceeds extension degree");
        std::uint32_t v = static_cast<std::uint32_t>(coef % p_);
        if (sign) v = (p_ - v) % p_;
        c[power] = (c[power] + v) % p_;
        sign = 0;
        expect_term = false;
    }
    if (expect_term) throw std::invalid_argument("field: dangling sign in element text");
    return FieldElem(this, std::move(c));
}

std::string FieldCtx::modulus_str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < modulus_.size(); ++i) {
        if (!modulus_[i]) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << modulus_[i];
        } else {
            if (modulus_[i] != 1) os << modulus_[i] << "*";
            os << "t";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::string FieldCtx::describe() const {
    std::ostringstream os;
    if (k_ == 1) {
        os << "GF(" << p_ << ")";
    } else {
        os << "GF(" << order() << ")=GF(" << p_ << ")[t]/(" << modulus_str() << ")";
    }
    return os.str();
}

}  // namespace orelab
