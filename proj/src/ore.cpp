#include "orelab/ore.hpp"

#include <sstream>

namespace orelab {

namespace {

// C(a, b) mod p for 0 <= a, b < p, multiplicative formula with inverses
std::uint32_t small_binom(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    if (b > a) return 0;
    std::uint64_t num = 1, den = 1;
    for (std::uint32_t i = 1; i <= b; ++i) {
        num = (num * ((a - b + i) % p)) % p;
        den = (den * (i % p)) % p;
    }
    if (den == 0) return 0;  // cannot happen for b < p
    // den^(p-2) mod p
    std::uint64_t inv = 1, base = den, e = p - 2;
    while (e) {
        if (e & 1) inv = (inv * base) % p;
        base = (base * base) % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>((num * inv) % p);
}

}  // namespace

std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
    if (k > n) return 0;
    std::uint64_t result = 1;
    while (n || k) {
        std::uint32_t nd = static_cast<std::uint32_t>(n % p);
        std::uint32_t kd = static_cast<std::uint32_t>(k % p);
        if (kd > nd) return 0;
        result = (result * small_binom(nd, kd, p)) % p;
        n /= p;
        k /= p;
    }
    return static_cast<std::uint32_t>(result);
}

FreePoly ad_x(const FreePoly& c) {
    FreePoly x(c.ctx(), "x");
    return x * c - c * x;
}

FreePoly iterated_d(const FreePoly& c, std::size_t n) {
    FreePoly out = c;
    for (std::size_t i = 0; i < n; ++i) out = ad_x(out);
    return out;
}

// ---------------------------------------------------------------------------

PElem PElem::generator(const FieldCtx* ctx, char letter, std::uint32_t k) {
    if (letter != 'a' && letter != 'b') throw std::invalid_argument("ore: P-generators are built from a and b");
    PElem out(ctx);
    out.expr_[{{letter, k}}] = ctx->one();
    out.expanded_ = iterated_d(FreePoly(ctx, Word(1, letter)), k);
    return out;
}

void PElem::add_pword(const PWord& w, const FieldElem& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = expr_.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) expr_.erase(it);
    }
}

PElem PElem::operator+(const PElem& o) const {
    PElem out = *this;
    for (const auto& [w, c] : o.expr_) out.add_pword(w, c);
    out.expanded_ = expanded_ + o.expanded_;
    return out;
}

PElem PElem::operator*(const PElem& o) const {
    PElem out(ctx_);
    for (const auto& [wu, cu] : expr_)
        for (const auto& [wv, cv] : o.expr_) {
            PWord w = wu;
            w.insert(w.end(), wv.begin(), wv.end());
            out.add_pword(w, cu * cv);
        }
    out.expanded_ = expanded_ * o.expanded_;
    return out;
}

PElem PElem::scaled(const FieldElem& c) const {
    PElem out(ctx_);
    for (const auto& [w, cc] : expr_) out.add_pword(w, cc * c);
    out.expanded_ = expanded_.scaled(c);
    return out;
}

PElem PElem::derive() const {
    PElem out(ctx_);
    for (const auto& [w, c] : expr_) {
        // Leibniz over the generator product; D(D^k(g)) = D^(k+1)(g)
        for (std::size_t j = 0; j < w.size(); ++j) {
            PWord nw = w;
            nw[j].second += 1;
            out.add_pword(nw, c);
        }
    }
    out.expanded_ = ad_x(expanded_);
    return out;
}

std::string PElem::str() const {
    if (expr_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : expr_) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.str();
        if (!c.is_one()) {
            bool simple = cs.find('+') == std::string::npos;
            os << (simple ? cs : "(" + cs + ")") << "*";
        }
        bool firstg = true;
        for (const auto& [letter, k] : w) {
            if (!firstg) os << "*";
            firstg = false;
            if (k == 0)
                os << letter;
            else
                os << "D" << k << "(" << letter << ")";
        }
        if (w.empty()) os << "1";
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

// x^n * q folded back into P-coefficients: contributes C(n,i) D^i(q) x^(n-i).
std::vector<PElem> shift_left_by_x(const FieldCtx* ctx, const std::vector<PElem>& tail, std::size_t n,
                                   std::uint32_t p) {
    if (n == 0) return tail;
    std::vector<PElem> out(tail.size() + n, PElem::zero(ctx));
    for (std::size_t j = 0; j < tail.size(); ++j) {
        if (tail[j].is_zero()) continue;
        PElem dq = tail[j];
        for (std::size_t i = 0; i <= n; ++i) {
            std::uint32_t bin = binom_mod_p(n, i, p);
            if (bin) out[n - i + j] += dq.scaled(ctx->from_uint(bin));
            if (i < n) dq = dq.derive();
        }
    }
    return out;
}

}  // namespace

std::vector<PElem> p_decompose(const FreePoly& v) {
    const FieldCtx* ctx = v.ctx();
    const std::uint32_t p = ctx->p();
    std::vector<PElem> acc;
    for (const auto& [word, coef] : v.terms()) {
        if (gradation(word) == 0)
            throw std::domain_error("ore: monomial of gradation 0 is outside Abar: '" + word + "'");
        // parse into x^(n0) g1 x^(n1) g2 ... gk x^(nk)
        std::vector<std::pair<char, std::size_t>> blocks;  // (letter, trailing x-run)
        std::size_t lead_x = 0;
        std::size_t i = 0;
        while (i < word.size() && word[i] == 'x') {
            ++lead_x;
            ++i;
        }
        while (i < word.size()) {
            char g = word[i++];
            std::size_t run = 0;
            while (i < word.size() && word[i] == 'x') {
                ++run;
                ++i;
            }
            blocks.emplace_back(g, run);
        }
        // build right to left
        std::vector<PElem> tail;
        for (std::size_t bi = blocks.size(); bi-- > 0;) {
            const auto& [g, run] = blocks[bi];
            if (bi + 1 == blocks.size()) {
                tail.assign(run + 1, PElem::zero(ctx));
                tail[run] = PElem::generator(ctx, g, 0);
            } else {
                tail = shift_left_by_x(ctx, tail, run, p);
                PElem gen = PElem::generator(ctx, g, 0);
                for (auto& t : tail)
                    if (!t.is_zero()) t = gen * t;
            }
        }
        tail = shift_left_by_x(ctx, tail, lead_x, p);
        if (acc.size() < tail.size()) acc.resize(tail.size(), PElem::zero(ctx));
        for (std::size_t j = 0; j < tail.size(); ++j) acc[j] += tail[j].scaled(coef);
    }
    while (!acc.empty() && acc.back().is_zero()) acc.pop_back();
    // exact reassembly is part of the contract
    if (p_reassemble(ctx, acc) != v) throw std::logic_error("ore: p_decompose reassembly failed");
    return acc;
}

FreePoly p_reassemble(const FieldCtx* ctx, const std::vector<PElem>& parts) {
    FreePoly out(ctx);
    FreePoly xpow = FreePoly::constant(ctx, ctx->one());
    FreePoly x(ctx, "x");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += parts[i].expanded() * xpow;
        xpow = xpow * x;
    }
    return out;
}

}  // namespace orelab
