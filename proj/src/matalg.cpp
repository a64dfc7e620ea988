#include "orelab/matalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace orelab {

MatConst::MatConst(const FieldCtx* ctx, std::size_t d) : ctx_(ctx), d_(d), e_(d * d, ctx->zero()) {}

MatConst MatConst::identity(const FieldCtx* ctx, std::size_t d) {
    MatConst m(ctx, d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = ctx->one();
    return m;
}

MatConst MatConst::from_rows(const FieldCtx* ctx, const std::vector<std::vector<FieldElem>>& rows) {
    MatConst m(ctx, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size()) throw std::invalid_argument("matalg: matrix must be square");
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

MatConst MatConst::unit(const FieldCtx* ctx, std::size_t d, std::size_t r, std::size_t c) {
    MatConst m(ctx, d);
    m.at(r, c) = ctx->one();
    return m;
}

MatConst MatConst::operator+(const MatConst& o) const {
    if (d_ != o.d_) throw std::invalid_argument("matalg: size mismatch");
    MatConst m(ctx_, d_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] + o.e_[i];
    return m;
}

MatConst MatConst::operator-(const MatConst& o) const {
    if (d_ != o.d_) throw std::invalid_argument("matalg: size mismatch");
    MatConst m(ctx_, d_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] - o.e_[i];
    return m;
}

MatConst MatConst::operator-() const {
    MatConst m(ctx_, d_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = -e_[i];
    return m;
}

MatConst MatConst::operator*(const MatConst& o) const {
    if (d_ != o.d_) throw std::invalid_argument("matalg: size mismatch");
    MatConst m(ctx_, d_);
    for (std::size_t r = 0; r < d_; ++r)
        for (std::size_t c = 0; c < d_; ++c) {
            FieldElem acc = ctx_->zero();
            for (std::size_t k = 0; k < d_; ++k) acc += at(r, k) * o.at(k, c);
            m.at(r, c) = acc;
        }
    return m;
}

MatConst MatConst::scaled(const FieldElem& c) const {
    MatConst m(ctx_, d_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] * c;
    return m;
}

MatConst MatConst::pow(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("matalg: matrix power requires n >= 1");
    MatConst base = *this;
    MatConst acc = *this;
    --n;
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

bool MatConst::is_zero() const {
    for (const auto& v : e_)
        if (!v.is_zero()) return false;
    return true;
}

bool MatConst::is_identity() const { return *this == identity(ctx_, d_); }

bool MatConst::operator==(const MatConst& o) const {
    if (d_ != o.d_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] != o.e_[i]) return false;
    return true;
}

bool MatConst::operator<(const MatConst& o) const {
    if (d_ != o.d_) return d_ < o.d_;
    for (std::size_t i = 0; i < e_.size(); ++i) {
        if (e_[i] != o.e_[i]) return e_[i] < o.e_[i];
    }
    return false;
}

bool MatConst::invertible() const {
    MatConst m = *this;
    for (std::size_t col = 0; col < d_; ++col) {
        std::size_t piv = col;
        while (piv < d_ && m.at(piv, col).is_zero()) ++piv;
        if (piv == d_) return false;
        for (std::size_t j = 0; j < d_; ++j) std::swap(m.at(piv, j), m.at(col, j));
        FieldElem inv = m.at(col, col).inv();
        for (std::size_t j = 0; j < d_; ++j) m.at(col, j) *= inv;
        for (std::size_t r = col + 1; r < d_; ++r) {
            FieldElem f = m.at(r, col);
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < d_; ++j) m.at(r, j) -= f * m.at(col, j);
        }
    }
    return true;
}

FieldElem MatConst::trace() const {
    FieldElem t = ctx_->zero();
    for (std::size_t i = 0; i < d_; ++i) t += at(i, i);
    return t;
}

MatConst MatConst::unflatten(const FieldCtx* ctx, std::size_t d, const Vec& v) {
    if (v.size() != d * d) throw std::invalid_argument("matalg: flatten length mismatch");
    MatConst m(ctx, d);
    m.e_ = v;
    return m;
}

std::string MatConst::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t r = 0; r < d_; ++r) {
        if (r) os << "; ";
        os << "[";
        for (std::size_t c = 0; c < d_; ++c) {
            if (c) os << ", ";
            os << at(r, c).str();
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

MatFree lift(const MatConst& m) {
    MatFree out(m.ctx(), m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c)
            if (!m.at(r, c).is_zero()) out.at(r, c) = FreePoly::constant(m.ctx(), m.at(r, c));
    return out;
}

MatFree scalar_term(const MatConst& a, const FreePoly& v) {
    MatFree out(a.ctx(), a.dim());
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c)
            if (!a.at(r, c).is_zero()) out.at(r, c) = v.scaled(a.at(r, c));
    return out;
}

// ---------------------------------------------------------------------------

bool AlgebraBasis::contains(const MatConst& m) const { return express(m).has_value(); }

std::optional<Vec> AlgebraBasis::express(const MatConst& m) const {
    std::vector<Vec> cols;
    cols.reserve(basis_.size());
    for (const auto& b : basis_) cols.push_back(b.flatten());
    return solve_linear(ctx_, cols, m.flatten());
}

std::optional<std::size_t> AlgebraBasis::nilpotency_index() const {
    std::vector<MatConst> cur = basis_;
    std::size_t m = 1;
    while (true) {
        if (cur.empty()) return m;
        // next power H^(m+1) = span of cur * basis
        RowSpace rs(ctx_, d_ * d_);
        std::vector<MatConst> next;
        for (const auto& u : cur)
            for (const auto& b : basis_) {
                MatConst prod = u * b;
                if (prod.is_zero()) continue;
                if (rs.add(prod.flatten())) next.push_back(prod);
            }
        if (next.size() == cur.size()) return std::nullopt;  // chain stabilized above zero
        cur = std::move(next);
        ++m;
        if (m > basis_.size() + 2) return std::nullopt;
    }
}

AlgebraBasis algebra_closure(const std::vector<MatConst>& gens, const std::vector<std::uint32_t>& weights) {
    if (gens.empty()) throw std::invalid_argument("matalg: closure needs at least one generator");
    AlgebraBasis h;
    h.ctx_ = gens[0].ctx();
    h.d_ = gens[0].dim();
    h.gens_ = gens;
    h.weights_ = weights.empty() ? std::vector<std::uint32_t>(gens.size(), 1) : weights;
    if (h.weights_.size() != gens.size()) throw std::invalid_argument("matalg: one weight per generator required");

    RowSpace rs(h.ctx_, h.d_ * h.d_);
    for (const auto& g : gens) {
        if (g.dim() != h.d_) throw std::invalid_argument("matalg: generator size mismatch");
        if (g.is_zero()) continue;
        if (rs.add(g.flatten())) h.basis_.push_back(g);
    }
    // worklist closure in discovery order
    std::size_t frontier = 0;
    while (frontier < h.basis_.size()) {
        std::size_t upto = h.basis_.size();
        for (std::size_t i = 0; i < upto; ++i) {
            for (std::size_t j = (i >= frontier ? 0 : frontier); j < upto; ++j) {
                MatConst prod = h.basis_[i] * h.basis_[j];
                if (prod.is_zero()) continue;
                if (rs.add(prod.flatten())) h.basis_.push_back(prod);
            }
        }
        frontier = upto;
    }
    // multiplication table; also certifies closedness
    TrackedRowSpace tr(h.ctx_, h.d_ * h.d_);
    for (const auto& b : h.basis_) tr.add(b.flatten());
    h.table_.assign(h.basis_.size(), std::vector<Vec>(h.basis_.size()));
    for (std::size_t i = 0; i < h.basis_.size(); ++i)
        for (std::size_t j = 0; j < h.basis_.size(); ++j) {
            auto coeffs = tr.express((h.basis_[i] * h.basis_[j]).flatten());
            if (!coeffs) throw std::logic_error("matalg: closure is not multiplicatively closed");
            h.table_[i][j] = *coeffs;
        }
    return h;
}

// ---------------------------------------------------------------------------
// Radical. Characteristic-polynomial-coefficient chain (the c_{p^j} kernels
// of Friedl/Ronyai and Cohen-Ivanyos-Wales): over a field of characteristic
// p the ordinary trace form only gives the first step, and the chain
//   J_{-1} = A,  J_k = { x in J_{k-1} : c_{p^k}((xy)-charpoly) = 0 for all y }
// down to p^k <= n reaches the radical. Scalars are restricted to the prime
// subfield, where each condition is linear; the resulting set is an
// F-subspace again.

namespace {

using FpMat = std::vector<std::vector<std::uint32_t>>;  // dense, mod p

std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p) {
    std::uint64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

// kernel basis of the equation system rows * xi = 0 over F_p
std::vector<std::vector<std::uint32_t>> fp_kernel(FpMat rows, std::size_t ncols, std::uint32_t p) {
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        std::uint64_t inv = fp_inv(rows[rank][col], p);
        for (std::size_t j = col; j < ncols; ++j) rows[rank][j] = static_cast<std::uint32_t>(rows[rank][j] * inv % p);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            std::uint64_t f = rows[r][col];
            for (std::size_t j = col; j < ncols; ++j)
                rows[r][j] = static_cast<std::uint32_t>((rows[r][j] + (p - f % p) * rows[rank][j]) % p);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<std::uint32_t>> kernel;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::uint32_t> v(ncols, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < rank; ++r) {
            std::uint32_t val = rows[r][free];
            if (val) v[pivot_col[r]] = (p - val) % p;
        }
        kernel.push_back(std::move(v));
    }
    return kernel;
}

// characteristic polynomial of an n x n matrix mod p, Berkowitz
// (division-free); returns c[0..n] with chi(T) = sum c[i] T^(n-i), c[0] = 1
std::vector<std::uint32_t> berkowitz_charpoly(const FpMat& a, std::uint32_t p) {
    const std::size_t n = a.size();
    std::vector<std::uint32_t> c = {1, (p - a[0][0] % p) % p};
    for (std::size_t r = 1; r < n; ++r) {
        // moments q[0] = a[r][r], q[k] = row * B^(k-1) * col
        std::vector<std::uint32_t> q(r + 1, 0);
        q[0] = a[r][r];
        std::vector<std::uint32_t> v(r);
        for (std::size_t i = 0; i < r; ++i) v[i] = a[i][r];
        for (std::size_t k = 1; k <= r; ++k) {
            std::uint64_t dot = 0;
            for (std::size_t i = 0; i < r; ++i) dot += static_cast<std::uint64_t>(a[r][i]) * v[i] % p;
            q[k] = static_cast<std::uint32_t>(dot % p);
            if (k < r) {
                std::vector<std::uint32_t> nv(r, 0);
                for (std::size_t i = 0; i < r; ++i) {
                    std::uint64_t dot2 = 0;
                    for (std::size_t j = 0; j < r; ++j) dot2 += static_cast<std::uint64_t>(a[i][j]) * v[j] % p;
                    nv[i] = static_cast<std::uint32_t>(dot2 % p);
                }
                v = std::move(nv);
            }
        }
        std::vector<std::uint32_t> nc(r + 2, 0);
        for (std::size_t i = 0; i <= r + 1; ++i) {
            std::uint64_t acc = i < c.size() ? c[i] : 0;
            for (std::size_t k = 1; k <= std::min(i, r + 1); ++k) {
                if (i - k >= c.size()) continue;
                acc = (acc + static_cast<std::uint64_t>(p - q[k - 1] % p) * c[i - k]) % p;
            }
            nc[i] = static_cast<std::uint32_t>(acc % p);
        }
        c = std::move(nc);
    }
    return c;
}

struct FpEmbedding {
    const FieldCtx* ctx;
    std::size_t e;                 // extension degree
    std::vector<FpMat> gen_pows;   // powers of the companion matrix of the modulus

    explicit FpEmbedding(const FieldCtx* c) : ctx(c), e(c->k()) {
        const std::uint32_t p = ctx->p();
        FpMat comp(e, std::vector<std::uint32_t>(e, 0));
        for (std::size_t i = 0; i + 1 < e; ++i) comp[i + 1][i] = 1;
        for (std::size_t i = 0; i < e; ++i) comp[i][e - 1] = (p - ctx->modulus()[i] % p) % p;
        FpMat cur(e, std::vector<std::uint32_t>(e, 0));
        for (std::size_t i = 0; i < e; ++i) cur[i][i] = 1;
        gen_pows.push_back(cur);
        for (std::size_t k = 1; k < e; ++k) {
            FpMat nxt(e, std::vector<std::uint32_t>(e, 0));
            for (std::size_t i = 0; i < e; ++i)
                for (std::size_t j = 0; j < e; ++j) {
                    std::uint64_t acc = 0;
                    for (std::size_t l = 0; l < e; ++l)
                        acc += static_cast<std::uint64_t>(gen_pows.back()[i][l]) * comp[l][j] % p;
                    nxt[i][j] = static_cast<std::uint32_t>(acc % p);
                }
            gen_pows.push_back(nxt);
        }
    }

    // (d*e) x (d*e) matrix over F_p representing m under restriction of scalars
    FpMat embed(const MatConst& m) const {
        const std::uint32_t p = ctx->p();
        const std::size_t d = m.dim();
        FpMat big(d * e, std::vector<std::uint32_t>(d * e, 0));
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) {
                const auto& coeffs = m.at(r, c).coeffs();
                for (std::size_t k = 0; k < e; ++k) {
                    if (coeffs[k] == 0) continue;
                    for (std::size_t i = 0; i < e; ++i)
                        for (std::size_t j = 0; j < e; ++j)
                            big[r * e + i][c * e + j] = static_cast<std::uint32_t>(
                                (big[r * e + i][c * e + j] +
                                 static_cast<std::uint64_t>(coeffs[k]) * gen_pows[k][i][j]) %
                                p);
                }
            }
        return big;
    }
};

RadicalData radical_impl(const AlgebraBasis& h, bool verify_quotient);

// builds the quotient H/W, represents it faithfully on its unital extension
// by left multiplication, and checks the re-run radical vanishes
void check_semisimple_quotient(const AlgebraBasis& h, const std::vector<MatConst>& w_basis) {
    const FieldCtx* ctx = h.ctx();
    const std::size_t dd = h.ambient_dim() * h.ambient_dim();
    RowSpace seed(ctx, dd);
    for (const auto& w : w_basis) seed.add(w.flatten());
    std::vector<MatConst> reps;
    for (const auto& b : h.basis())
        if (seed.add(b.flatten())) reps.push_back(b);
    const std::size_t hq = reps.size();
    if (hq == 0) return;  // H = W, quotient trivial
    TrackedRowSpace tracked(ctx, dd);
    for (const auto& r : reps) tracked.add(r.flatten());
    for (const auto& w : w_basis) tracked.add(w.flatten());
    auto project = [&](const MatConst& m) {
        auto coeffs = tracked.express(m.flatten());
        if (!coeffs) throw std::logic_error("matalg: quotient projection failed");
        Vec out(coeffs->begin(), coeffs->begin() + hq);
        return out;
    };
    // left regular representation on F*1 + H/W
    std::vector<MatConst> ls;
    for (std::size_t i = 0; i < hq; ++i) {
        MatConst l(ctx, hq + 1);
        Vec qi = project(reps[i]);
        for (std::size_t r = 0; r < hq; ++r) l.at(r + 1, 0) = qi[r];
        for (std::size_t j = 0; j < hq; ++j) {
            Vec prod = project(reps[i] * reps[j]);
            for (std::size_t r = 0; r < hq; ++r) l.at(r + 1, j + 1) = prod[r];
        }
        ls.push_back(l);
    }
    AlgebraBasis q = algebra_closure(ls);
    RadicalData rq = radical_impl(q, false);
    if (!rq.basis.empty()) throw std::logic_error("matalg: quotient by the radical is not semisimple");
}

RadicalData radical_impl(const AlgebraBasis& h, bool verify_quotient) {
    const FieldCtx* ctx = h.ctx();
    const std::size_t d = h.ambient_dim();
    const std::uint32_t p = ctx->p();
    const std::size_t e = ctx->k();
    RadicalData out;
    if (h.dim() == 0) return out;

    // work in the unital extension H + F*Id; Rad(H) = H intersect Rad(H + F*Id)
    std::vector<MatConst> h1 = h.basis();
    {
        RowSpace rs(ctx, d * d);
        for (const auto& b : h1) rs.add(b.flatten());
        MatConst id = MatConst::identity(ctx, d);
        if (!rs.contains(id.flatten())) h1.push_back(id);
    }
    // restrict scalars to the prime subfield
    std::vector<MatConst> cur;
    FieldElem t = e >= 2 ? ctx->gen() : ctx->one();
    for (const auto& b : h1) {
        FieldElem tp = ctx->one();
        for (std::size_t j = 0; j < e; ++j) {
            cur.push_back(b.scaled(tp));
            tp *= t;
        }
    }
    const std::size_t nbig = d * e;
    std::size_t levels = 0;
    {
        std::size_t pw = 1;
        while (pw * p <= nbig) {
            pw *= p;
            ++levels;
        }
    }
    FpEmbedding emb(ctx);
    std::uint64_t pk = 1;
    for (std::size_t k = 0; k <= levels && !cur.empty(); ++k, pk *= p) {
        FpMat constraints;
        constraints.reserve(cur.size());
        for (std::size_t yi = 0; yi < cur.size(); ++yi) {
            std::vector<std::uint32_t> row(cur.size(), 0);
            for (std::size_t xi = 0; xi < cur.size(); ++xi) {
                auto chi = berkowitz_charpoly(emb.embed(cur[xi] * cur[yi]), p);
                row[xi] = chi[static_cast<std::size_t>(pk)];
            }
            constraints.push_back(std::move(row));
        }
        auto kernel = fp_kernel(std::move(constraints), cur.size(), p);
        std::vector<MatConst> next;
        next.reserve(kernel.size());
        for (const auto& combo : kernel) {
            MatConst m(ctx, d);
            for (std::size_t c = 0; c < combo.size(); ++c)
                if (combo[c]) m = m + cur[c].scaled(ctx->from_uint(combo[c]));
            if (!m.is_zero()) next.push_back(m);
        }
        cur = std::move(next);
    }
    // F-basis of Rad(H1), then intersect with H
    std::vector<Vec> rad_flat;
    {
        RowSpace rs(ctx, d * d);
        for (const auto& m : cur)
            if (rs.add(m.flatten())) rad_flat.push_back(m.flatten());
    }
    std::vector<Vec> h_flat;
    for (const auto& b : h.basis()) h_flat.push_back(b.flatten());
    std::vector<Vec> w_flat = intersect_spans(ctx, h_flat, rad_flat);
    for (const auto& v : w_flat) out.basis.push_back(MatConst::unflatten(ctx, d, v));

    // postconditions: two-sided ideal, nilpotency index, semisimple quotient
    {
        RowSpace wspan(ctx, d * d);
        for (const auto& w : out.basis) wspan.add(w.flatten());
        for (const auto& b : h.basis())
            for (const auto& w : out.basis) {
                if (!wspan.contains((b * w).flatten()) || !wspan.contains((w * b).flatten()))
                    throw std::logic_error("matalg: radical candidate is not a two-sided ideal");
            }
    }
    if (out.basis.empty()) {
        out.s = 1;
    } else {
        std::vector<MatConst> powk = out.basis;
        std::size_t s = 1;
        while (!powk.empty()) {
            ++s;
            RowSpace rs(ctx, d * d);
            std::vector<MatConst> next;
            for (const auto& u : powk)
                for (const auto& w : out.basis) {
                    MatConst prod = u * w;
                    if (!prod.is_zero() && rs.add(prod.flatten())) next.push_back(prod);
                }
            powk = std::move(next);
            if (s > out.basis.size() + 2) throw std::logic_error("matalg: radical candidate is not nilpotent");
        }
        out.s = s;
    }
    if (verify_quotient) check_semisimple_quotient(h, out.basis);
    return out;
}

}  // namespace

RadicalData radical(const AlgebraBasis& h) { return radical_impl(h, true); }

std::vector<MatConst> radical_bruteforce(const AlgebraBasis& h) {
    const FieldCtx* ctx = h.ctx();
    const std::size_t n = h.dim();
    const std::size_t d = h.ambient_dim();
    if (ctx->order() > 3 || n > 4) throw std::invalid_argument("matalg: brute-force radical is desk-scale only");
    // enumerate all subspaces as spans of subsets of all algebra elements
    std::vector<MatConst> elems;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= ctx->order();
    for (std::uint64_t v = 0; v < total; ++v) {
        MatConst m(ctx, d);
        std::uint64_t w = v;
        for (std::size_t i = 0; i < n; ++i) {
            m = m + h.basis()[i].scaled(ctx->element_at(w % ctx->order()));
            w /= ctx->order();
        }
        if (!m.is_zero()) elems.push_back(m);
    }
    auto is_nilpotent_ideal = [&](const std::vector<MatConst>& basis) {
        RowSpace span(ctx, d * d);
        for (const auto& b : basis) span.add(b.flatten());
        for (const auto& b : basis)
            for (const auto& g : h.basis())
                if (!span.contains((b * g).flatten()) || !span.contains((g * b).flatten())) return false;
        std::vector<MatConst> cur = basis;
        for (std::size_t step = 0; step <= basis.size() + 1; ++step) {
            if (cur.empty()) return true;
            RowSpace rs(ctx, d * d);
            std::vector<MatConst> next;
            for (const auto& u : cur)
                for (const auto& b : basis) {
                    MatConst prod = u * b;
                    if (!prod.is_zero() && rs.add(prod.flatten())) next.push_back(prod);
                }
            cur = std::move(next);
        }
        return false;
    };
    // sum of all nilpotent principal ideals: x contributes iff the two-sided
    // ideal generated by x is nilpotent
    RowSpace sum(ctx, d * d);
    std::vector<MatConst> result;
    for (const auto& x : elems) {
        // ideal generated by x inside H
        RowSpace ispan(ctx, d * d);
        std::vector<MatConst> ibasis;
        std::vector<MatConst> work = {x};
        if (ispan.add(x.flatten())) ibasis.push_back(x);
        while (!work.empty()) {
            MatConst cur = work.back();
            work.pop_back();
            for (const auto& g : h.basis()) {
                for (MatConst prod : {cur * g, g * cur}) {
                    if (!prod.is_zero() && ispan.add(prod.flatten())) {
                        ibasis.push_back(prod);
                        work.push_back(prod);
                    }
                }
            }
        }
        if (is_nilpotent_ideal(ibasis)) {
            for (const auto& b : ibasis)
                if (sum.add(b.flatten())) result.push_back(b);
        }
    }
    // canonical basis
    RowSpace canon(ctx, d * d);
    std::vector<MatConst> out;
    for (const auto& r : result) canon.add(r.flatten());
    for (const auto& row : canon.rows()) out.push_back(MatConst::unflatten(ctx, d, row));
    return out;
}

IdempotentPower idempotent_power(const MatConst& m) {
    std::map<MatConst, std::size_t> seen;
    std::vector<MatConst> powers;  // powers[i] = m^(i+1)
    MatConst cur = m;
    std::size_t tail = 0, cycle = 0;
    for (std::size_t exp = 1;; ++exp) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            tail = it->second;
            cycle = exp - it->second;
            break;
        }
        seen.emplace(cur, exp);
        powers.push_back(cur);
        cur = cur * m;
    }
    // smallest gamma >= tail with cycle | gamma
    std::size_t gamma = ((std::max<std::size_t>(tail, 1) + cycle - 1) / cycle) * cycle;
    IdempotentPower out;
    out.gamma = gamma;
    out.power = powers[gamma - 1];
    if (!(out.power * out.power == out.power)) throw std::logic_error("matalg: idempotent power check failed");
    for (std::size_t g = 1; g < gamma; ++g)
        if (powers[g - 1] * powers[g - 1] == powers[g - 1])
            throw std::logic_error("matalg: idempotent exponent not minimal");
    if (m.invertible()) {
        out.beta = cycle;
        if (!m.pow(cycle).is_identity()) throw std::logic_error("matalg: multiplicative order check failed");
    }
    return out;
}

PseudoHomogeneousSpan pseudo_homogeneous_span(const AlgebraBasis& h, std::uint32_t beta) {
    if (h.weights().empty()) throw std::invalid_argument("matalg: generator weights are unset");
    if (beta == 0) throw std::invalid_argument("matalg: weight must be >= 1");
    const FieldCtx* ctx = h.ctx();
    const std::size_t dd = h.ambient_dim() * h.ambient_dim();
    // span_w = products of generators of total weight exactly w
    std::vector<std::vector<MatConst>> spans(beta + 1);
    for (std::uint32_t w = 1; w <= beta; ++w) {
        RowSpace rs(ctx, dd);
        for (std::size_t gi = 0; gi < h.gens().size(); ++gi) {
            const std::uint32_t gw = h.weights()[gi];
            if (gw > w) continue;
            if (gw == w) {
                if (!h.gens()[gi].is_zero() && rs.add(h.gens()[gi].flatten())) spans[w].push_back(h.gens()[gi]);
            } else {
                for (const auto& u : spans[w - gw]) {
                    MatConst prod = u * h.gens()[gi];
                    if (!prod.is_zero() && rs.add(prod.flatten())) spans[w].push_back(prod);
                }
            }
        }
    }
    return {spans[beta]};
}

PseudoIdempotent pseudo_idempotent(const AlgebraBasis& h, std::optional<std::uint32_t> beta_ceiling) {
    const FieldCtx* ctx = h.ctx();
    const std::size_t dd = h.ambient_dim() * h.ambient_dim();
    if (h.nilpotency_index())
        throw std::domain_error("matalg: algebra is nilpotent, no idempotent exists");
    RadicalData w = radical(h);
    // coset representatives of H modulo W
    RowSpace seed(ctx, dd);
    for (const auto& b : w.basis) seed.add(b.flatten());
    std::vector<MatConst> reps;
    for (const auto& b : h.basis())
        if (seed.add(b.flatten())) reps.push_back(b);
    const std::size_t hq = reps.size();
    if (hq == 0) throw std::logic_error("matalg: non-nilpotent algebra with trivial quotient");
    TrackedRowSpace tracked(ctx, dd);
    for (const auto& r : reps) tracked.add(r.flatten());
    for (const auto& b : w.basis) tracked.add(b.flatten());
    auto project = [&](const MatConst& m) {
        auto coeffs = tracked.express(m.flatten());
        if (!coeffs) throw std::logic_error("matalg: projection to the quotient failed");
        return Vec(coeffs->begin(), coeffs->begin() + hq);
    };
    // identity of the semisimple quotient: solve the two-sided unit equations
    std::vector<Vec> cols(hq, Vec());
    Vec rhs;
    for (std::size_t j = 0; j < hq; ++j) {
        Vec target = project(reps[j]);
        for (std::size_t i = 0; i < hq; ++i) {
            Vec lft = project(reps[i] * reps[j]);
            Vec rgt = project(reps[j] * reps[i]);
            cols[i].insert(cols[i].end(), lft.begin(), lft.end());
            cols[i].insert(cols[i].end(), rgt.begin(), rgt.end());
        }
        rhs.insert(rhs.end(), target.begin(), target.end());
        rhs.insert(rhs.end(), target.begin(), target.end());
    }
    auto unit_coeffs = solve_linear(ctx, cols, rhs);
    if (!unit_coeffs) throw std::logic_error("matalg: semisimple quotient has no identity");
    MatConst u(ctx, h.ambient_dim());
    for (std::size_t i = 0; i < hq; ++i) u = u + reps[i].scaled((*unit_coeffs)[i]);

    const std::uint32_t ceiling =
        beta_ceiling.value_or(static_cast<std::uint32_t>(2 * h.dim() + w.s));
    RowSpace wspan(ctx, dd);
    for (const auto& b : w.basis) wspan.add(b.flatten());

    for (std::uint32_t beta = 1; beta <= ceiling; ++beta) {
        PseudoHomogeneousSpan ph = pseudo_homogeneous_span(h, beta);
        if (ph.basis.empty()) continue;
        // e = u (mod W) with e inside the weight-beta span
        TrackedRowSpace sol(ctx, dd);
        for (const auto& b : ph.basis) sol.add(b.flatten());
        for (const auto& b : w.basis) sol.add(b.flatten());
        auto coeffs = sol.express(u.flatten());
        if (!coeffs) continue;
        MatConst e(ctx, h.ambient_dim());
        for (std::size_t i = 0; i < ph.basis.size(); ++i) e = e + ph.basis[i].scaled((*coeffs)[i]);
        if (!wspan.contains((e - u).flatten())) throw std::logic_error("matalg: lift drifted from the unit");
        // p-power lifting until exactly idempotent
        const std::uint32_t p = ctx->p();
        MatConst f = e;
        std::uint32_t steps = 0;
        std::uint64_t weight = beta;
        while (!(f * f == f)) {
            f = f.pow(p);
            weight *= p;
            ++steps;
            if (steps > 40) throw std::logic_error("matalg: idempotent lifting did not converge");
        }
        if (f.is_zero()) throw std::logic_error("matalg: idempotent lift collapsed to zero");
        for (const auto& r : h.basis()) {
            if (!wspan.contains((r - f * r).flatten()) || !wspan.contains((r - r * f).flatten()))
                throw std::logic_error("matalg: lifted idempotent is not an identity modulo the radical");
        }
        PseudoIdempotent out;
        out.e = e;
        out.beta_e = beta;
        out.f = f;
        out.lift_steps = steps;
        out.beta_f = weight;
        return out;
    }
    throw std::domain_error("matalg: no pseudo-homogeneous identity lift up to weight ceiling " +
                            std::to_string(ceiling));
}

// ---------------------------------------------------------------------------

WordDecomposition extract_decomposition(const MatFree& n) {
    const FieldCtx* ctx = n.ctx();
    const std::size_t d = n.dim();
    std::map<Word, MatConst, WordOrder> bins;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            for (const auto& [w, coef] : n.at(r, c).terms()) {
                auto it = bins.find(w);
                if (it == bins.end()) it = bins.emplace(w, MatConst(ctx, d)).first;
                it->second.at(r, c) = coef;
            }
    WordDecomposition out;
    std::optional<std::size_t> grad;
    std::optional<bool> xcase;
    for (const auto& [w, coeff] : bins) {
        if (w.empty() || (w[0] != 'a' && w[0] != 'b'))
            throw std::invalid_argument("matalg: entry monomial '" + w + "' does not start with a or b");
        std::size_t g = gradation(w);
        if (g == 0) throw std::invalid_argument("matalg: entry monomial '" + w + "' has gradation 0");
        if (grad && *grad != g)
            throw std::invalid_argument("matalg: entry monomials of unequal gradation (" + std::to_string(*grad) +
                                        " vs " + std::to_string(g) + ")");
        grad = g;
        bool has_x = w.find('x') != Word::npos;
        if (xcase && *xcase != has_x)
            throw std::invalid_argument("matalg: entry monomials mix the <x> and R cases at '" + w + "'");
        xcase = has_x;
        out.words.push_back(w);
        out.coeffs.push_back(coeff);
    }
    if (out.words.empty()) throw std::invalid_argument("matalg: zero matrix has no decomposition");
    out.alpha = *grad;
    out.x_case = *xcase;
    return out;
}

namespace {

MatFree reassemble(const FieldCtx* ctx, std::size_t d, const std::vector<MatConst>& mats,
                   const std::vector<FreePoly>& elems) {
    MatFree acc(ctx, d);
    for (std::size_t i = 0; i < mats.size(); ++i) acc = acc + scalar_term(mats[i], elems[i]);
    return acc;
}

}  // namespace

void assumption3_check(const Assumption3Witness& w) {
    const FieldCtx* ctx = w.m.ctx();
    const std::size_t d = w.m.dim();
    if (w.a_mats.size() != w.a_elems.size() || w.a_mats.empty())
        throw std::logic_error("assumption3: malformed witness tuple");
    // item 1: exact reassembly, independence, equal gradation, x/R membership
    if (reassemble(ctx, d, w.a_mats, w.a_elems) != w.m) throw std::logic_error("assumption3: reassembly failed");
    Span s = Span::from(ctx, w.a_elems);
    if (s.dim() != w.a_elems.size()) throw std::logic_error("assumption3: scalars are linearly dependent");
    for (const auto& v : w.a_elems) {
        auto g = v.homogeneous_gradation();
        if (!g || *g != w.alpha) throw std::logic_error("assumption3: scalar of wrong gradation");
        for (const auto& [word, c] : v.terms()) {
            bool has_x = word.find('x') != Word::npos;
            if (has_x != w.x_case) throw std::logic_error("assumption3: scalar in the wrong membership case");
            if (word.empty() || (word[0] != 'a' && word[0] != 'b'))
                throw std::logic_error("assumption3: scalar word outside A");
        }
    }
    if (w.alpha == 0) throw std::logic_error("assumption3: gradation must be positive");
    // item 2: H is generated by the coefficient matrices; W is its radical
    AlgebraBasis h2 = algebra_closure(w.a_mats);
    if (h2.dim() != w.h.dim()) throw std::logic_error("assumption3: stored algebra has wrong dimension");
    for (const auto& b : h2.basis())
        if (!w.h.contains(b)) throw std::logic_error("assumption3: stored algebra mismatch");
    RadicalData w2 = radical(h2);
    if (w2.dim() != w.w.dim() || w2.s != w.w.s) throw std::logic_error("assumption3: stored radical mismatch");
    RowSpace wspan(ctx, d * d);
    for (const auto& b : w2.basis) wspan.add(b.flatten());
    for (const auto& b : w.w.basis)
        if (!wspan.contains(b.flatten())) throw std::logic_error("assumption3: stored radical basis mismatch");
    // item 3: leading idempotent acting as identity modulo W
    if (!(w.e == w.a_mats[0])) throw std::logic_error("assumption3: A_1 != e");
    if (!(w.e * w.e == w.e)) throw std::logic_error("assumption3: e is not idempotent");
    for (const auto& r : h2.basis())
        if (!wspan.contains((r - w.e * r).flatten()) || !wspan.contains((r - r * w.e).flatten()))
            throw std::logic_error("assumption3: e is not an identity modulo W");
    // nilpotency index is exactly s
    if (w.w.s >= 2) {
        std::vector<MatConst> cur = w2.basis;
        for (std::size_t step = 1; step + 1 < w.w.s; ++step) {
            RowSpace rs(ctx, d * d);
            std::vector<MatConst> next;
            for (const auto& u : cur)
                for (const auto& b : w2.basis) {
                    MatConst prod = u * b;
                    if (!prod.is_zero() && rs.add(prod.flatten())) next.push_back(prod);
                }
            cur = std::move(next);
        }
        bool nonzero = !cur.empty();
        if (!nonzero) throw std::logic_error("assumption3: W^(s-1) vanished early");
        RowSpace rs(ctx, d * d);
        for (const auto& u : cur)
            for (const auto& b : w2.basis)
                if (!(u * b).is_zero()) throw std::logic_error("assumption3: W^s != 0");
    }
}

PowerOutcome power_to_assumption3(const MatFree& n) {
    const FieldCtx* ctx = n.ctx();
    const std::size_t d = n.dim();
    WordDecomposition dec = extract_decomposition(n);
    AlgebraBasis hp = algebra_closure(dec.coeffs);

    PowerOutcome out;
    if (auto nil = hp.nilpotency_index()) {
        out.zero_exponent = *nil;
        if (!n.pow(*nil).is_zero())
            throw std::logic_error("matalg: nilpotent coefficient algebra but N^m != 0");
        return out;
    }

    PseudoIdempotent pi = pseudo_idempotent(hp);
    const std::uint64_t beta = pi.beta_f;
    out.beta = beta;
    MatFree m = n.pow(static_cast<std::size_t>(beta));
    WordDecomposition mdec = extract_decomposition(m);
    if (mdec.alpha != dec.alpha * beta) throw std::logic_error("matalg: power decomposition gradation mismatch");

    // the coefficient matrices of M span exactly the weight-beta products
    PseudoHomogeneousSpan ph = pseudo_homogeneous_span(hp, static_cast<std::uint32_t>(beta));
    {
        RowSpace lhs(ctx, d * d), rhs(ctx, d * d);
        for (const auto& c : mdec.coeffs) lhs.add(c.flatten());
        for (const auto& b : ph.basis) rhs.add(b.flatten());
        if (!(lhs == rhs)) throw std::logic_error("matalg: power coefficients do not span the weight-beta space");
    }

    // express f over the coefficient matrices and renormalize so A_1 = e = f
    std::vector<Vec> cols;
    for (const auto& c : mdec.coeffs) cols.push_back(c.flatten());
    auto expr = solve_linear(ctx, cols, pi.f.flatten());
    if (!expr) throw std::logic_error("matalg: idempotent not expressible over the power coefficients");
    std::size_t pivot = mdec.words.size();
    for (std::size_t i = 0; i < expr->size(); ++i)
        if (!(*expr)[i].is_zero()) {
            pivot = i;
            break;
        }
    if (pivot == mdec.words.size()) throw std::logic_error("matalg: idempotent expression is zero");
    FieldElem cj = (*expr)[pivot];

    Assumption3Witness wit;
    wit.m = m;
    wit.alpha = mdec.alpha;
    wit.x_case = mdec.x_case;
    wit.e = pi.f;
    wit.a_mats.push_back(pi.f);
    wit.a_elems.push_back(FreePoly(ctx, mdec.words[pivot]).scaled(cj.inv()));
    for (std::size_t i = 0; i < mdec.words.size(); ++i) {
        if (i == pivot) continue;
        wit.a_mats.push_back(mdec.coeffs[i]);
        FreePoly adjusted =
            FreePoly(ctx, mdec.words[i]) - FreePoly(ctx, mdec.words[pivot]).scaled((*expr)[i] / cj);
        wit.a_elems.push_back(adjusted);
    }
    wit.h = algebra_closure(wit.a_mats);
    wit.w = radical(wit.h);

    // radical containment: H  ∩ Rad(H') lies inside Rad(H)
    {
        RadicalData wp = radical(hp);
        std::vector<Vec> hf, wf;
        for (const auto& b : wit.h.basis()) hf.push_back(b.flatten());
        for (const auto& b : wp.basis) wf.push_back(b.flatten());
        RowSpace wspan(ctx, d * d);
        for (const auto& b : wit.w.basis) wspan.add(b.flatten());
        for (const auto& v : intersect_spans(ctx, hf, wf))
            if (!wspan.contains(v))
                throw std::logic_error("matalg: radical containment H  ∩ W' subset W failed");
    }

    assumption3_check(wit);
    out.witness = std::move(wit);
    return out;
}

}  // namespace orelab
