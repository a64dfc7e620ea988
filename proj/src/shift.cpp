#include "orelab/shift.hpp"

#include <algorithm>
#include <stdexcept>

namespace orelab {

std::vector<FreePoly> gamma_components(const FreePoly& v) {
    const FieldCtx* ctx = v.ctx();
    std::vector<FreePoly> comps;
    comps.emplace_back(ctx);
    for (const auto& [word, coef] : v.terms()) {
        std::vector<std::size_t> xpos;
        for (std::size_t i = 0; i < word.size(); ++i)
            if (word[i] == 'x') xpos.push_back(i);
        if (xpos.size() > 20) throw std::invalid_argument("shift: word has too many x letters for expansion");
        const std::size_t nmask = std::size_t{1} << xpos.size();
        if (comps.size() <= xpos.size()) comps.resize(xpos.size() + 1, FreePoly(ctx));
        for (std::size_t mask = 0; mask < nmask; ++mask) {
            // x letters selected by the mask are replaced by y (deleted here)
            Word reduced;
            reduced.reserve(word.size());
            std::size_t xi = 0, removed = 0;
            for (std::size_t i = 0; i < word.size(); ++i) {
                if (xi < xpos.size() && xpos[xi] == i) {
                    bool take_y = (mask >> xi) & 1;
                    ++xi;
                    if (take_y) {
                        ++removed;
                        continue;
                    }
                }
                reduced.push_back(word[i]);
            }
            comps[removed].add_term(reduced, coef);
        }
    }
    while (comps.size() > 1 && comps.back().is_zero()) comps.pop_back();
    return comps;
}

FreePoly gamma_t(const FreePoly& v, const FieldElem& t) {
    if (t.is_zero()) return v;
    auto comps = gamma_components(v);
    FreePoly out(v.ctx());
    FieldElem tp = v.ctx()->one();
    for (std::size_t j = 0; j < comps.size(); ++j) {
        out += comps[j].scaled(tp);
        tp *= t;
    }
    return out;
}

MatFree gamma_t(const MatFree& m, const FieldElem& t) {
    MatFree out(m.ctx(), m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) out.at(r, c) = gamma_t(m.at(r, c), t);
    return out;
}

bool gamma_fixes_check(const FreePoly& v, const std::vector<FieldElem>& samples) {
    for (const auto& t : samples)
        if (gamma_t(v, t) != v) return false;
    return true;
}

GammaExpansion::GammaExpansion(MatFree base, std::vector<MatFree> comps)
    : base_(std::move(base)), comps_(std::move(comps)), zero_(base_.ctx(), base_.dim()) {}

GammaExpansion GammaExpansion::expand(const MatFree& m) {
    if (!m.homogeneous_gradation())
        throw std::invalid_argument("shift: gamma_y expansion requires entries homogeneous of equal gradation");
    const std::size_t d = m.dim();
    std::vector<std::vector<std::vector<FreePoly>>> per_entry(d, std::vector<std::vector<FreePoly>>(d));
    std::size_t top = 0;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            per_entry[r][c] = gamma_components(m.at(r, c));
            top = std::max(top, per_entry[r][c].size() - 1);
        }
    std::vector<MatFree> comps(top + 1, MatFree(m.ctx(), d));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            for (std::size_t j = 0; j < per_entry[r][c].size(); ++j) comps[j].at(r, c) = per_entry[r][c][j];
    while (comps.size() > 1 && comps.back().is_zero()) comps.pop_back();
    GammaExpansion g(m, std::move(comps));
    // evaluation property at a couple of nodes
    std::uint64_t navail = std::min<std::uint64_t>(m.ctx()->order(), 2);
    for (const auto& t : m.ctx()->enumerate_distinct(navail)) {
        MatFree lhs(m.ctx(), d);
        FieldElem tp = m.ctx()->one();
        for (const auto& comp : g.comps_) {
            lhs = lhs + comp.scaled(tp);
            tp *= t;
        }
        if (lhs != gamma_t(m, t)) throw std::logic_error("shift: gamma_y evaluation property failed");
    }
    return g;
}

const MatFree& GammaExpansion::component(std::size_t j) const { return j < comps_.size() ? comps_[j] : zero_; }

const MatFree& GammaExpansion::w(std::size_t n, std::size_t m) const {
    if (m == 0) throw std::invalid_argument("shift: w(n, m) requires m >= 1");
    if (n > ydeg() * m) return zero_;
    if (m == 1) return component(n);
    auto key = std::make_pair(n, m);
    auto it = wmemo_.find(key);
    if (it != wmemo_.end()) return it->second;
    MatFree acc(ctx(), dim());
    const std::size_t top = std::min(n, ydeg());
    for (std::size_t i = 0; i <= top; ++i) {
        const MatFree& rest = w(n - i, m - 1);
        if (rest.is_zero() || component(i).is_zero()) continue;
        acc = acc + component(i) * rest;
    }
    return wmemo_.emplace(key, std::move(acc)).first->second;
}

std::vector<MatFree> vandermonde_extract(const std::vector<std::pair<FieldElem, MatFree>>& values) {
    if (values.empty()) throw std::invalid_argument("shift: no evaluation nodes supplied");
    const FieldCtx* ctx = values[0].second.ctx();
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (values[i].first == values[j].first)
                throw std::invalid_argument("shift: Vandermonde nodes must be pairwise distinct");
    // augmented elimination on (V | rhs) with matrix right-hand sides
    std::vector<std::vector<FieldElem>> v(n, std::vector<FieldElem>(n, ctx->zero()));
    std::vector<MatFree> rhs;
    rhs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        FieldElem tp = ctx->one();
        for (std::size_t j = 0; j < n; ++j) {
            v[i][j] = tp;
            tp *= values[i].first;
        }
        rhs.push_back(values[i].second);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && v[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::logic_error("shift: singular Vandermonde system");
        std::swap(v[piv], v[col]);
        std::swap(rhs[piv], rhs[col]);
        FieldElem inv = v[col][col].inv();
        for (std::size_t j = col; j < n; ++j) v[col][j] *= inv;
        rhs[col] = rhs[col].scaled(inv);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || v[r][col].is_zero()) continue;
            FieldElem f = v[r][col];
            for (std::size_t j = col; j < n; ++j) v[r][j] -= f * v[col][j];
            rhs[r] = rhs[r] - rhs[col].scaled(f);
        }
    }
    return rhs;
}

std::vector<MatFree> vandermonde_recover(const GammaExpansion& g) {
    const std::size_t need = g.ydeg() + 1;
    auto nodes = g.ctx()->enumerate_distinct(need);  // throws "field too small" when short
    std::vector<std::pair<FieldElem, MatFree>> values;
    values.reserve(need);
    for (const auto& t : nodes) values.emplace_back(t, gamma_t(g.base(), t));
    auto comps = vandermonde_extract(values);
    for (std::size_t j = 0; j < comps.size(); ++j)
        if (comps[j] != g.component(j))
            throw std::logic_error("shift: Vandermonde extraction disagrees with the generic expansion");
    return comps;
}

Span platinum_closure(const Span& s) {
    std::vector<FreePoly> gens;
    for (const auto& b : s.basis()) {
        auto comps = gamma_components(b);
        gens.insert(gens.end(), comps.begin(), comps.end());
    }
    Span out = Span::from(s.ctx(), gens);
    for (const auto& b : s.basis())
        if (!out.contains(b)) throw std::logic_error("shift: platinum closure lost a generator");
    std::uint64_t navail = std::min<std::uint64_t>(s.ctx()->order(), 3);
    for (const auto& t : s.ctx()->enumerate_distinct(navail))
        for (const auto& b : out.basis())
            if (!out.contains(gamma_t(b, t))) throw std::logic_error("shift: platinum closure not shift-closed");
    return out;
}

ESeq::ESeq(const FieldCtx* ctx, std::vector<FreePoly> gens) : ctx_(ctx), gens_(std::move(gens)), zero_(ctx) {
    if (gens_.empty()) throw std::invalid_argument("shift: e-sequence needs at least one generator");
    std::optional<std::size_t> g;
    for (const auto& r : gens_) {
        if (r.is_zero()) continue;
        auto gr = r.homogeneous_gradation();
        if (!gr) throw std::invalid_argument("shift: e-sequence generators must be homogeneous");
        if (g && *g != *gr) throw std::invalid_argument("shift: e-sequence generators must share gradation");
        g = gr;
    }
}

const FreePoly& ESeq::e(std::size_t n, std::size_t m) const {
    if (m == 0) throw std::invalid_argument("shift: e(n, m) requires m >= 1");
    const std::size_t l = top_index();
    if (n > l * m) return zero_;
    if (m == 1) return n <= l ? gens_[n] : zero_;
    auto key = std::make_pair(n, m);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    FreePoly acc(ctx_);
    for (std::size_t i = 0; i <= std::min(n, l); ++i) {
        const FreePoly& rest = e(n - i, m - 1);
        if (rest.is_zero() || gens_[i].is_zero()) continue;
        acc += gens_[i] * rest;
    }
    return memo_.emplace(key, std::move(acc)).first->second;
}

Span slm_span(const GammaExpansion& g, std::size_t m) {
    std::vector<FreePoly> gens;
    for (std::size_t i = 0; i <= g.ydeg() * m; ++i) {
        const MatFree& wm = g.w(i, m);
        auto es = wm.entries();
        gens.insert(gens.end(), es.begin(), es.end());
    }
    return Span::from(g.ctx(), gens);
}

Span slm_span(const MatFree& m, std::size_t mm) { return slm_span(GammaExpansion::expand(m), mm); }

ScanReport assumption1_scan(const MatFree& m, std::size_t n_from, std::size_t n_to, bool check_ideal_x) {
    if (n_from < 1 || n_to < n_from) throw std::invalid_argument("shift: bad scan window");
    GammaExpansion g = GammaExpansion::expand(m);
    ScanReport rep;
    MatFree power = m;
    for (std::size_t n = 1; n <= n_to; ++n) {
        if (n > 1 && check_ideal_x) power = power * m;
        if (n < n_from) continue;
        ScanRow row;
        row.n = n;
        Span s = slm_span(g, n);
        row.dim_r = s.r_dim();
        row.bound_met = row.dim_r * row.dim_r <= n;
        if (check_ideal_x) {
            bool all_x = true;
            for (const auto& entry : power.entries())
                for (const auto& [w, c] : entry.terms())
                    if (w.find('x') == Word::npos) all_x = false;
            row.entries_in_ideal_x = all_x;
        }
        rep.rows.push_back(row);
        if (row.bound_met) rep.witnesses.push_back(n);
    }
    return rep;
}

}  // namespace orelab
