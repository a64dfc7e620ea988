#include "orelab/starcal.hpp"

#include <algorithm>
#include <stdexcept>

namespace orelab {

std::string Sym::str() const {
    switch (kind) {
        case SymKind::RadBasis:
            return "E" + std::to_string(index);
        case SymKind::OneMinusE:
            return "1-e";
        case SymKind::Idem:
            return "e";
        case SymKind::Compl:
            return "P" + std::to_string(index);
    }
    return "?";
}

std::string StarPrefix::str() const {
    std::string out = "(";
    for (const auto& s : syms) out += s.str() + ",";
    out += "I,...)";
    return out;
}

StarContext::StarContext(const Assumption3Witness& wit)
    : wit_(&wit),
      g_(GammaExpansion::expand(wit.m)),
      e_(wit.e),
      one_minus_e_(MatConst::identity(wit.e.ctx(), wit.e.dim()) - wit.e) {
    rad_basis_ = wit.w.basis;
    // complement P_1..P_beta': deterministic basis of H*e extending W to all
    // of H; P_i e = P_i holds since e is idempotent
    const FieldCtx* ctx = wit.e.ctx();
    const std::size_t dd = wit.e.dim() * wit.e.dim();
    RowSpace span(ctx, dd);
    for (const auto& w : rad_basis_) span.add(w.flatten());
    for (const auto& r : wit_->h.basis()) {
        MatConst cand = r * e_;
        if (cand.is_zero()) continue;
        if (span.add(cand.flatten())) compl_.push_back(cand);
    }
    if (span.dim() != wit_->h.dim())
        throw std::logic_error("starcal: W + H*e does not span H (identity-mod-W failed upstream)");
    for (const auto& p : compl_)
        if (!(p * e_ == p)) throw std::logic_error("starcal: complement entry with P e != P");
}

MatConst StarContext::materialize(const Sym& s) const {
    switch (s.kind) {
        case SymKind::RadBasis:
            return rad_basis_.at(s.index - 1);
        case SymKind::OneMinusE:
            return one_minus_e_;
        case SymKind::Idem:
            return e_;
        case SymKind::Compl:
            return compl_.at(s.index - 1);
    }
    throw std::logic_error("starcal: bad symbol");
}

std::vector<StarPrefix> StarContext::good_set() const {
    // E = {1-e, E_1..E_beta} entries up to position q < s, then one of
    // {e, P_1..P_beta'}
    std::vector<Sym> e_choices;
    for (std::uint32_t i = 1; i <= rad_basis_.size(); ++i) e_choices.push_back({SymKind::RadBasis, i});
    e_choices.push_back({SymKind::OneMinusE, 0});
    std::vector<Sym> final_choices;
    final_choices.push_back({SymKind::Idem, 0});
    for (std::uint32_t i = 1; i <= compl_.size(); ++i) {
        if (compl_[i - 1] == e_) continue;  // same matrix as e, drop the duplicate symbol
        final_choices.push_back({SymKind::Compl, i});
    }

    std::vector<StarPrefix> out;
    std::vector<std::vector<Sym>> level = {{}};  // prefixes over E of length q
    for (std::uint32_t q = 0; q < s(); ++q) {
        for (const auto& head : level) {
            for (const auto& fin : final_choices) {
                StarPrefix sp;
                sp.syms = head;
                sp.syms.push_back(fin);
                sp.distance = q + 1;
                out.push_back(std::move(sp));
            }
        }
        std::vector<std::vector<Sym>> next;
        for (const auto& head : level)
            for (const auto& ec : e_choices) {
                auto h = head;
                h.push_back(ec);
                next.push_back(std::move(h));
            }
        level = std::move(next);
    }
    return out;
}

StarPrefix StarContext::t_prefix(std::uint32_t n) const {
    if (n < 1) throw std::invalid_argument("starcal: t_n requires n >= 1");
    StarPrefix sp;
    for (std::uint32_t i = 1; i < n; ++i) sp.syms.push_back({SymKind::OneMinusE, 0});
    sp.syms.push_back({SymKind::Idem, 0});
    sp.distance = n;
    return sp;
}

StarPrefix StarContext::t_bar_prefix(std::uint32_t n) const {
    StarPrefix sp;
    for (std::uint32_t i = 0; i < n; ++i) sp.syms.push_back({SymKind::OneMinusE, 0});
    return sp;
}

const MatFree& StarContext::star(const StarPrefix& u, std::size_t n, std::size_t m) const {
    if (m == 0) throw std::invalid_argument("starcal: star requires m >= 1");
    std::vector<Sym> key(u.syms.begin(), u.syms.begin() + std::min(u.syms.size(), m));
    auto mk = std::make_tuple(key, n, m);
    auto it = memo_.find(mk);
    if (it != memo_.end()) return it->second;

    MatFree acc(ctx(), dim());
    if (n <= ydeg() * m) {
        if (key.empty()) {
            acc = g_.w(n, m);
        } else {
            MatFree head = lift(materialize(key[0]));
            StarPrefix tail;
            tail.syms.assign(key.begin() + 1, key.end());
            if (m == 1) {
                if (n <= ydeg()) acc = head * g_.component(n);
            } else {
                for (std::size_t j = 0; j <= std::min(n, ydeg()); ++j) {
                    const MatFree& rest = star(tail, n - j, m - 1);
                    if (rest.is_zero()) continue;
                    acc = acc + head * g_.component(j) * rest;
                }
            }
        }
    }
    return memo_.emplace(std::move(mk), std::move(acc)).first->second;
}

bool telescope_check(const StarContext& sc, std::size_t n, std::size_t m) {
    const std::size_t s = sc.s();
    // exact for any depth <= m; for m > s the residual vanishes (a length-s
    // prefix over {1-e} annihilates w) and the t_i alone carry w
    const std::uint32_t depth = static_cast<std::uint32_t>(std::min(m, s));
    MatFree sum(sc.ctx(), sc.dim());
    for (std::uint32_t i = 1; i <= depth; ++i) sum = sum + sc.star(sc.t_prefix(i), n, m);
    const MatFree& residual = sc.star(sc.t_bar_prefix(depth), n, m);
    if (m > s && !residual.is_zero()) return false;
    sum = sum + residual;
    return sum == sc.expansion().w(n, m);
}

int quintuple_cmp(const Quintuple& a, const Quintuple& b) {
    if (a.m != b.m) throw std::invalid_argument("starcal: quintuples at different m are incomparable");
    const std::uint32_t da = a.u.distance.value_or(static_cast<std::uint32_t>(a.u.syms.size()));
    const std::uint32_t db = b.u.distance.value_or(static_cast<std::uint32_t>(b.u.syms.size()));
    if (da != db) return da > db ? -1 : 1;  // larger distance compares smaller
    if (a.n != b.n) return a.n < b.n ? -1 : 1;
    if (a.u.syms != b.u.syms) return a.u.syms < b.u.syms ? -1 : 1;
    if (a.k != b.k) return a.k < b.k ? -1 : 1;
    if (a.l != b.l) return a.l < b.l ? -1 : 1;
    return 0;
}

BZReport compute_bz(const StarContext& sc, std::size_t m, std::optional<std::size_t> n_cap_opt) {
    const std::size_t full_cap = sc.ydeg() * m;
    const std::size_t n_cap = n_cap_opt.value_or(full_cap);
    if (n_cap < full_cap)
        throw std::invalid_argument("starcal: n cap " + std::to_string(n_cap) + " misses nonzero w up to " +
                                    std::to_string(full_cap));
    BZReport rep;
    rep.m = m;
    rep.n_cap = n_cap;

    std::vector<Quintuple> qs;
    for (const auto& u : sc.good_set())
        for (std::size_t n = 0; n <= n_cap; ++n)
            for (std::size_t k = 1; k <= sc.dim(); ++k)
                for (std::size_t l = 1; l <= sc.dim(); ++l) qs.push_back({u, n, m, k, l});
    std::sort(qs.begin(), qs.end(), [](const Quintuple& a, const Quintuple& b) { return quintuple_cmp(a, b) < 0; });

    // collect the word universe over all star values first
    std::vector<Word> universe;
    for (const auto& q : qs) {
        const FreePoly& val = sc.star(q.u, q.n, q.m).at(q.k - 1, q.l - 1);
        for (const auto& [w, c] : val.terms()) universe.push_back(w);
    }
    Span running = Span::over_universe(sc.ctx(), universe);
    std::vector<FreePoly> all_values;
    for (const auto& q : qs) {
        const FreePoly& val = sc.star(q.u, q.n, q.m).at(q.k - 1, q.l - 1);
        all_values.push_back(val);
        auto res = running.add(val);
        SweepRecord rec;
        rec.q = q;
        rec.in_b = !res.grew;
        rec.in_z = res.grew_r;
        if (rec.in_b && rec.in_z) throw std::logic_error("starcal: B and Z overlap");
        rep.b_count += rec.in_b;
        rep.z_count += rec.in_z;
        rep.records.push_back(std::move(rec));
    }
    // dim R_m(M) computed independently from the full value span
    Span full = Span::from(sc.ctx(), all_values);
    rep.r_dim = full.intersect_with_R().dim();
    if (rep.r_dim != rep.z_count)
        throw std::logic_error("starcal: |Z_m| = " + std::to_string(rep.z_count) + " but dim R_m = " +
                               std::to_string(rep.r_dim));
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

// consecutive gradation blocks: prefix of k blocks, t middle pieces of
// gradation alpha each, remaining tail
struct WordCut {
    Word prefix;
    std::vector<Word> pieces;
    Word tail;
};

WordCut cut_word(const Word& w, std::size_t k, std::size_t t, std::size_t alpha) {
    if (w.empty() || (w[0] != 'a' && w[0] != 'b'))
        throw std::invalid_argument("starcal: monomial '" + w + "' is not in A");
    std::vector<std::size_t> block_start;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != 'x') block_start.push_back(i);
    const std::size_t g = block_start.size();
    if (g < k + t * alpha)
        throw std::invalid_argument("starcal: monomial '" + w + "' too short to factor as A(k) a^t A");
    auto block_pos = [&](std::size_t bi) { return bi < g ? block_start[bi] : w.size(); };
    WordCut cut;
    cut.prefix = w.substr(0, block_pos(k));
    for (std::size_t j = 0; j < t; ++j) {
        std::size_t from = block_pos(k + j * alpha);
        std::size_t to = block_pos(k + (j + 1) * alpha);
        cut.pieces.push_back(w.substr(from, to - from));
    }
    cut.tail = w.substr(block_pos(k + t * alpha));
    return cut;
}

}  // namespace

UVSplit uv_split(const StarContext& sc, const FreePoly& v, std::size_t k, std::size_t t) {
    const FieldCtx* ctx = sc.ctx();
    const std::size_t alpha = sc.witness().alpha;
    if (t < 1) throw std::invalid_argument("starcal: uv split requires t >= 1");

    // gather the gradation-alpha pieces appearing in v
    std::vector<WordCut> cuts;
    std::vector<FieldElem> coefs;
    std::vector<Word> piece_words;
    for (const auto& [w, c] : v.terms()) {
        WordCut cut = cut_word(w, k, t, alpha);
        for (const auto& piece : cut.pieces) piece_words.push_back(piece);
        cuts.push_back(std::move(cut));
        coefs.push_back(c);
    }
    // extended scalar basis: witness scalars, then the first absent words of
    // gradation alpha (in canonical order) until every piece is covered
    std::vector<Word> universe = piece_words;
    for (const auto& a : sc.witness().a_elems)
        for (const auto& [w, c] : a.terms()) universe.push_back(w);
    std::sort(universe.begin(), universe.end(), WordOrder{});
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    std::map<Word, std::size_t, WordOrder> index;
    for (std::size_t i = 0; i < universe.size(); ++i) index[universe[i]] = i;
    auto embed = [&](const FreePoly& a) {
        Vec out(universe.size(), ctx->zero());
        for (const auto& [w, c] : a.terms()) out[index.at(w)] = c;
        return out;
    };
    TrackedRowSpace basis(ctx, universe.size());
    std::vector<FreePoly> ext;  // a_1, a_2, ..., completion
    for (const auto& a : sc.witness().a_elems) {
        if (!basis.add(embed(a))) throw std::logic_error("starcal: witness scalars dependent");
        ext.push_back(a);
    }
    std::vector<Word> sorted_pieces = piece_words;
    std::sort(sorted_pieces.begin(), sorted_pieces.end(), WordOrder{});
    sorted_pieces.erase(std::unique(sorted_pieces.begin(), sorted_pieces.end()), sorted_pieces.end());
    for (const auto& pw : sorted_pieces) {
        if (gradation(pw) != alpha)
            throw std::invalid_argument("starcal: piece '" + pw + "' has gradation != alpha");
        FreePoly mono(ctx, pw);
        if (basis.add(embed(mono))) ext.push_back(mono);
    }
    // coordinates of each piece over the extended basis; index 0 is a_1
    auto coords = [&](const Word& pw) {
        auto c = basis.express(embed(FreePoly(ctx, pw)));
        if (!c) throw std::logic_error("starcal: piece not covered by the extended basis");
        return *c;
    };

    UVSplit out;
    out.v_part = FreePoly(ctx);
    FreePoly a1_pow_t = sc.witness().a_elems[0];
    for (std::size_t j = 1; j < t; ++j) a1_pow_t = a1_pow_t * sc.witness().a_elems[0];
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        FieldElem mu = coefs[i];
        for (const auto& piece : cuts[i].pieces) mu *= coords(piece)[0];
        if (mu.is_zero()) continue;
        out.v_terms.push_back({mu, cuts[i].prefix, cuts[i].tail});
        out.v_part += FreePoly(ctx, cuts[i].prefix).scaled(mu) * a1_pow_t * FreePoly(ctx, cuts[i].tail);
    }
    out.u_part = v - out.v_part;
    return out;
}

FreePoly apply_deletion(const FieldCtx* ctx, const UVSplit& split) {
    FreePoly out(ctx);
    for (const auto& term : split.v_terms) out.add_term(term.prefix + term.tail, term.coeff);
    return out;
}

NajReport naj_spot_check(const StarContext& sc, std::size_t m, std::size_t t) {
    const std::size_t s = sc.s();
    if (!(t > s)) throw std::invalid_argument("starcal: hypothesis t > s violated");
    if (!(m > t + s)) throw std::invalid_argument("starcal: hypothesis m > t + s violated");
    if (!sc.witness().x_case)
        throw std::invalid_argument("starcal: deletion argument requires scalars in the ideal <x>");

    BZReport level_m = compute_bz(sc, m);
    BZReport level_mt = compute_bz(sc, m - t);
    NajReport rep;
    rep.m = m;
    rep.t = t;
    rep.z_count = level_m.z_count;
    rep.c_m_cardinality = level_m.records.size();

    const std::size_t cap_mt = sc.ydeg() * (m - t);
    for (const auto& rec : level_m.records) {
        if (!rec.in_z) continue;
        ++rep.checked;
        if (rec.q.n > cap_mt) {
            ++rep.vacuous;  // star value at level m-t is the zero entry
            continue;
        }
        bool found = false, in_b = false;
        for (const auto& low : level_mt.records) {
            if (low.q.u == rec.q.u && low.q.n == rec.q.n && low.q.k == rec.q.k && low.q.l == rec.q.l) {
                found = true;
                in_b = low.in_b;
                break;
            }
        }
        if (!found || !in_b) rep.violations.push_back(rec.q);
    }
    return rep;
}

}  // namespace orelab
