#include "orelab/freealg.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace orelab {

std::size_t gradation(const Word& w) {
    std::size_t g = 0;
    for (char c : w)
        if (c == 'a' || c == 'b') ++g;
    return g;
}

bool word_valid(const Word& w) {
    for (char c : w)
        if (c != 'a' && c != 'b' && c != 'x') return false;
    return true;
}

WordClass classify_word(const Word& w) {
    WordClass out;
    if (!word_valid(w)) throw std::invalid_argument("freealg: invalid word: " + w);
    const std::size_t g = gradation(w);
    out.in_ideal_x = w.find('x') != Word::npos;
    out.in_R = !w.empty() && !out.in_ideal_x;
    out.in_A = !w.empty() && (w[0] == 'a' || w[0] == 'b');
    out.in_Abar = g >= 1;
    if (out.in_A && g % 2 == 0 && g > 0) {
        // Split at each a/b into gradation-1 blocks; pair consecutive blocks.
        // The word lies in A* iff each pair carries equal letters.
        std::vector<char> letters;
        for (char c : w)
            if (c != 'x') letters.push_back(c);
        bool star = true;
        for (std::size_t i = 0; i + 1 < letters.size(); i += 2)
            if (letters[i] != letters[i + 1]) star = false;
        out.in_Astar = star;
        out.in_Bcomp = !star;
    }
    return out;
}

FreePoly::FreePoly(const FieldCtx* ctx, const Word& w) : ctx_(ctx) { add_term(w, ctx->one()); }

FreePoly FreePoly::constant(const FieldCtx* ctx, const FieldElem& c) {
    FreePoly v(ctx);
    v.add_term("", c);
    return v;
}

FreePoly FreePoly::monomial(const FieldCtx* ctx, const Word& w, const FieldElem& c) {
    FreePoly v(ctx);
    v.add_term(w, c);
    return v;
}

FieldElem FreePoly::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? ctx_->zero() : it->second;
}

void FreePoly::add_term(const Word& w, const FieldElem& c) {
    if (!word_valid(w)) throw std::invalid_argument("freealg: invalid word: " + w);
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void FreePoly::check_same_ctx(const FreePoly& o) const {
    if (!ctx_ || !o.ctx_ || !ctx_->same(*o.ctx_))
        throw std::invalid_argument("freealg: operands from different field contexts");
}

FreePoly FreePoly::operator+(const FreePoly& o) const {
    check_same_ctx(o);
    FreePoly out = *this;
    for (const auto& [w, c] : o.terms_) out.add_term(w, c);
    return out;
}

FreePoly FreePoly::operator-(const FreePoly& o) const {
    check_same_ctx(o);
    FreePoly out = *this;
    for (const auto& [w, c] : o.terms_) out.add_term(w, -c);
    return out;
}

FreePoly FreePoly::operator-() const {
    FreePoly out(ctx_);
    for (const auto& [w, c] : terms_) out.add_term(w, -c);
    return out;
}

FreePoly FreePoly::operator*(const FreePoly& o) const {
    check_same_ctx(o);
    FreePoly out(ctx_);
    for (const auto& [wu, cu] : terms_)
        for (const auto& [wv, cv] : o.terms_) out.add_term(wu + wv, cu * cv);
    return out;
}

FreePoly FreePoly::scaled(const FieldElem& c) const {
    FreePoly out(ctx_);
    for (const auto& [w, cc] : terms_) out.add_term(w, cc * c);
    return out;
}

FreePoly operator*(const FieldElem& c, const FreePoly& v) { return v.scaled(c); }

bool FreePoly::operator==(const FreePoly& o) const {
    check_same_ctx(o);
    return terms_ == o.terms_;
}

std::optional<std::size_t> FreePoly::homogeneous_gradation() const {
    std::optional<std::size_t> g;
    for (const auto& [w, c] : terms_) {
        std::size_t gw = gradation(w);
        if (!g)
            g = gw;
        else if (*g != gw)
            return std::nullopt;
    }
    return g ? g : std::optional<std::size_t>(0);
}

std::string FreePoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.str();
        bool trivial = c.is_one();
        bool simple = cs.find('+') == std::string::npos && cs.find('-') == std::string::npos;
        if (w.empty()) {
            os << (simple ? cs : "(" + cs + ")");
        } else if (trivial) {
            os << w;
        } else if (simple) {
            os << cs << "*" << w;
        } else {
            os << "(" << cs << ")*" << w;
        }
    }
    return os.str();
}

FreePoly FreePoly::parse(const FieldCtx* ctx, const std::string& text) {
    FreePoly out(ctx);
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i >= text.size()) throw std::invalid_argument("freealg: empty polynomial text");
    bool negate = false;
    bool expect_term = true;
    while (i < text.size()) {
        skip_ws();
        if (i >= text.size()) break;
        if (!expect_term) {
            if (text[i] == '+') {
                negate = false;
            } else if (text[i] == '-') {
                negate = true;
            } else {
                throw std::invalid_argument("freealg: expected + or - at: " + text.substr(i));
            }
            ++i;
            expect_term = true;
            continue;
        }
        if (text[i] == '-') {
            negate = !negate;
            ++i;
            skip_ws();
        }
        // coefficient: "(...)" or digits, optionally followed by '*'
        FieldElem coef = ctx->one();
        bool have_coef = false;
        if (text[i] == '(') {
            std::size_t close = text.find(')', i);
            if (close == std::string::npos) throw std::invalid_argument("freealg: unbalanced parenthesis");
            coef = ctx->parse(text.substr(i + 1, close - i - 1));
            i = close + 1;
            have_coef = true;
        } else if (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == 't') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == 't' || text[j] == '^'))
                ++j;
            coef = ctx->parse(text.substr(i, j - i));
            i = j;
            have_coef = true;
        }
        skip_ws();
        if (i < text.size() && text[i] == '*') {
            ++i;
            skip_ws();
        }
        Word w;
        while (i < text.size() && (text[i] == 'a' || text[i] == 'b' || text[i] == 'x')) {
            w.push_back(text[i]);
            ++i;
        }
        if (w.empty() && !have_coef)
            throw std::invalid_argument("freealg: malformed term at: " + text.substr(i));
        if (negate) coef = -coef;
        out.add_term(w, coef);
        negate = false;
        expect_term = false;
    }
    if (expect_term) throw std::invalid_argument("freealg: dangling sign in polynomial text");
    return out;
}

// ---------------------------------------------------------------------------

Span::Span(const FieldCtx* ctx, std::vector<Word> coords)
    : ctx_(ctx), coords_(std::move(coords)), xfree_begin_(0), rows_(ctx, coords_.size()) {
    // order: x-containing words first, then x-free words, each block in
    // canonical word order; pivots landing in the x-free block witness
    // vectors lying in R
    std::stable_sort(coords_.begin(), coords_.end(), [](const Word& u, const Word& v) {
        bool ux = u.find('x') != Word::npos;
        bool vx = v.find('x') != Word::npos;
        if (ux != vx) return ux;
        return WordOrder{}(u, v);
    });
    coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
    rows_ = RowSpace(ctx_, coords_.size());
    xfree_begin_ = coords_.size();
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i].find('x') == Word::npos) {
            xfree_begin_ = i;
            break;
        }
    }
    index_.clear();
    for (std::size_t i = 0; i < coords_.size(); ++i) index_[coords_[i]] = i;
}

Span Span::from(const FieldCtx* ctx, const std::vector<FreePoly>& gens) {
    std::vector<Word> universe;
    for (const auto& g : gens)
        for (const auto& [w, c] : g.terms()) universe.push_back(w);
    Span s(ctx, std::move(universe));
    for (const auto& g : gens) s.add(g);
    return s;
}

Span Span::over_universe(const FieldCtx* ctx, const std::vector<Word>& universe) {
    return Span(ctx, universe);
}

Vec Span::to_vec(const FreePoly& v) const {
    Vec out(coords_.size(), ctx_->zero());
    for (const auto& [w, c] : v.terms()) {
        auto it = index_.find(w);
        if (it == index_.end()) throw std::invalid_argument("freealg: word outside span universe: " + w);
        out[it->second] = c;
    }
    return out;
}

FreePoly Span::from_vec(const Vec& v) const {
    FreePoly out(ctx_);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) out.add_term(coords_[i], v[i]);
    return out;
}

Span::AddResult Span::add(const FreePoly& v) {
    AddResult res;
    auto pivot = rows_.add(to_vec(v));
    res.grew = pivot.has_value();
    res.grew_r = pivot.has_value() && *pivot >= xfree_begin_;
    return res;
}

bool Span::contains(const FreePoly& v) const {
    for (const auto& [w, c] : v.terms())
        if (!index_.count(w)) return false;
    return rows_.contains(to_vec(v));
}

std::vector<FreePoly> Span::basis() const {
    std::vector<FreePoly> out;
    for (const auto& row : rows_.rows()) out.push_back(from_vec(row));
    return out;
}

Span Span::intersect_with_R() const {
    std::vector<FreePoly> gens;
    for (std::size_t r = 0; r < rows_.rows().size(); ++r) {
        if (rows_.pivots()[r] >= xfree_begin_) gens.push_back(from_vec(rows_.rows()[r]));
    }
    Span out = Span::from(ctx_, gens);
    // every basis vector must be x-free and lie in the original span
    for (const auto& g : gens) {
        for (const auto& [w, c] : g.terms())
            if (w.find('x') != Word::npos) throw std::logic_error("freealg: R-intersection produced an x word");
        if (!contains(g)) throw std::logic_error("freealg: R-intersection left the span");
    }
    return out;
}

bool Span::equals(const Span& o) const {
    if (dim() != o.dim()) return false;
    for (const auto& b : basis())
        if (!o.contains(b)) return false;
    return true;
}

Span Span::sum(const Span& a, const Span& b) {
    std::vector<FreePoly> gens = a.basis();
    auto bb = b.basis();
    gens.insert(gens.end(), bb.begin(), bb.end());
    return Span::from(a.ctx_, gens);
}

// ---------------------------------------------------------------------------

MatFree::MatFree(const FieldCtx* ctx, std::size_t d) : ctx_(ctx), d_(d), e_(d * d, FreePoly(ctx)) {}

MatFree MatFree::from_entries(const FieldCtx* ctx, std::vector<std::vector<FreePoly>> rows) {
    MatFree m(ctx, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size()) throw std::invalid_argument("freealg: matrix must be square");
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = std::move(rows[r][c]);
    }
    return m;
}

MatFree MatFree::operator+(const MatFree& o) const {
    if (d_ != o.d_) throw std::invalid_argument("freealg: matrix size mismatch");
    MatFree out(ctx_, d_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] + o.e_[i];
    return out;
}

MatFree MatFree::operator-(const MatFree& o) const {
    if (d_ != o.d_) throw std::invalid_argument("freealg: matrix size mismatch");
    MatFree out(ctx_, d_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] - o.e_[i];
    return out;
}

MatFree MatFree::operator*(const MatFree& o) const {
    if (d_ != o.d_) throw std::invalid_argument("freealg: matrix size mismatch");
    MatFree out(ctx_, d_);
    for (std::size_t r = 0; r < d_; ++r)
        for (std::size_t c = 0; c < d_; ++c) {
            FreePoly acc(ctx_);
            for (std::size_t k = 0; k < d_; ++k) acc += at(r, k) * o.at(k, c);
            out.at(r, c) = std::move(acc);
        }
    return out;
}

MatFree MatFree::scaled(const FieldElem& c) const {
    MatFree out(ctx_, d_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i].scaled(c);
    return out;
}

MatFree MatFree::pow(std::size_t n) const {
    if (n == 0) throw std::invalid_argument("freealg: matrix power requires n >= 1");
    MatFree acc = *this;
    for (std::size_t i = 1; i < n; ++i) acc = acc * *this;
    return acc;
}

bool MatFree::is_zero() const {
    for (const auto& v : e_)
        if (!v.is_zero()) return false;
    return true;
}

bool MatFree::operator==(const MatFree& o) const {
    if (d_ != o.d_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] != o.e_[i]) return false;
    return true;
}

std::optional<std::size_t> MatFree::homogeneous_gradation() const {
    std::optional<std::size_t> g;
    for (const auto& v : e_) {
        if (v.is_zero()) continue;
        auto gv = v.homogeneous_gradation();
        if (!gv) return std::nullopt;
        if (!g)
            g = gv;
        else if (*g != *gv)
            return std::nullopt;
    }
    return g ? g : std::optional<std::size_t>(0);
}

}  // namespace orelab
