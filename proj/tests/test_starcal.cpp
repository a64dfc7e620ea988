#include <doctest.h>

#include "orelab/starcal.hpp"

using namespace orelab;

namespace {

Assumption3Witness make_witness(const FieldCtx* ctx, std::vector<std::vector<const char*>> entries) {
    std::vector<std::vector<FreePoly>> rows;
    for (const auto& r : entries) {
        std::vector<FreePoly> row;
        for (const char* cell : r) row.push_back(FreePoly::parse(ctx, cell));
        rows.push_back(std::move(row));
    }
    PowerOutcome out = power_to_assumption3(MatFree::from_entries(ctx, std::move(rows)));
    REQUIRE(out.witness.has_value());
    return *out.witness;
}

// all length-s prefixes over the radical basis and 1-e
std::vector<StarPrefix> annihilating_prefixes(const StarContext& sc) {
    std::vector<Sym> choices;
    for (std::uint32_t i = 1; i <= sc.rad_basis().size(); ++i) choices.push_back({SymKind::RadBasis, i});
    choices.push_back({SymKind::OneMinusE, 0});
    std::vector<StarPrefix> out = {{}};
    for (std::size_t pos = 0; pos < sc.s(); ++pos) {
        std::vector<StarPrefix> next;
        for (const auto& sp : out)
            for (const auto& c : choices) {
                StarPrefix np = sp;
                np.syms.push_back(c);
                next.push_back(np);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("good set of the scalar witness has a single element") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"ax"}});
    StarContext sc(wit);
    auto d = sc.good_set();
    REQUIRE(d.size() == 1);
    CHECK(d[0].distance == 1);
    CHECK(d[0].syms.size() == 1);
    CHECK(d[0].syms[0].kind == SymKind::Idem);
}

TEST_CASE("good set with a nontrivial radical populates both distances") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"0", "ax"}, {"0", "bx"}});
    StarContext sc(wit);
    CHECK(sc.s() == 2);
    auto d = sc.good_set();
    // distance 1: (e); distance 2: (E1, e), (1-e, e)
    CHECK(d.size() == 3);
    std::size_t dist1 = 0, dist2 = 0;
    for (const auto& u : d) {
        if (u.distance == 1) ++dist1;
        if (u.distance == 2) ++dist2;
    }
    CHECK(dist1 == 1);
    CHECK(dist2 == 2);
    // counting bound |D(M)| <= (beta+1)^s (beta'+1) s
    std::size_t beta = sc.rad_basis().size(), betap = sc.complement().size();
    std::size_t bound = 1;
    for (std::size_t i = 0; i < sc.s(); ++i) bound *= beta + 1;
    CHECK(d.size() <= bound * (betap + 1) * sc.s());
}

TEST_CASE("identity prefix star equals w") {
    FieldCtx f2(2, 1);
    for (auto entries : std::vector<std::vector<std::vector<const char*>>>{
             {{"ax"}}, {{"0", "ax"}, {"0", "bx"}}, {{"ax", "bx"}, {"0", "ax"}}, {{"a"}}}) {
        Assumption3Witness wit = make_witness(&f2, entries);
        StarContext sc(wit);
        StarPrefix identity;
        for (std::size_t m = 1; m <= 4; ++m)
            for (std::size_t n = 0; n <= sc.ydeg() * m; ++n) CHECK(sc.star(identity, n, m) == sc.expansion().w(n, m));
    }
}

TEST_CASE("scalar witness: t_1 acts trivially") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"ax"}});
    StarContext sc(wit);
    for (std::size_t m = 1; m <= 3; ++m)
        for (std::size_t n = 0; n <= m; ++n) CHECK(sc.star(sc.t_prefix(1), n, m) == sc.expansion().w(n, m));
}

TEST_CASE("length-s prefixes over the radical and 1-e annihilate w") {
    FieldCtx f2(2, 1);
    for (auto entries : std::vector<std::vector<std::vector<const char*>>>{
             {{"ax"}}, {{"0", "ax"}, {"0", "bx"}}, {{"ax", "bx"}, {"0", "ax"}}}) {
        Assumption3Witness wit = make_witness(&f2, entries);
        StarContext sc(wit);
        for (const auto& u : annihilating_prefixes(sc))
            for (std::size_t m = sc.s() + 1; m <= sc.s() + 3; ++m)
                for (std::size_t n = 0; n <= sc.ydeg() * m; ++n) CHECK(sc.star(u, n, m).is_zero());
    }
}

TEST_CASE("telescoping identity") {
    FieldCtx f2(2, 1);
    for (auto entries : std::vector<std::vector<std::vector<const char*>>>{
             {{"ax"}}, {{"0", "ax"}, {"0", "bx"}}, {{"ax", "bx"}, {"0", "ax"}}, {{"a"}}}) {
        Assumption3Witness wit = make_witness(&f2, entries);
        StarContext sc(wit);
        for (std::size_t m = 1; m <= sc.s() + 3; ++m)
            for (std::size_t n = 0; n <= sc.ydeg() * m; ++n) CHECK(telescope_check(sc, n, m));
    }
}

TEST_CASE("quintuple ordering") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"0", "ax"}, {"0", "bx"}});
    StarContext sc(wit);
    StarPrefix one_minus_e_then_e;
    one_minus_e_then_e.syms = {{SymKind::OneMinusE, 0}, {SymKind::Idem, 0}};
    one_minus_e_then_e.distance = 2;
    StarPrefix just_e;
    just_e.syms = {{SymKind::Idem, 0}};
    just_e.distance = 1;

    // larger distance compares smaller: (1-e, e, I, ...) < (e, I, I, ...)
    CHECK(quintuple_cmp({one_minus_e_then_e, 5, 3, 2, 2}, {just_e, 0, 3, 1, 1}) < 0);
    // same distance: n decides
    CHECK(quintuple_cmp({just_e, 1, 3, 2, 2}, {just_e, 2, 3, 1, 1}) < 0);
    // same distance and n: symbol order E_1 < 1-e
    StarPrefix e1_then_e;
    e1_then_e.syms = {{SymKind::RadBasis, 1}, {SymKind::Idem, 0}};
    e1_then_e.distance = 2;
    CHECK(quintuple_cmp({e1_then_e, 0, 3, 1, 1}, {one_minus_e_then_e, 0, 3, 1, 1}) < 0);
    // position lex breaks the final tie
    CHECK(quintuple_cmp({just_e, 0, 3, 1, 1}, {just_e, 0, 3, 1, 2}) < 0);
    CHECK(quintuple_cmp({just_e, 0, 3, 1, 1}, {just_e, 0, 3, 1, 1}) == 0);
    CHECK_THROWS_AS(quintuple_cmp({just_e, 0, 3, 1, 1}, {just_e, 0, 4, 1, 1}), std::invalid_argument);
}

TEST_CASE("BZ sweep on the scalar witness") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"ax"}});
    StarContext sc(wit);
    BZReport rep = compute_bz(sc, 1);
    // entries ax (new, x-direction) and a (new R-direction)
    CHECK(rep.records.size() == 2);
    CHECK(rep.z_count == 1);
    CHECK(rep.r_dim == 1);
    CHECK(rep.b_count == 0);
    SUBCASE("cap below the top nonzero w is rejected") {
        CHECK_THROWS_AS(compute_bz(sc, 2, std::size_t{1}), std::invalid_argument);
    }
}

TEST_CASE("BZ sweep on an R-entry witness") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"a"}});
    StarContext sc(wit);
    BZReport rep = compute_bz(sc, 2);
    CHECK(rep.z_count == 1);  // the single value a^2
    CHECK(rep.r_dim == 1);
}

TEST_CASE("BZ sweep with all star values inside <x>") {
    FieldCtx f2(2, 1);
    // components of axxb + axbx: the x-free skeleton cancels over GF(2)
    Assumption3Witness wit = make_witness(&f2, {{"axxb + axbx"}});
    StarContext sc(wit);
    for (std::size_t m = 1; m <= 2; ++m) {
        BZReport rep = compute_bz(sc, m);
        CHECK(rep.z_count == 0);
        CHECK(rep.r_dim == 0);
    }
}

TEST_CASE("BZ sweep on the triangular radical witness") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"0", "ax"}, {"0", "bx"}});
    StarContext sc(wit);
    for (std::size_t m = 1; m <= 3; ++m) {
        BZReport rep = compute_bz(sc, m);  // cardinality + disjointness asserted inside
        CHECK(rep.z_count == rep.r_dim);
        CHECK(rep.b_count + rep.z_count <= rep.records.size());
    }
}

TEST_CASE("uv split and deletion") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"0", "ax"}, {"0", "bx"}});
    StarContext sc(wit);
    REQUIRE(wit.a_elems[0] == FreePoly(&f2, "bx"));  // a_1 after the change of basis
    SUBCASE("word with the a_1 block lands in V") {
        FreePoly v(&f2, "abxb");  // prefix a, piece bx = a_1, tail b
        UVSplit split = uv_split(sc, v, 1, 1);
        CHECK(split.v_part == v);
        CHECK(split.u_part.is_zero());
        CHECK(apply_deletion(&f2, split) == FreePoly(&f2, "ab"));
    }
    SUBCASE("word with a different block lands in U") {
        FreePoly v(&f2, "aaxb");  // piece ax != a_1
        UVSplit split = uv_split(sc, v, 1, 1);
        CHECK(split.v_part.is_zero());
        CHECK(split.u_part == v);
    }
    SUBCASE("mixed sums split componentwise and reassemble") {
        FreePoly v = FreePoly(&f2, "abxb") + FreePoly(&f2, "aaxb") + FreePoly(&f2, "bbxa");
        UVSplit split = uv_split(sc, v, 1, 1);
        CHECK(split.v_part + split.u_part == v);
        CHECK(apply_deletion(&f2, split) == FreePoly(&f2, "ab") + FreePoly(&f2, "ba"));
    }
    SUBCASE("deletion is linear") {
        FreePoly v1(&f2, "abxb"), v2(&f2, "bbxa");
        UVSplit s1 = uv_split(sc, v1, 1, 1);
        UVSplit s2 = uv_split(sc, v2, 1, 1);
        UVSplit s12 = uv_split(sc, v1 + v2, 1, 1);
        CHECK(apply_deletion(&f2, s12) == apply_deletion(&f2, s1) + apply_deletion(&f2, s2));
    }
    SUBCASE("t = 2 blocks") {
        FreePoly v(&f2, "abxbxa");  // prefix a, pieces bx bx, tail a
        UVSplit split = uv_split(sc, v, 1, 2);
        CHECK(split.v_part == v);
        CHECK(apply_deletion(&f2, split) == FreePoly(&f2, "aa"));
    }
    SUBCASE("non-factorable monomials raise a structured error") {
        // gradation 2 cannot carry a prefix block plus two middle blocks
        CHECK_THROWS_WITH_AS(uv_split(sc, FreePoly(&f2, "ab"), 1, 2), doctest::Contains("ab"),
                             std::invalid_argument);
        CHECK_THROWS_WITH_AS(uv_split(sc, FreePoly(&f2, "xab"), 1, 1), doctest::Contains("xab"),
                             std::invalid_argument);
    }
}

TEST_CASE("naj spot check hypotheses") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"ax"}});
    StarContext sc(wit);
    CHECK_THROWS_AS(naj_spot_check(sc, 4, 1), std::invalid_argument);  // t > s fails
    CHECK_THROWS_AS(naj_spot_check(sc, 3, 2), std::invalid_argument);  // m > t + s fails
    Assumption3Witness rcase = make_witness(&f2, {{"a"}});
    StarContext rsc(rcase);
    CHECK_THROWS_AS(naj_spot_check(rsc, 4, 2), std::invalid_argument);  // needs the <x> case
}

TEST_CASE("naj spot check on the scalar witness") {
    FieldCtx f2(2, 1);
    Assumption3Witness wit = make_witness(&f2, {{"ax"}});
    StarContext sc(wit);
    NajReport rep = naj_spot_check(sc, 4, 2);  // s = 1, t = 2, m = 4
    CHECK(rep.ok());
    CHECK(rep.z_count >= 1);
    CHECK(rep.checked == rep.z_count);
}
