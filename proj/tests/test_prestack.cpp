#include "stackcoh/cohomology.hpp"

#include "generators.hpp"
#include "oracles.hpp"
#include "space_generators.hpp"

#include <catch_amalgamated.hpp>

using namespace stackcoh;

namespace {

Pic2Group zz() { return discrete(FgAbGroup::free(1)); }
Pic2Group k_z4() { return mk_K(GroupHom(FgAbGroup::free(1), FgAbGroup::free(1), Matrix{{4}})); }

Open open_of(const FiniteSpace& x, std::initializer_list<std::size_t> pts) {
    Open u = 0;
    for (auto p : pts) u |= Open(1) << p;
    REQUIRE(x.is_open(u));
    return u;
}

/// Projection A + B -> B with the inclusion of A.
PrestackExtension split(const FiniteSpace& x, const Pic2Group& a, const Pic2Group& b) {
    Pic2Group ab = product({a, b});
    const std::size_t a0 = a.c0().ngens(), a1 = a.c1().ngens();
    Matrix i0(ab.c0().ngens(), a0), i1(ab.c1().ngens(), a1);
    i0.set_block(0, 0, Matrix::identity(a0));
    i1.set_block(0, 0, Matrix::identity(a1));
    Matrix p0(b.c0().ngens(), ab.c0().ngens()), p1(b.c1().ngens(), ab.c1().ngens());
    p0.set_block(0, a0, Matrix::identity(b.c0().ngens()));
    p1.set_block(0, a1, Matrix::identity(b.c1().ngens()));
    StrictMor i(a, ab, i1, i0), p(ab, b, p1, p0);
    Matrix zero(b.c1().ngens(), a0);
    return {constant_mor(x, i), constant_mor(x, p), [zero](Open) { return zero; }};
}

/// Ker(p) -> B -> C for p the cokernel projection of a random morphism into B.
std::optional<PrestackExtension> generated(std::mt19937& rng, const FiniteSpace& x) {
    Pic2Group d = gen::random_pic(rng), b = gen::random_pic(rng);
    auto g = gen::random_mor(rng, d, b);
    if (!g) return std::nullopt;
    CokernelData c = cokernel(*g);
    KernelData k = kernel(c.projection);
    Matrix kappa = k.kappa.matrix();
    return PrestackExtension{constant_mor(x, k.inclusion), constant_mor(x, c.projection),
                             [kappa](Open) { return kappa; }};
}

}  // namespace

TEST_CASE("constructors") {
    FiniteSpace s = pseudocircle();
    Prestack c = constant(s, mk_phi());
    CHECK(same_invariants(c.value(s.whole()), mk_phi()));
    CHECK(c.value(0).c0().ngens() == 0);
    CHECK_THROWS_AS(c.value(Open(1) << 2), ValidationError);

    Prestack e = elementary(s, std::vector<Pic2Group>(4, mk_phi()));
    CHECK(e.value(s.whole()).pi0().str() == "Z^4");
    CHECK(e.value(open_of(s, {0, 1})).pi1().str() == "Z/2 + Z/2");
    CHECK_THROWS_AS(elementary(s, {mk_phi()}), ValidationError);

    Prestack sky = skyscraper(s, 2, mk_phi());
    for (Open u : {open_of(s, {0, 1, 2}), s.whole()}) CHECK(same_invariants(sky.value(u), mk_phi()));
    for (Open u : {open_of(s, {0}), open_of(s, {1}), open_of(s, {0, 1, 3})})
        CHECK(sky.value(u).pi0().is_trivial());
    CHECK_THROWS_AS(skyscraper(s, 9, mk_phi()), ValidationError);

    for (const Prestack& p : {c, e, sky}) CHECK_NOTHROW(p.validate(s.all_opens()));
}

TEST_CASE("explicit tables are validated") {
    FiniteSpace two = discrete_space(2);
    const Open a = 1, b = 2, x = 3;
    Pic2Group z = zz();
    StrictMor id = StrictMor::identity(z), twice(z, z, Matrix(0, 0), Matrix{{2}});
    std::map<Open, Pic2Group> vals{{a, z}, {b, z}, {x, z}};
    std::map<std::pair<Open, Open>, StrictMor> res{{{x, a}, id}, {{x, b}, twice}};
    Prestack p = from_tables(two, vals, res);
    CHECK(p.restriction(x, b).f0().matrix() == Matrix{{2}});
    CHECK(p.restriction(x, x).f0().matrix() == Matrix{{1}});

    auto missing = res;
    missing.erase({x, b});
    CHECK_THROWS_AS(from_tables(two, vals, missing), ValidationError);
    auto wrong = res;
    wrong.erase({x, a});
    wrong.emplace(std::pair<Open, Open>{x, a}, StrictMor::identity(mk_phi()));
    CHECK_THROWS_AS(from_tables(two, vals, wrong), ValidationError);

    // Restrictions must compose: {a,b,c} -> {a,b} -> {a} against {a,b,c} -> {a}.
    FiniteSpace s = pseudocircle();
    std::map<Open, Pic2Group> sv;
    std::map<std::pair<Open, Open>, StrictMor> sr;
    std::vector<Open> opens;
    for (Open u : s.all_opens())
        if (u) {
            sv.emplace(u, z);
            opens.push_back(u);
        }
    for (Open v : opens)
        for (Open u : opens)
            if (u != v && subset(u, v)) sr.emplace(std::pair<Open, Open>{v, u}, id);
    CHECK_NOTHROW(from_tables(s, sv, sr));
    sr.at({open_of(s, {0, 1, 2}), open_of(s, {0})}) = twice;
    CHECK_THROWS_AS(from_tables(s, sv, sr), ValidationError);
}

TEST_CASE("stalks and pi presheaves") {
    FiniteSpace s = pseudocircle();
    Prestack c = constant(s, mk_phi());
    for (std::size_t x = 0; x < s.size(); ++x) CHECK(same_invariants(c.stalk(x), mk_phi()));
    Presheaf p0 = pi_presheaf(c, 0), p1 = pi_presheaf(c, -1);
    CHECK(p0.value(s.whole()).str() == "Z");
    CHECK(p1.value(s.whole()).str() == "Z/2");
    CHECK_THROWS_AS(pi_presheaf(c, 1), ValidationError);

    Prestack sky = skyscraper(s, 2, k_z4());
    CHECK(sky.stalk(2).pi0().str() == "Z/4");
    CHECK(sky.stalk(3).pi0().is_trivial());
}

TEST_CASE("sheafification of pi presheaves") {
    FiniteSpace two = discrete_space(2);
    Presheaf f = pi_presheaf(constant(two, zz()), 0);
    CHECK(f.value(two.whole()).str() == "Z");
    CHECK(sheafify_presheaf(f).value(two.whole()).str() == "Z^2");

    FiniteSpace s = pseudocircle();
    Presheaf pi0 = sheafify_presheaf(pi_presheaf(constant(s, mk_phi()), 0));
    for (Open u : s.all_opens())
        if (u) CHECK(pi0.value(u).str() == (u == open_of(s, {0, 1}) ? "Z^2" : "Z"));
    CohomologyResult h = cohomology(pi0.as_prestack(), Mode::berishvili, 1);
    CHECK(h.at(0).tu.str() == "Z");
    CHECK(h.at(1).tu.str() == "Z");

    // (Pi^i P)_x = pi^i(P_x) on random posets.
    std::mt19937 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        FiniteSpace x = gen::random_space(rng, 5);
        std::vector<Pic2Group> fam;
        for (std::size_t p = 0; p < x.size(); ++p) fam.push_back(gen::random_pic(rng));
        Prestack e = elementary(x, fam);
        Prestack g = global_only(constant(x, fam[0]));
        for (const Prestack& p : {e, g})
            for (int i : {0, -1}) {
                Presheaf sh = sheafify_presheaf(pi_presheaf(p, i));
                for (std::size_t pt = 0; pt < x.size(); ++pt) {
                    FgAbGroup direct = i == 0 ? p.stalk(pt).pi0() : p.stalk(pt).pi1();
                    CHECK(sh.stalk(pt).isomorphic(direct));
                }
            }
    }
}

TEST_CASE("stack condition and stackification") {
    FiniteSpace pt = point_space();
    CHECK(stack_check(constant(pt, mk_phi())).holds);

    FiniteSpace two = discrete_space(2);
    Prestack c = constant(two, mk_phi());
    CHECK(separated_check(c).holds == false);
    DescentReport r = stack_check(c);
    CHECK_FALSE(r.holds);
    CHECK_FALSE(r.witness.empty());
    Prestack s = stackify(c);
    CHECK(same_invariants(s.value(two.whole()), product({mk_phi(), mk_phi()})));

    FiniteSpace ps = pseudocircle();
    CHECK(stack_check(elementary(ps, std::vector<Pic2Group>(4, mk_phi()))).holds);

    std::mt19937 rng(31);
    FiniteSpace x = gen::random_space(rng, 5);
    std::vector<Pic2Group> fam;
    for (std::size_t p = 0; p < x.size(); ++p) fam.push_back(gen::random_pic(rng));
    Prestack e = elementary(x, fam);
    CHECK(stack_check(e).holds);

    // Stalks keep their invariants; on stacks pi^-1 is already a sheaf.
    for (const Prestack& p : {constant(ps, mk_phi()), skyscraper(ps, 3, k_z4()), global_only(constant(ps, mk_phi()))}) {
        Prestack st = stackify(p);
        for (std::size_t q = 0; q < ps.size(); ++q) CHECK(same_invariants(st.stalk(q), p.stalk(q)));
        Presheaf l = pi_presheaf(st, -1), ls = sheafify_presheaf(l);
        for (Open u : ps.all_opens())
            if (u) CHECK(l.value(u).isomorphic(ls.value(u)));
    }
}

TEST_CASE("weak equivalences") {
    FiniteSpace s = pseudocircle();
    Prestack e = elementary(s, std::vector<Pic2Group>(4, mk_phi()));
    CHECK(weak_equiv_check(plus_unit(e)).holds);
    CHECK(weak_equiv_check(constant_mor(s, StrictMor::identity(k_z4()))).holds);

    DescentReport twice = weak_equiv_check(constant_mor(s, phi_multiply(2)));
    CHECK_FALSE(twice.holds);
    CHECK_FALSE(twice.witness.empty());

    // Not separated: the unit is not injective on automorphisms.
    FiniteSpace two = discrete_space(2);
    CHECK_FALSE(weak_equiv_check(plus_unit(constant(two, mk_phi()))).holds);
    // Global sections with zero stalks are not separated.
    CHECK_FALSE(separated_check(global_only(constant(two, zz()))).holds);
}

TEST_CASE("extensions of prestacks") {
    FiniteSpace s = pseudocircle();
    PrestackExtension sp = split(s, mk_phi(), k_z4());
    CHECK(extension_check(sp.i, sp.p, sp.alpha, ExtensionLevel::prestack));
    CHECK(extension_check(sp.i, sp.p, sp.alpha, ExtensionLevel::stack));

    std::mt19937 rng(37);
    int built = 0;
    while (built < 5) {
        auto e = generated(rng, s);
        if (!e) continue;
        ++built;
        CHECK(extension_check(e->i, e->p, e->alpha, ExtensionLevel::prestack));
        CHECK(extension_check(e->i, e->p, e->alpha, ExtensionLevel::stack));
    }

    // Z --2--> Z --> Z/2 is fine; Z --id--> Z --2--> Z is not (p not cofaithful).
    Pic2Group z = zz();
    StrictMor two(z, z, Matrix(0, 0), Matrix{{2}});
    PrestackMor id = constant_mor(s, StrictMor::identity(z)), by2 = constant_mor(s, two);
    auto zero = [](Open) { return Matrix(0, 1); };
    CHECK_FALSE(extension_check(id, by2, zero, ExtensionLevel::prestack));
    CHECK_FALSE(extension_check(id, by2, zero, ExtensionLevel::stack));
}

TEST_CASE("long TU sequences of prestack extensions are exact") {
    FiniteSpace s = pseudocircle();
    ExtensionLes les = space_extension_les(split(s, mk_phi(), zz()), Mode::berishvili, 1);
    INFO(les.sequence.str());
    CHECK(les.verdict());
    for (const auto& d : les.connecting) CHECK(d.is_zero());

    std::mt19937 rng(41);
    FiniteSpace two = discrete_space(2);
    int built = 0;
    while (built < 6) {
        const bool cech = built % 2 == 1;
        auto e = generated(rng, cech ? two : s);
        if (!e) continue;
        ++built;
        ExtensionLes l = space_extension_les(*e, cech ? Mode::cech : Mode::berishvili, 1);
        INFO(l.sequence.str());
        CHECK(l.verdict());
    }
}

TEST_CASE("cohomology with prestack coefficients") {
    auto tri = triangle_boundary();
    FacePoset fp = face_poset(tri);
    PipelineOptions opt;
    opt.cech_cover = star_cover(tri, fp);
    CohomologyResult h = cohomology(constant(fp.space, mk_phi()), Mode::cech, 1, true, opt);
    CHECK(h.table() == "H^0_U = Z + Z/2; H^1_U = Z");
    REQUIRE(h.at(1).secondary);
    CHECK(h.at(1).secondary->pi1().str() == h.at(0).tu.str());
    CHECK(h.at(1).secondary->pi0().str() == h.at(1).tu.str());

    FiniteSpace s = pseudocircle();
    CohomologyResult e = cohomology(elementary(s, std::vector<Pic2Group>(4, mk_phi())), Mode::berishvili, 2);
    CHECK(e.table() == "H^0_U = Z^4; H^1_U = 0; H^2_U = 0");
    CHECK_THROWS_AS(cohomology(constant(s, zz()), Mode::cech, -1), ValidationError);
    CHECK_THROWS_AS(parse_mode("sheaf"), ValidationError);
}

TEST_CASE("Cech and Berishvili differ on the pseudocircle") {
    FiniteSpace s = pseudocircle();
    CompareReport r = compare(constant(s, zz()), 1);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].equal());
    CHECK(r.rows[1].cech == "0");
    CHECK(r.rows[1].berishvili == "Z");
    CHECK_FALSE(r.agree());
    CHECK(r.direction == "cech -> berishvili");

    auto tri = triangle_boundary();
    FacePoset fp = face_poset(tri);
    CHECK(compare(constant(fp.space, zz()), 1).agree());
}

TEST_CASE("space TU sequences") {
    auto tri = triangle_boundary();
    FacePoset fp = face_poset(tri);
    PipelineOptions opt;
    opt.cech_cover = star_cover(tri, fp);
    SpaceTuSequence t = space_tu_sequence(constant(fp.space, mk_phi()), Mode::cech, 1, opt);
    INFO(t.sequence.str());
    CHECK(t.verdict());
    CHECK(t.pi_groups_match);

    FiniteSpace s = pseudocircle();
    for (const Prestack& p : {constant(s, mk_phi()), skyscraper(s, 2, k_z4())}) {
        SpaceTuSequence u = space_tu_sequence(p, Mode::berishvili, 1);
        INFO(u.sequence.str());
        CHECK(u.verdict());
    }
}

TEST_CASE("verification suite") {
    FiniteSpace s = pseudocircle();
    FiniteSpace two = discrete_space(2);
    for (const Prestack& p : {constant(s, mk_phi()), constant(two, mk_phi()), skyscraper(s, 0, k_z4())}) {
        SuiteReport r = verification_suite(p, 1);
        INFO(r.str());
        CHECK(r.passed());
        CHECK(r.items.size() == 4);
    }

    ContractionReport c = elementary_contraction_check(s, {mk_phi(), k_z4(), zz(), mk_phi()}, 2);
    CHECK(c.holds);

    // Zero stalks, nonzero global sections: the refinement kills the cocycle.
    Prestack g = global_only(constant(s, zz()));
    BerishviliCover alpha = berishvili_from_special(s, whole_cover(s), 3);
    SpaceComplex sc{berishvili_diagram_data(alpha, g, 2), to_complex(berishvili_diagram(alpha, g, 2))};
    Cone cone(sc.complex);
    Vec v(cone.group(0).ngens());
    for (std::size_t k = 0; k < sc.diagram.levels[0].tuples.size(); ++k) v[sc.diagram.off0[0][k]] = 1;
    KillReport kr = refinement_kill(g, alpha, 0, v);
    CHECK(kr.refines);
    CHECK(kr.cocycle);
    CHECK(kr.nonzero);
    CHECK(kr.killed);
    CHECK_THROWS_AS(refinement_kill(constant(s, zz()), alpha, 0, v), ValidationError);
}
