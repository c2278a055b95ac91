#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "lamina/lamination.hpp"
#include "lamina/svg.hpp"
#include "oracles.hpp"

using namespace lamina;

namespace {

Leaf L(long long p1, long long q1, long long p2, long long q2) {
    return Leaf(Angle(p1, q1), Angle(p2, q2));
}

std::vector<Leaf> all_leaves_sorted(const Lamination& lam) {
    auto v = lam.all_leaves();
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("leaf canonical form and length") {
    const Leaf l(Angle(2, 3), Angle(1, 6));
    CHECK(l.a() == Angle(1, 6)); // diameter tie: smaller endpoint first
    CHECK(l.b() == Angle(2, 3));
    CHECK(l.length() == BigRat(1, 2));
    CHECK(l.is_diameter());
    const Leaf m(Angle(5, 6), Angle(1, 12));
    CHECK(m.a() == Angle(5, 6));
    CHECK(m.length() == BigRat(1, 4));
    CHECK_THROWS_AS(Leaf(Angle(1, 3), Angle(1, 3)), usage_error);
}

TEST_CASE("leaves_cross") {
    CHECK_FALSE(leaves_cross(L(1, 7, 2, 7), L(3, 7, 5, 7)));
    CHECK(leaves_cross(L(0, 1, 1, 2), L(1, 4, 3, 4)));
    CHECK_FALSE(leaves_cross(L(1, 3, 2, 3), L(2, 3, 5, 6)));
    CHECK(leaves_cross(L(1, 12, 1, 3), L(1, 6, 2, 3))); // separated endpoints
}

TEST_CASE("forward_leaf") {
    CHECK(forward_leaf(L(1, 6, 1, 3), 2) == L(1, 3, 2, 3));
    CHECK_FALSE(forward_leaf(L(1, 4, 3, 4), 2).has_value()); // critical chord
    CHECK(forward_leaf(L(1, 9, 2, 9), 3) == L(1, 3, 2, 3));
}

TEST_CASE("pullback_leaf picks the unique valid pairing") {
    // the rejected alternative {1/6,5/6} + {1/3,2/3} duplicates the context leaf
    const std::set<Leaf> ctx{L(1, 3, 2, 3)};
    const auto got = pullback_leaf(L(1, 3, 2, 3), 2, ctx);
    const std::set<Leaf> want{L(1, 6, 1, 3), L(2, 3, 5, 6)};
    CHECK(std::set<Leaf>(got.begin(), got.end()) == want);

    const auto valid = oracle::all_valid_pairings(L(1, 3, 2, 3), 2, ctx);
    REQUIRE(valid.size() == 1);
    CHECK(std::set<Leaf>(valid[0].begin(), valid[0].end()) == want);
}

TEST_CASE("pullback_leaf reports genuine ambiguity") {
    // both adjacent pairings are consistent with an empty context
    CHECK_THROWS_AS(pullback_leaf(L(0, 1, 1, 3), 2, {}), ambiguous_pullback);
    // {3/7,4/7} against itself: the side-by-side and the nested pairing both work
    const std::set<Leaf> ctx{L(3, 7, 4, 7)};
    CHECK(oracle::all_valid_pairings(L(3, 7, 4, 7), 2, ctx).size() == 2);
    CHECK_THROWS_AS(pullback_leaf(L(3, 7, 4, 7), 2, ctx), ambiguous_pullback);
}

TEST_CASE("pullback_leaf output maps forward onto its input") {
    const std::set<Leaf> ctx{L(6, 7, 1, 7)};
    const auto got = pullback_leaf(L(6, 7, 1, 7), 2, ctx);
    REQUIRE(got.size() == 2);
    for (const Leaf& c : got) CHECK(forward_leaf(c, 2) == L(6, 7, 1, 7));

    // with the whole period-3 cycle as context the only matching pairing
    // would duplicate {3/7,4/7}, so no admissible pairing remains
    const std::set<Leaf> cycle{L(3, 7, 4, 7), L(6, 7, 1, 7), L(5, 7, 2, 7)};
    CHECK_THROWS_AS(pullback_leaf(L(6, 7, 1, 7), 2, cycle), invariant_violation);
}

TEST_CASE("quadratic pullback: basilica small generations") {
    const auto lam = build_quadratic_lamination(Angle(1, 3), 2);
    REQUIRE(lam.generations.size() == 3);
    CHECK(lam.generations[0] == std::vector<Leaf>{L(1, 6, 2, 3)});
    CHECK(std::set<Leaf>(lam.generations[1].begin(), lam.generations[1].end()) ==
          std::set<Leaf>{L(1, 3, 7, 12), L(5, 6, 1, 12)});
    CHECK(std::set<Leaf>(lam.generations[2].begin(), lam.generations[2].end()) ==
          std::set<Leaf>{L(7, 24, 2, 3), L(19, 24, 1, 6), L(5, 12, 13, 24), L(11, 12, 1, 24)});
    CHECK(lam.critical_chord == L(1, 6, 2, 3));
}

TEST_CASE("quadratic pullback rejects theta = 0") {
    CHECK_THROWS_AS(build_quadratic_lamination(Angle(), 3), usage_error);
}

TEST_CASE("chebyshev angle seeds the diameter") {
    const auto lam = build_quadratic_lamination(Angle(1, 2), 0);
    REQUIRE(lam.generations.size() == 1);
    CHECK(lam.generations[0] == std::vector<Leaf>{L(1, 4, 3, 4)});
}

TEST_CASE("airplane generation counts double") {
    const auto lam = build_quadratic_lamination(Angle(3, 7), 2);
    CHECK(lam.generations[2].size() == 4);
}

TEST_CASE("basilica depth 6 has 127 leaves") {
    const auto lam = build_quadratic_lamination(Angle(1, 3), 6);
    CHECK(lam.leaf_count() == 127);
}

TEST_CASE("pullback laminations never cross, parents match, lengths halve or flip") {
    for (const Angle& theta : {Angle(1, 3), Angle(3, 7), Angle(1, 2), Angle(1, 6)}) {
        const auto lam = build_quadratic_lamination(theta, 8);
        const auto leaves = all_leaves_sorted(lam);
        for (size_t i = 0; i < leaves.size(); ++i)
            for (size_t j = i + 1; j < leaves.size(); ++j)
                REQUIRE_FALSE(leaves_cross(leaves[i], leaves[j]));
        for (const auto& [child, par] : lam.parent) {
            CHECK(forward_leaf(child, 2) == par);
            const BigRat pl = par.length(), cl = child.length();
            CHECK((cl == pl / 2 || cl == (1 - pl) / 2));
        }
    }
}

TEST_CASE("chebyshev lamination generations and symmetry") {
    const auto lam = chebyshev_lamination(2, 3);
    CHECK(lam.generations[0] == std::vector<Leaf>{L(1, 3, 2, 3)});
    CHECK(lam.generations[1] == std::vector<Leaf>{L(5, 6, 1, 6)});
    CHECK(lam.generations[2].size() == 2);
    for (const auto& g : lam.generations)
        for (const Leaf& l : g) CHECK(Angle(l.a().value() + l.b().value()) == Angle());
}

TEST_CASE("chebyshev lamination at degree 3") {
    const auto lam = chebyshev_lamination(3, 4);
    CHECK(lam.generations[0] == std::vector<Leaf>{L(1, 4, 3, 4)});
    for (const auto& g : lam.generations)
        for (const Leaf& l : g) {
            CHECK(Angle(l.a().value() + l.b().value()) == Angle());
            if (lam.parent.count(l)) CHECK(forward_leaf(l, 3) == lam.parent.at(l));
        }
}

TEST_CASE("symmetric model prunes by the minor gap") {
    const auto basilica = real_pair_lamination(Angle(1, 3), 18);
    for (const auto& g : basilica.generations) CHECK(g.size() == 1);

    const auto airplane = real_pair_lamination(Angle(3, 7), 12);
    std::vector<size_t> sizes;
    for (const auto& g : airplane.generations) sizes.push_back(g.size());
    CHECK(sizes == std::vector<size_t>{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233});

    CHECK_THROWS_AS(real_pair_lamination(Angle(1, 5), 3), usage_error);
}

TEST_CASE("un-nested triples") {
    CHECK_FALSE(find_unnested_triple(chebyshev_lamination(2, 4)));

    const auto airplane = build_quadratic_lamination(Angle(3, 7), 4);
    const auto t = find_unnested_triple(airplane);
    REQUIRE(t);
    CHECK(arcs_disjoint(t->a, t->b));
    CHECK(arcs_disjoint(t->a, t->c));
    CHECK(arcs_disjoint(t->b, t->c));
    // no triple among generations 0..3 alone; the first shows up at depth 4
    CHECK_FALSE(find_unnested_triple(build_quadratic_lamination(Angle(3, 7), 3)));

    // six endpoints interleave as a a' b b' c c' and each longer arc holds the rest
    std::vector<Leaf> tri{t->a, t->b, t->c};
    std::sort(tri.begin(), tri.end());
    for (const Leaf& x : tri)
        for (const Leaf& y : tri) {
            if (x == y) continue;
            CHECK(x.longer_arc().contains(y.a()));
            CHECK(x.longer_arc().contains(y.b()));
        }
}

TEST_CASE("basilica pullback has an un-nested triple by depth 3") {
    const auto lam = build_quadratic_lamination(Angle(1, 3), 3);
    CHECK(find_unnested_triple(lam).has_value());
}

TEST_CASE("builder children agree with pullback_leaf where it is unambiguous") {
    const auto lam = build_quadratic_lamination(Angle(1, 3), 5);
    const auto all = lam.all_leaves();
    const std::set<Leaf> context(all.begin(), all.end());
    size_t agreed = 0, ambiguous = 0;
    for (size_t g = 0; g + 1 < lam.generations.size(); ++g) {
        for (const Leaf& l : lam.generations[g]) {
            std::set<Leaf> built;
            if (auto it = lam.children.find(l); it != lam.children.end())
                built.insert(it->second.begin(), it->second.end());
            std::set<Leaf> ctx = context;
            for (const Leaf& c : built) ctx.erase(c);
            try {
                const auto got = pullback_leaf(l, 2, ctx);
                CHECK(std::set<Leaf>(got.begin(), got.end()) == built);
                ++agreed;
            } catch (const ambiguous_pullback&) {
                ++ambiguous; // theta-endpoint leaves; the builder picks the wide side
            }
        }
    }
    CHECK(agreed > 0);
    CHECK(agreed > ambiguous);
}

TEST_CASE("trichotomy classification") {
    Lamination empty;
    CHECK(classify_trichotomy(empty) == Trichotomy::NoBiaccess);
    CHECK(classify_trichotomy(chebyshev_lamination(2, 4)) == Trichotomy::Interval);
    CHECK(classify_trichotomy(build_quadratic_lamination(Angle(3, 7), 6)) ==
          Trichotomy::ThreeEndpoints);
    // a single-leaf system certifies nothing
    const auto shallow = build_quadratic_lamination(Angle(3, 7), 0);
    CHECK(classify_trichotomy(shallow) == Trichotomy::Inconclusive);
}

TEST_CASE("mixed symmetries are not an interval certificate") {
    Lamination lam;
    lam.degree = 2;
    lam.add(L(1, 4, 3, 4), 0, nullptr); // symmetric about t -> -t
    lam.add(L(1, 8, 1, 2), 1, nullptr); // breaks it
    CHECK(classify_trichotomy(lam) == Trichotomy::Inconclusive);
}

TEST_CASE("j_endpoint_witness chains") {
    const auto lam = build_quadratic_lamination(Angle(1, 3), 4);

    // 0 sits inside the nested arcs of {5/6,1/12}, {11/12,1/24}, ...
    const auto at_zero = j_endpoint_witness(Angle(), lam);
    REQUIRE(at_zero.size() == 4);
    CHECK(at_zero.front() == L(5, 6, 1, 12));
    for (size_t i = 1; i < at_zero.size(); ++i)
        CHECK(at_zero[i].length() < at_zero[i - 1].length());

    const auto at_quarter = j_endpoint_witness(Angle(1, 4), lam);
    CHECK(at_quarter.size() >= 2);

    // a seed endpoint is never strictly inside its own leaf
    for (const Leaf& l : j_endpoint_witness(Angle(1, 6), lam)) CHECK(l != *lam.critical_chord);
}

TEST_CASE("serialization format") {
    const auto lam = build_quadratic_lamination(Angle(1, 3), 1);
    std::ostringstream os;
    serialize(lam, os);
    CHECK(os.str() == "1/6 2/3 gen=0\n1/3 7/12 gen=1\n5/6 1/12 gen=1\n");
}

TEST_CASE("svg output") {
    Lamination empty;
    std::ostringstream os;
    render_svg(empty, os);
    CHECK(os.str().find("<circle") != std::string::npos);
    CHECK(os.str().find("<path d=\"M") == std::string::npos);

    Lamination one;
    one.degree = 2;
    one.add(L(0, 1, 1, 2), 0, nullptr);
    std::ostringstream os2;
    render_svg(one, os2);
    CHECK(os2.str().find("M1.000000 0.000000 L-1.000000 0.000000") != std::string::npos);

    const auto basilica = build_quadratic_lamination(Angle(1, 3), 6);
    std::ostringstream os3;
    render_svg(basilica, os3);
    size_t chords = 0;
    for (size_t pos = 0; (pos = os3.str().find("<path d=\"M", pos)) != std::string::npos; ++pos)
        ++chords;
    CHECK(chords == 127);
}

TEST_CASE("polygon detection finds endpoint-sharing cycles") {
    Lamination lam;
    lam.degree = 2;
    lam.add(L(0, 1, 1, 3), 0, nullptr);
    lam.add(L(1, 3, 2, 3), 0, nullptr);
    lam.add(L(2, 3, 0, 1), 0, nullptr);
    lam.add(L(1, 5, 1, 4), 1, nullptr); // a lone chord, no polygon
    const auto polys = polygon_components(lam);
    REQUIRE(polys.size() == 1);
    CHECK(polys[0] == std::vector<Angle>{Angle(), Angle(1, 3), Angle(2, 3)});
}
