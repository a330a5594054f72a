#include "doctest.h"

#include <random>

#include "shgh/cremona.hpp"
#include "shgh/notation.hpp"

using namespace shgh;

namespace {

LinearSystem sys(const char* t) { return parse_system(t); }

std::string row(long d, const std::vector<long>& m, const std::vector<int>& marked) {
    std::string s = std::to_string(d) + ";";
    for (std::size_t i = 0; i < m.size(); ++i) {
        bool u = std::find(marked.begin(), marked.end(), static_cast<int>(i)) != marked.end();
        s += (i ? ", " : " ") + (u ? "_" + std::to_string(m[i]) + "_" : std::to_string(m[i]));
    }
    return s;
}

// Reference table for L(10α-6a; 6α-3a, (3α-2a)^6), rows written out symbolically.
std::vector<std::string> z2_table(long al, long a) {
    long t = 3 * al - 2 * a, u = al - a;
    return {
        row(10 * al - 6 * a, {6 * al - 3 * a, t, t, t, t, t, t}, {0, 1, 2}),
        row(8 * al - 5 * a, {4 * al - 2 * a, u, u, t, t, t, t}, {0, 3, 4}),
        row(6 * al - 4 * a, {2 * al - a, u, u, u, u, t, t}, {0, 5, 6}),
        row(4 * al - 3 * a, {0, u, u, u, u, u, u}, {}),
    };
}

}  // namespace

TEST_CASE("quadratic transform examples") {
    auto s = sys("5; 3, 2, 2");
    auto t = quadratic_transform(s.cls, {"p1", "p2", "p3"}, s.cfg);
    CHECK(t == sys("3; 1, 0, 0").cls);
    CHECK(virtual_dim(t) == virtual_dim(s.cls));
    CHECK(virtual_dim(t) == 8);

    long al = 9, a = 6;
    auto z = homogeneous(10 * al - 6 * a, 3 * al - 2 * a, 7);
    z.cls.set("p1", 6 * al - 3 * a);
    auto zt = quadratic_transform(z.cls, {"p1", "p2", "p3"}, z.cfg);
    CHECK(zt == sys("42; 24, 3, 3, 15, 15, 15, 15").cls);

    auto f = sys("7; 3, 2, 2, 5");
    auto ft = quadratic_transform(f.cls, {"p1", "p2", "p3"}, f.cfg);
    CHECK(ft.degree == 7);

    CHECK_THROWS_AS(quadratic_transform(s.cls, {"p1", "p1", "p2"}, s.cfg), InvalidTriple);
    CHECK_THROWS_AS(quadratic_transform(s.cls, {"p1", "p2", "q"}, s.cfg), InvalidTriple);
}

TEST_CASE("reduce: Z2 table instance") {
    auto r = reduce_to_standard(sys("54; 36, 15^6"));
    CHECK(r.log.quadratic_steps() == 3);
    CHECK(r.result == sys("18; 0, 3^6").cls);
    CHECK(render_table(r) == z2_table(9, 6));
    CHECK(render_system({r.cfg, r.result}) == "18; 0, 3^6");
}

TEST_CASE("reduce: V3 table instance with compound points") {
    auto r = reduce_to_standard(sys("24; 11^4, [4,4]^2"));
    CHECK(render_system({r.cfg, r.result}) == "7; 2^3, 3, [0,0]^2");
    CHECK(r.log.quadratic_steps() == 3);
    auto rows = render_table(r);
    CHECK(rows[0] == "24; _11_, _11_, _11_, 11, [4, 4], [4, 4]");
    CHECK(rows[1] == "15; 2, 2, 2, _11_, [_4_, 4], [_4_, 4]");
    CHECK(rows[2] == "11; 2, 2, 2, _7_, [0, _4_], [0, _4_]");
    for (const auto& s : r.log.steps)
        if (auto* q = std::get_if<QuadStep>(&s)) {
            bool child = false;
            for (const auto& l : q->triple) child = child || r.cfg.depth(l) > 0;
            CHECK(q->advisory == child);
        }
}

TEST_CASE("reduce: standard input is untouched") {
    auto r = reduce_to_standard(sys("3; 1^9"));
    CHECK(r.log.steps.empty());
    CHECK(r.result == sys("3; 1^9").cls);
    CHECK(render_table(r).size() == 1);
}

TEST_CASE("reduce: padding and splits") {
    auto r = reduce_to_standard(sys("2; 2^2"));
    CHECK_FALSE(r.empty);
    CHECK(r.result == DivisorClass(0));
    auto sp = r.log.splits();
    REQUIRE(sp.size() == 1);
    CHECK(sp[0].times == 2);
    CHECK(sp[0].original == sys("1; 1, 1").cls);
}

TEST_CASE("reduce: empty by negative degree") {
    auto r = reduce_to_standard(sys("1; 2, 2"));
    CHECK(r.empty);
}

TEST_CASE("split fixed curves") {
    auto a = sys("2; 2^2");
    auto sa = split_fixed_neg_curves(a.cls, a.cfg, 5);
    CHECK(sa.residual == homogeneous(0, 0, 2).cls);
    REQUIRE(sa.splits.size() == 1);
    CHECK(sa.splits[0].cls == sys("1; 1, 1").cls);
    CHECK(sa.splits[0].times == 2);

    auto b = sys("4; 2^5");
    auto sb = split_fixed_neg_curves(b.cls, b.cfg, 5);
    CHECK(sb.residual == homogeneous(0, 0, 5).cls);
    REQUIRE(sb.splits.size() == 1);
    CHECK(sb.splits[0].cls == sys("2; 1^5").cls);
    CHECK(sb.splits[0].times == 2);

    auto c = sys("10; 3^5");
    auto sc = split_fixed_neg_curves(c.cls, c.cfg, 5);
    CHECK(sc.residual == c.cls);
    CHECK(sc.splits.empty());
}

TEST_CASE("classify") {
    for (long al = 1; al <= 12; ++al)
        for (long a = 0; a <= al; ++a) {
            if (4 * al - 3 * a == 0) continue;
            auto s = homogeneous(4 * al - 3 * a, al - a, 6);
            CHECK(classify(s.cls, s.cfg).kind == Kind::EXCELLENT);
        }
    CHECK(classify(sys("2; 2^2").cls, sys("2; 2^2").cfg).kind == Kind::MINUS_ONE_SPECIAL);
    for (long m = 1; m <= 4; ++m) {
        auto s = homogeneous(3 * m, m, 9);
        CHECK(classify(s.cls, s.cfg).kind == Kind::ALMOST_EXCELLENT);
    }
    auto e = sys("1; 2, 2");
    CHECK(classify(e.cls, e.cfg).kind == Kind::EMPTY);
    auto st = homogeneous(10, 3, 11);  // standard, 3d - sum < 0
    CHECK(classify(st.cls, st.cfg).kind == Kind::STANDARD);
    auto cr = sys("12; 5^3, 3^8");     // needs one transform, stays above 3d
    CHECK(classify(cr.cls, cr.cfg).kind == Kind::CREMONA_REDUCIBLE);
}

TEST_CASE("shgh_dim examples") {
    auto a = sys("2; 2^2");
    auto ra = shgh_dim(a.cls, a.cfg);
    CHECK(ra.dim == 0);
    CHECK(ra.status == DimStatus::PROVEN);

    auto b = sys("6; 2^9");
    auto rb = shgh_dim(b.cls, b.cfg);
    CHECK(rb.dim == 0);
    CHECK(rb.status == DimStatus::PROVEN);
    CHECK_FALSE(rb.note.empty());

    auto c = sys("174; 55^10");
    auto rc = shgh_dim(c.cls, c.cfg);
    CHECK(rc.dim == -1);
    CHECK(rc.status == DimStatus::CONJECTURAL);

    auto d = sys("24; 11^4, [4,4]^2");
    CHECK(shgh_dim(d.cls, d.cfg).status == DimStatus::CONJECTURAL);
}

TEST_CASE("nagata predicate") {
    CHECK(nagata_empty(homogeneous(9, 3, 10).cls, 10) == NagataVerdict::EMPTY_CONJECTURAL);
    for (long d = 1; d <= 40; ++d)
        for (long m = 1; m <= 12; ++m)
            if (16 * m >= 4 * d) CHECK(nagata_empty(homogeneous(d, m, 16).cls, 16) == NagataVerdict::EMPTY_PROVEN);
    CHECK(nagata_empty(homogeneous(100, 1, 10).cls, 10) == NagataVerdict::NO_PREDICTION);
    CHECK_THROWS_AS(nagata_empty(homogeneous(3, 1, 9).cls, 9), OutOfScope);
    // boundary: (sum m)^2 == d^2 k exactly
    CHECK(nagata_empty(homogeneous(4, 1, 16).cls, 16) == NagataVerdict::EMPTY_PROVEN);
}
