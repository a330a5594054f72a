#include "doctest.h"

#include <random>

#include "shgh/lattice.hpp"
#include "shgh/notation.hpp"

using namespace shgh;

namespace {

// Reference pairing on plain vectors: diag(1, -1, ..., -1).
long ref_pair(const std::vector<long>& a, const std::vector<long>& b) {
    long s = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s -= a[i] * b[i];
    return s;
}

std::vector<long> as_vec(const DivisorClass& c, const Configuration& cfg) {
    std::vector<long> v{static_cast<long>(c.degree)};
    for (const auto& p : cfg.points()) v.push_back(static_cast<long>(c.mult(p.label)));
    return v;
}

// All (delta; c) with c_i in [0, delta] and the two quadratic constraints, by
// exhaustive box search.
std::size_t brute_count(std::size_t k, int bound, int target) {
    std::size_t n = target == -1 ? k : k * (k - 1);
    for (int d = 1; d <= bound; ++d) {
        std::vector<int> c(k, 0);
        for (;;) {
            long s = 0, q = 0;
            for (int x : c) s += x, q += x * x;
            if (static_cast<long>(d) * d - q == target && -3L * d + s == -2 - target) ++n;
            std::size_t i = 0;
            while (i < k && c[i] == d) c[i++] = 0;
            if (i == k) break;
            ++c[i];
        }
    }
    return n;
}

}  // namespace

TEST_CASE("pairing examples") {
    auto a = parse_system("3; 1^9");
    CHECK(pair(a.cls, a.cls, a.cfg) == 0);

    auto l = parse_system("1; 1, 1");
    auto q = parse_system("2; 2, 2");
    CHECK(pair(l.cls, q.cls, l.cfg) == ref_pair(as_vec(l.cls, l.cfg), as_vec(q.cls, l.cfg)));
    CHECK(pair(l.cls, q.cls, l.cfg) == -2);

    auto h = homogeneous(7, 0, 4);
    auto e = homogeneous(0, 3, 4);
    CHECK(pair(h.cls, e.cls, h.cfg) == 0);
}

TEST_CASE("unknown label is a configuration mismatch") {
    auto a = parse_system("3; 1^2");
    DivisorClass b(1, {{"zz", Int(1)}});
    CHECK_THROWS_AS(pair(a.cls, b, a.cfg), ConfigurationMismatch);
}

TEST_CASE("canonical class") {
    Configuration empty;
    auto k0 = canonical_class(empty);
    CHECK(k0.degree == -3);
    CHECK(k0.mults.empty());

    auto cfg = Configuration::free_points(10);
    auto k = canonical_class(cfg);
    CHECK(k.degree == -3);
    for (const auto& [l, m] : k.mults) CHECK(m == -1);

    auto s = homogeneous(11, 4, 10);
    CHECK(pair(s.cls, k, s.cfg) == -3 * 11 + 10 * 4);
}

TEST_CASE("virtual and expected dimension") {
    CHECK(virtual_dim(homogeneous(174, 55, 10).cls) == -1);
    CHECK(virtual_dim(DivisorClass(7)) == 7 * 10 / 2);
    CHECK(virtual_dim(homogeneous(4, 2, 5).cls) == 14 - 15);
    CHECK(expected_dim(homogeneous(2, 2, 2).cls) == -1);
    CHECK(expected_dim(homogeneous(19, 6, 10).cls) == -1);
    CHECK(virtual_dim(homogeneous(19, 6, 10).cls) == 209 - 210);
    CHECK(expected_dim(DivisorClass(6)) == 27);
    CHECK(expected_dim(homogeneous(4, 2, 6).cls) == -1);
}

TEST_CASE("enumeration: two points, lines and exceptionals") {
    auto cfg = Configuration::free_points(2);
    auto rep = enumerate_negative_classes(cfg, DivisorClass(0), 1, -1);
    auto has = [&](const DivisorClass& c) {
        for (const auto& x : rep.classes)
            if (x.cls == c) return true;
        return false;
    };
    CHECK(has(parse_system("1; 1, 1").cls));
    CHECK(has(DivisorClass::exceptional("p1")));
    CHECK(has(DivisorClass::exceptional("p2")));
    CHECK(rep.classes.size() == 3);
    CHECK_FALSE(rep.complete);
    auto rep2 = enumerate_negative_classes(cfg, DivisorClass(0), 1, -1, "k<=8 exhaustive");
    CHECK(rep2.complete);
}

TEST_CASE("enumeration: the cubic on seven points") {
    auto s = parse_system("10; 4, 3^6");
    auto rep = enumerate_negative_classes(s.cfg, s.cls, 3, -1);
    bool found = false;
    for (const auto& c : rep.classes)
        if (c.cls == parse_system("3; 2, 1^6").cls) {
            found = true;
            CHECK(c.pairing == 30 - 8 - 18);
        }
    CHECK(found);
    for (std::size_t i = 1; i < rep.classes.size(); ++i)
        CHECK(rep.classes[i - 1].pairing <= rep.classes[i].pairing);
}

TEST_CASE("enumeration: G classes of a compound point") {
    auto s = parse_system("8; 2^4, [3,2]^2");
    auto rep = enumerate_negative_classes(s.cfg, s.cls, 0, -2);
    auto g1 = DivisorClass::exceptional("p5") - DivisorClass::exceptional("p5'");
    auto g2 = DivisorClass::exceptional("p6") - DivisorClass::exceptional("p6'");
    int hits = 0;
    for (const auto& c : rep.classes) {
        if (c.cls == g1 || c.cls == g2) ++hits;
        CHECK(self_int(c.cls) == -2);
    }
    CHECK(hits == 2);
}

TEST_CASE("enumeration matches exhaustive box search") {
    for (std::size_t k : {1u, 3u, 5u, 7u})
        for (int target : {-1, -2}) {
            auto cfg = Configuration::free_points(k);
            auto rep = enumerate_negative_classes(cfg, DivisorClass(0), 4, target);
            CHECK(rep.classes.size() == brute_count(k, 4, target));
            auto K = canonical_class(cfg);
            for (const auto& c : rep.classes) {
                CHECK(self_int(c.cls) == target);
                CHECK(pair(c.cls, K) == -2 - target);
            }
        }
}

TEST_CASE("bounded nefness") {
    auto z = parse_system("34; 20, 10^6");  // 3d - 10m = 2
    CHECK(is_nef_bounded(z.cls, z.cfg, 5).nef);
    auto q = parse_system("2; 2^2");
    auto v = is_nef_bounded(q.cls, q.cfg, 5);
    CHECK_FALSE(v.nef);
    REQUIRE(v.witness);
    CHECK(v.witness->cls == parse_system("1; 1, 1").cls);
    CHECK(v.witness->pairing == -2);
    auto zero = homogeneous(0, 0, 6);
    CHECK(is_nef_bounded(zero.cls, zero.cfg, 5).nef);
    auto bad = parse_system("33; 20, 10^6");  // 3d - 10m = -1
    CHECK_FALSE(is_nef_bounded(bad.cls, bad.cfg, 5).nef);
}

TEST_CASE("notation round trip") {
    for (const char* t : {"174; 55^10", "2; 2^2", "24; 11^4, [4,4]^2", "5", "3; -1, 2, [3,1]", "7; [2,1,1]^2, 0"}) {
        auto s = parse_system(t);
        CHECK(render_system(s) == t);
        auto s2 = parse_system(render_system(s));
        CHECK(s2.cls == s.cls);
        CHECK(s2.cfg == s.cfg);
    }
    CHECK(render_system(parse_system("L( 10 ; 3 ,3, 3 )")) == "10; 3^3");
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_system("10; 3, x");
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.pos == 7);
    }
    CHECK_THROWS_AS(parse_system("10; [3]"), ParseError);
    CHECK_THROWS_AS(parse_system("10; 3^0"), ParseError);
    CHECK_THROWS_AS(parse_system("; 3"), ParseError);
}

TEST_CASE("json round trip") {
    auto s = parse_system("24; 11^4, [4,4]^2");
    s.cls.degree = Int("123456789012345678901234567890");
    auto j = to_json(s.cls, s.cfg);
    CHECK(j["degree"].is_string());
    auto back = system_from_json(j);
    CHECK(back.cls == s.cls);
    CHECK(back.cfg == s.cfg);
}
