#include "doctest.h"

#include <filesystem>
#include <random>
#include <unistd.h>

#include "shgh/cremona.hpp"
#include "shgh/degeneration.hpp"
#include "shgh/notation.hpp"
#include "shgh/oracle.hpp"

using namespace shgh;

namespace {

std::mt19937_64& rng() {
    static std::mt19937_64 r(424242);
    return r;
}

int uni(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

Configuration random_config() {
    Configuration c;
    int n = uni(3, 9);
    for (int i = 0; i < n; ++i) {
        std::string l = "q" + std::to_string(i);
        auto labels = c.labels();
        if (!labels.empty() && uni(0, 3) == 0)
            c.add_child(l, labels[uni(0, static_cast<int>(labels.size()) - 1)]);
        else
            c.add_free(l);
    }
    return c;
}

DivisorClass random_class(const Configuration& c, int dmax = 40, int mmax = 15) {
    DivisorClass x(uni(-dmax, dmax));
    for (const auto& l : c.labels()) x.set(l, uni(-mmax, mmax));
    return x;
}

std::vector<std::string> free_labels(const Configuration& c) {
    std::vector<std::string> out;
    for (const auto& p : c.points())
        if (!p.parent) out.push_back(p.label);
    return out;
}

// pairing straight from the definition
Int pair_def(const DivisorClass& a, const DivisorClass& b, const Configuration& c) {
    Int s = a.degree * b.degree;
    for (const auto& l : c.labels()) s -= a.mult(l) * b.mult(l);
    return s;
}

}  // namespace

TEST_CASE("pairing is bilinear and symmetric") {
    for (int i = 0; i < 300; ++i) {
        auto c = random_config();
        auto a = random_class(c), b = random_class(c), d = random_class(c);
        Int t = uni(-9, 9);
        CHECK(pair(a, b, c) == pair(b, a, c));
        CHECK(pair(a + b, d, c) == pair(a, d, c) + pair(b, d, c));
        CHECK(pair(t * a, d, c) == t * pair(a, d, c));
        CHECK(pair(a, b, c) == pair_def(a, b, c));
    }
}

TEST_CASE("virtual dimension is (L^2 - L.K)/2") {
    for (int i = 0; i < 300; ++i) {
        auto c = random_config();
        auto L = random_class(c);
        Int k = pair(L, canonical_class(c), c);
        CHECK(2 * virtual_dim(L) == self_int(L) - k);
        CHECK(expected_dim(L) == std::max(Int(-1), virtual_dim(L)));
    }
}

TEST_CASE("quadratic transforms keep v, L^2, L.K and are involutions") {
    int done = 0;
    while (done < 300) {
        auto c = random_config();
        auto fr = free_labels(c);
        if (fr.size() < 3) continue;
        std::shuffle(fr.begin(), fr.end(), rng());
        Triple t{fr[0], fr[1], fr[2]};
        auto L = random_class(c);
        auto q = quadratic_transform(L, t, c);
        CHECK(virtual_dim(q) == virtual_dim(L));
        CHECK(self_int(q) == self_int(L));
        CHECK(pair(q, canonical_class(c), c) == pair(L, canonical_class(c), c));
        CHECK(quadratic_transform(q, t, c) == L);
        ++done;
    }
}

TEST_CASE("reduction keeps v, L^2, L.K up to the recorded splits") {
    for (int i = 0; i < 150; ++i) {
        int k = uni(3, 9);
        std::vector<Int> ms;
        for (int j = 0; j < k; ++j) ms.push_back(uni(0, 12));
        auto s = make_system(uni(1, 40), ms);
        auto r = reduce_to_standard(s);
        if (r.empty || !r.log.splits().empty()) continue;
        auto K = canonical_class(r.cfg);
        CHECK(virtual_dim(r.result) == virtual_dim(s.cls));
        CHECK(self_int(r.result) == self_int(s.cls));
        CHECK(pair(r.result, K, r.cfg) == pair(s.cls, K, r.cfg));
        CHECK(is_standard(r.result, r.cfg));
    }
}

TEST_CASE("twist inverse and validity after every operation") {
    for (int i = 0; i < 60; ++i) {
        int m = uni(1, 40);
        int d = uni(3 * m, 4 * m);
        int a = uni(0, m);
        Fiber f = build_first(d, m, a);
        CHECK(validate(f).ok);
        for (const char* comp : {"V", "Z"}) {
            Int t = uni(-30, 30);
            Fiber g = twist(f, comp, t);
            CHECK(validate(g).ok);
            Fiber h = twist(g, comp, -t);
            for (const auto& c : f.components) CHECK(h.component(c.name).bundle == c.bundle);
        }
    }
}

TEST_CASE("throw history replays to the general fibre") {
    // every scripted stage carries the Euler count of L(d; m^10) through its throws
    for (int i = 0; i < 60; ++i) {
        int stage = 2 + i % 3;
        int m = uni(1, 120);
        int lo = stage == 2 ? (16 * m + 4) / 5 : stage == 3 ? (19 * m + 5) / 6 : (174 * m + 54) / 55;
        int hi = stage == 2 ? (10 * m + 2) / 3 - 1 : stage == 3 ? (16 * m + 4) / 5 - 1 : 19 * m / 6;
        if (lo > hi) continue;
        int d = uni(lo, hi);
        int e = d % 2, c = d / 2;
        int cap = stage == 2 ? m : 5 * m - 3 * c - e - 1;
        if (cap < 0) continue;
        Fiber f = build_stage(stage, d, m, uni(0, cap));
        auto v = validate(f);
        CHECK(v.ok);
        CHECK(v.chi_central == v.chi_general);
        CHECK(v.chi_general == Int(d + 1) * (d + 2) / 2 - Int(10) * m * (m + 1) / 2);
        for (const auto& cc : v.curves) {
            CHECK(cc.degree_a == cc.degree_b);
            CHECK(cc.tpf == 0);
        }
        std::size_t throws = 0;
        for (const auto& h : f.history) throws += h.kind != "twist";
        CHECK(throws == (stage == 2 ? 1u : stage == 3 ? 3u : (f.params.ell > 0 ? 7u : 3u)));
    }
}

TEST_CASE("oracle dimension is never below the expected one") {
    OracleOptions o;
    o.trials = 1;
    for (int i = 0; i < 60; ++i) {
        int k = uni(1, 12);
        std::vector<Int> ms;
        for (int j = 0; j < k; ++j) ms.push_back(uni(0, 6));
        auto s = make_system(uni(1, 16), ms);
        o.seed = static_cast<std::uint64_t>(uni(1, 1 << 20));
        auto r = generic_dim(s, o);
        CHECK(r.dim >= expected_dim(s.cls));
        CHECK(r.expected == expected_dim(s.cls));
    }
}

TEST_CASE("witness replay is deterministic") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("shgh-prop-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    OracleOptions o;
    o.cache_dir = dir.string();
    for (const char* t : {"12; 4^9", "20; 6^10", "9; [3,2]^2, 2^4"}) {
        auto s = parse_system(t);
        o.use_cache = true;
        auto a = generic_dim(s, o);
        auto b = generic_dim(s, o);
        o.use_cache = false;
        auto c = generic_dim(s, o);
        REQUIRE(a.witnesses.size() == b.witnesses.size());
        REQUIRE(a.witnesses.size() == c.witnesses.size());
        for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
            CHECK(b.witnesses[i].cached);
            CHECK(a.witnesses[i].rank == b.witnesses[i].rank);
            CHECK(a.witnesses[i].rank == c.witnesses[i].rank);
            CHECK(a.witnesses[i].path == b.witnesses[i].path);
        }
        CHECK(a.dim == c.dim);
        CHECK(a.status == c.status);
    }
    fs::remove_all(dir);
}

TEST_CASE("notation and json round trips") {
    for (int i = 0; i < 200; ++i) {
        int k = uni(1, 8);
        std::string t = std::to_string(uni(0, 30)) + ";";
        for (int j = 0; j < k; ++j) {
            t += j ? ", " : " ";
            if (uni(0, 3) == 0)
                t += "[" + std::to_string(uni(0, 9)) + "," + std::to_string(uni(0, 9)) + "]";
            else
                t += std::to_string(uni(0, 9));
        }
        auto s = parse_system(t);
        auto back = parse_system(render_system(s));
        CHECK(back.cls.aligned(back.cfg).degree == s.cls.degree);
        CHECK(virtual_dim(back.cls) == virtual_dim(s.cls));
        auto j = to_json(s.cls, s.cfg);
        auto r = system_from_json(j);
        CHECK(r.cls == s.cls);
        CHECK(r.cfg == s.cfg);
    }
}
