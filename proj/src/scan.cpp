#include "shgh/degeneration.hpp"
#include "degen_internal.hpp"

#include <atomic>
#include <numeric>
#include <thread>

namespace shgh {

using detail::ratio_ge;
using detail::ratio_gt;
using detail::ratio_le;
using detail::ratio_lt;

Ratio Ratio::parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "inf" || t == "oo") return {1, 0};
    auto slash = t.find('/');
    try {
        std::size_t used = 0;
        Ratio r;
        if (slash == std::string::npos) {
            r.num = std::stoll(t, &used);
            if (used != t.size()) throw ParseError("bad ratio '" + text + "'", used);
            r.den = 1;
        } else {
            r.num = std::stoll(t.substr(0, slash), &used);
            if (used != slash) throw ParseError("bad ratio '" + text + "'", used);
            std::string rest = t.substr(slash + 1);
            r.den = std::stoll(rest, &used);
            if (used != rest.size()) throw ParseError("bad ratio '" + text + "'", slash + 1 + used);
        }
        if (r.den <= 0) throw ParseError("ratio denominator must be positive in '" + text + "'", slash);
        if (r.num < 0) throw ParseError("ratio must be non-negative in '" + text + "'", 0);
        long long g = std::gcd(r.num, r.den);
        r.num /= g;
        r.den /= g;
        return r;
    } catch (const std::logic_error&) {
        throw ParseError("bad ratio '" + text + "'", 0);
    }
}

std::string Ratio::str() const {
    if (den == 0) return "inf";
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

// an unbounded upper end is cut here
constexpr long long kInfCap = 4;

std::string tag(const HypothesisReport& r) { return r.lemma + (r.pass ? ":ok" : ":FAIL"); }

bool run_lemmas(ScanRow& row, const std::vector<std::string>& ids, const Int& a) {
    bool ok = true;
    for (const auto& id : ids) {
        auto r = lemma_check(id, row.d, row.m, a);
        row.lemmas.push_back(tag(r));
        ok = ok && r.pass;
    }
    return ok;
}

bool is_exceptional(const Int& d, const Int& m) {
    return (d == 174 && m == 55) || (d == 193 && m == 61) || (d == 348 && m == 110);
}

ScanRow scan_one(long long dl, long long ml) {
    Int d = dl, m = ml;
    ScanRow row;
    row.d = d;
    row.m = m;
    row.expected = expected_dim(homogeneous(d, m, 10).cls);
    try {
        if (ratio_ge(d, m, 10, 3)) {
            row.regime = "ratio>=10/3";
            row.a = Int(0);
            auto rep = matching_dim(build_first(d, m, 0), {Assumption::COMPLETE_RESTRICTION});
            bool ok = rep.value == row.expected && rep.verdict != Verdict::DIM_UPPER_BOUND;
            row.verdict = ok ? "NON-SPECIAL" : "FAIL";
            row.note = "first degeneration ledger: " + rep.verdict_string();
        } else if (ratio_ge(d, m, 16, 5)) {
            row.regime = "16/5<=ratio<10/3";
            Params p = Params::from(d, m, 0);
            Int a = 5 * m - 3 * p.c - p.e;
            if (a < 0) a = 0;
            row.a = a;
            row.verdict = run_lemmas(row, {"V2", "V2F"}, a) ? "NON-SPECIAL" : "FAIL";
        } else if (ratio_gt(d, m, 19, 6)) {
            row.regime = "19/6<ratio<16/5";
            row.a = Int(0);
            row.verdict = run_lemmas(row, {"V3", "Z3", "T3", "V3F", "Z3F"}, 0) ? "NON-SPECIAL" : "FAIL";
        } else if (ratio_ge(d, m, 174, 55)) {
            row.regime = "174/55<=ratio<=19/6";
            AChoice c = choose_a(d, m);
            row.a = c.a;
            for (const auto& r : c.checks) row.lemmas.push_back(tag(r));
            row.note = c.justification;
            if (c.kind == ChoiceKind::CHOSEN) {
                row.verdict = "NON-SPECIAL";
            } else if (c.kind == ChoiceKind::CITED) {
                row.verdict = "CITED";
            } else if (is_exceptional(d, m)) {
                auto rep = exceptional_ledger(d, m);
                row.verdict = "CASE-SCRIPT";
                row.note += "; case script: " + rep.verdict_string();
            } else {
                row.verdict = "NONE";
            }
        } else if (ratio_le(d, m, 3, 1)) {
            row.regime = "ratio<=3";
            row.verdict = "EMPTY";
            row.note = "expected dimension " + int_str(row.expected);
        } else {
            row.regime = "3<ratio<174/55";
            row.verdict = "NOT-COVERED";
        }
    } catch (const Error& e) {
        row.verdict = "FAIL";
        row.note = e.what();
    }
    return row;
}

}  // namespace

std::vector<ScanRow> scan(const Ratio& lo, const Ratio& hi, long long m_max, const ScanOptions& opt) {
    if (lo.den <= 0) throw ParseError("lower ratio bound must be finite", 0);
    std::vector<std::pair<long long, long long>> items;
    for (long long m = 1; m <= m_max; ++m) {
        long long dlo = (lo.num * m + lo.den - 1) / lo.den;
        long long dhi = hi.den == 0 ? kInfCap * m : hi.num * m / hi.den;
        for (long long d = dlo; d <= dhi; ++d) {
            if (opt.coprime_only && std::gcd(d, m) != 1) continue;
            items.emplace_back(d, m);
        }
    }
    std::vector<ScanRow> rows(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) rows[i] = scan_one(items[i].first, items[i].second);
    };
    unsigned n = std::max(1u, opt.jobs);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

nlohmann::json to_json(const ScanRow& r) {
    nlohmann::json j;
    j["d"] = int_json(r.d);
    j["m"] = int_json(r.m);
    j["regime"] = r.regime;
    j["a"] = r.a ? int_json(*r.a) : nlohmann::json(nullptr);
    j["verdict"] = r.verdict;
    j["expected"] = int_json(r.expected);
    j["lemmas"] = r.lemmas;
    j["note"] = r.note;
    return j;
}

}  // namespace shgh
