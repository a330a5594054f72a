#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shgh/cremona.hpp"
#include "shgh/degeneration.hpp"
#include "shgh/notation.hpp"
#include "shgh/oracle.hpp"
#include "shgh/primes.hpp"
#include "shgh/verify.hpp"

using namespace shgh;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2, kRefused = 3;
constexpr std::size_t kColumnLimit = 5000;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Refused : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::uint64_t prime = kPrime1;
    std::size_t trials = 3;
    std::uint64_t seed = 1;
    int bound = 5;
    std::string format = "text";
    unsigned jobs = 1;
    bool long_ok = false;
    std::string cache_dir;
    bool no_cache = false;
    bool no_frame = false;

    bool json() const { return format == "json"; }

    void check() const {
        if (prime >= (1ull << 32) || !is_prime_u64(prime))
            throw UsageError("--prime must be a prime below 2^32, got " + std::to_string(prime));
        if (trials < 1) throw UsageError("--trials must be at least 1");
        if (bound < 0) throw UsageError("--bound must be non-negative");
        if (jobs < 1) throw UsageError("--jobs must be at least 1");
    }

    OracleOptions oracle() const {
        OracleOptions o;
        o.p = static_cast<std::uint32_t>(prime);
        o.trials = trials;
        o.seed = seed;
        o.cache_dir = cache_dir;
        o.use_cache = !no_cache;
        o.frame = !no_frame;
        return o;
    }
};

std::string default_cache_dir() {
    if (const char* e = std::getenv("SHGH_CACHE_DIR"); e && *e) return e;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::string(x) + "/shgh";
    if (const char* h = std::getenv("HOME"); h && *h) return std::string(h) + "/.cache/shgh";
    return ".shgh-cache";
}

void emit(const RunConfig& rc, const json& j, const std::string& text) {
    if (rc.json())
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

// ---- dim ----

int cmd_dim(const RunConfig& rc, const std::string& spec) {
    auto s = parse_system(spec);
    auto r = shgh_dim(s.cls, s.cfg);
    auto fixed = split_fixed_neg_curves(s.cls, s.cfg, rc.bound);
    json j;
    j["system"] = to_json(s.cls, s.cfg);
    j["dim"] = int_json(r.dim);
    j["status"] = to_string(r.status);
    j["note"] = r.note;
    j["reduction"] = to_json(r.reduction);
    json fj = json::array();
    for (const auto& sp : fixed.splits) fj.push_back({{"class", to_json(sp.cls, s.cfg)}, {"times", int_json(sp.times)}});
    j["fixed_curves"] = fj;
    j["degree_bound"] = rc.bound;

    std::ostringstream o;
    o << "L(" << render_system(s) << ")\n";
    o << "dim: " << r.dim << "\nstatus: " << to_string(r.status) << "\n";
    if (!r.note.empty()) o << "note: " << r.note << "\n";
    o << "reduction:\n";
    for (const auto& row : render_table(r.reduction)) o << "  " << row << "\n";
    for (const auto& sp : fixed.splits)
        o << "fixed curve: " << render_row(sp.cls, s.cfg, {}) << "  x" << sp.times << "\n";
    emit(rc, j, o.str());
    return kOk;
}

// ---- reduce ----

int cmd_reduce(const RunConfig& rc, const std::string& spec) {
    auto s = parse_system(spec);
    auto r = reduce_to_standard(s);
    std::ostringstream o;
    for (const auto& row : render_table(r)) o << row << "\n";
    for (const auto& sp : r.log.splits()) o << "split: E_" << sp.label << " x" << sp.times << "\n";
    if (r.empty) o << "empty\n";
    emit(rc, to_json(r), o.str());
    return kOk;
}

// ---- oracle ----

json witness_json(const Witness& w) {
    // no timings or cache flags: equal inputs give equal JSON
    return {{"p", w.p},       {"seed", w.seed},  {"frame", w.frame}, {"rank", w.rank},
            {"rows", w.rows}, {"cols", w.cols},  {"dim", w.dim},     {"path", w.path}};
}

int cmd_oracle(const RunConfig& rc, const std::string& spec) {
    auto s = parse_system(spec);
    if (s.cls.degree >= 0) {
        Int cols = (s.cls.degree + 1) * (s.cls.degree + 2) / 2;
        if (cols > kColumnLimit && !rc.long_ok)
            throw Refused("L(" + render_system(s) + ") needs " + int_str(cols) + " columns, more than " +
                          std::to_string(kColumnLimit) + "; pass --long to run it");
    }
    auto r = generic_dim(s, rc.oracle());
    json j;
    j["system"] = to_json(s.cls, s.cfg);
    j["dim"] = int_json(r.dim);
    j["expected"] = int_json(r.expected);
    j["status"] = to_string(r.status);
    j["trials_used"] = r.trials_used;
    json ws = json::array();
    for (const auto& w : r.witnesses) ws.push_back(witness_json(w));
    j["witnesses"] = ws;
    j["note"] = r.note;

    std::ostringstream o;
    o << "L(" << render_system(s) << ")\n";
    o << "dim: " << r.dim << "\nexpected: " << r.expected << "\nstatus: " << to_string(r.status) << "\n";
    o << "trials: " << r.trials_used << "\n";
    for (const auto& w : r.witnesses) {
        o << "witness: p=" << w.p << " seed=" << w.seed << " rank=" << w.rank << " of " << w.rows << "x" << w.cols
          << " dim=" << w.dim << " " << w.seconds << " s" << (w.cached ? " (cached)" : "");
        if (!w.path.empty()) o << " " << w.path;
        o << "\n";
    }
    if (!r.note.empty()) o << "note: " << r.note << "\n";
    emit(rc, j, o.str());
    return kOk;
}

// ---- degen ----

int cmd_degen(const RunConfig& rc, long long d, long long m, long long a, int stage, bool ledger) {
    if (stage < 1 || stage > 4) throw UsageError("stage must be 1..4");
    const bool exceptional = (d == 174 && m == 55) || (d == 193 && m == 61) || (d == 348 && m == 110);
    Fiber f = exceptional && stage == 3   ? build_third_unchecked(d, m, a)
              : exceptional && stage == 4 ? build_fourth_unchecked(d, m, a)
                                          : build_stage(stage, d, m, a);
    auto v = validate(f);
    json j;
    j["fiber"] = to_json(f);
    j["validation"] = to_json(v);
    std::ostringstream o;
    o << render_fiber(f);
    o << "validation: " << (v.ok ? "ok" : "FAILED") << "\n";
    for (const auto& e : v.errors) o << "  " << e << "\n";
    if (ledger) {
        MatchingReport rep = stage == 1 ? matching_dim(f, {Assumption::COMPLETE_RESTRICTION})
                                        : matching_dim(f, {Assumption::COMPLETE_RESTRICTION,
                                                           Assumption::TRANSVERSALITY,
                                                           Assumption::CORRESPONDENCE_GENERALITY});
        j["ledger"] = to_json(rep);
        o << render_report(rep);
    }
    emit(rc, j, o.str());
    return v.ok ? kOk : kFailed;
}

// exceptional pairs go through their scripted ledgers
int cmd_case(const RunConfig& rc, long long d, long long m, std::optional<long long> a) {
    auto rep = exceptional_ledger(d, m, a ? std::optional<Int>(*a) : std::nullopt);
    emit(rc, to_json(rep), render_report(rep));
    return kOk;
}

// ---- scan ----

int cmd_scan(const RunConfig& rc, const std::string& lo, const std::string& hi, long long m_max, bool all_pairs) {
    if (m_max < 1) throw UsageError("m_max must be positive");
    ScanOptions so;
    so.coprime_only = !all_pairs;
    so.jobs = rc.jobs;
    auto rows = scan(Ratio::parse(lo), Ratio::parse(hi), m_max, so);
    bool failed = false;
    json arr = json::array();
    std::ostringstream o;
    std::map<std::string, int> count;
    for (const auto& r : rows) {
        failed = failed || r.verdict == "FAIL";
        ++count[r.verdict];
        arr.push_back(to_json(r));
        o << r.d << "\t" << r.m << "\t" << r.regime << "\ta=" << (r.a ? int_str(*r.a) : "-") << "\t" << r.verdict;
        if (!r.lemmas.empty()) {
            o << "\t";
            for (std::size_t i = 0; i < r.lemmas.size(); ++i) o << (i ? "," : "") << r.lemmas[i];
        }
        if (!r.note.empty()) o << "\t" << r.note;
        o << "\n";
    }
    o << rows.size() << " rows:";
    for (const auto& [k, n] : count) o << " " << k << "=" << n;
    o << "\n";
    emit(rc, json{{"rows", arr}, {"counts", count}}, o.str());
    return failed ? kFailed : kOk;
}

// ---- verify-paper ----

int cmd_verify(const RunConfig& rc, const std::string& level) {
    VerifyOptions vo;
    vo.jobs = rc.jobs;
    vo.oracle = rc.oracle();
    vo.oracle.trials = std::max<std::size_t>(rc.trials, 1);
    if (level == "fast") {
        vo.include_long = rc.long_ok;
    } else if (level == "full") {
        vo.include_long = true;
    } else if (level == "long-only") {
        vo.include_fast = false;
        vo.include_long = true;
    } else {
        throw UsageError("level must be fast, full or long-only");
    }
    if (!rc.json()) vo.progress = [](const std::string& s) { std::cout << s << std::endl; };
    auto rs = verify_paper(vo);
    bool ok = all_passed(rs);
    if (rc.json()) {
        json arr = json::array();
        for (const auto& r : rs) arr.push_back(to_json(r));
        std::cout << json{{"criteria", arr}, {"passed", ok}}.dump(2) << "\n";
    } else {
        std::size_t pass = 0, fail = 0, skip = 0;
        for (const auto& r : rs) (r.skipped ? skip : r.pass ? pass : fail)++;
        std::cout << pass << " passed, " << fail << " failed, " << skip << " skipped\n";
    }
    return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear systems of plane curves through fat points: dimensions, reductions, rank oracle, "
                 "degeneration scripts"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig rc;
    app.add_option("--prime", rc.prime, "prime for the rank oracle")->capture_default_str();
    app.add_option("--trials", rc.trials, "random configurations per oracle call")->capture_default_str();
    app.add_option("--seed", rc.seed, "base seed")->capture_default_str();
    app.add_option("--bound", rc.bound, "degree bound for the negative-curve search")->capture_default_str();
    app.add_option("--format", rc.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("--jobs", rc.jobs, "worker threads")->capture_default_str();
    app.add_flag("--long", rc.long_ok, "allow oracle runs above 5000 columns");
    app.add_option("--cache-dir", rc.cache_dir, "witness cache directory (default ~/.cache/shgh)");
    app.add_flag("--no-cache", rc.no_cache, "ignore and do not write cached witnesses");

    std::string spec;
    auto* dim = app.add_subcommand("dim", "SHGH dimension of a system, with its reduction");
    dim->add_option("system", spec, "e.g. \"174; 55^10\" or \"24; 11^4, [4,4]^2\"")->required();

    auto* reduce = app.add_subcommand("reduce", "Cremona reduction table");
    reduce->add_option("system", spec)->required();

    auto* oracle = app.add_subcommand("oracle", "dimension from the mod-p interpolation matrix");
    oracle->add_option("system", spec)->required();
    oracle->add_flag("--no-frame", rc.no_frame, "keep the first three points random instead of at the coordinate vertices");

    long long d = 0, m = 0, a = 0;
    int stage = 1;
    bool ledger = false;
    auto* degen = app.add_subcommand("degen", "build a scripted degeneration and validate it");
    degen->add_option("d", d)->required();
    degen->add_option("m", m)->required();
    degen->add_option("a", a)->required();
    degen->add_option("stage", stage, "1..4")->required();
    degen->add_flag("--ledger", ledger, "also print the matching ledger");

    std::optional<long long> case_a;
    auto* cs = app.add_subcommand("case", "matching ledger of an exceptional pair");
    cs->add_option("d", d)->required();
    cs->add_option("m", m)->required();
    cs->add_option("a", case_a, "omit for the full range");

    std::string lo, hi;
    long long m_max = 0;
    bool all_pairs = false;
    auto* sc = app.add_subcommand("scan", "dispatch every (d,m) with lo <= d/m <= hi to its regime");
    sc->add_option("lo", lo, "lower ratio, e.g. 174/55")->required();
    sc->add_option("hi", hi, "upper ratio, or inf")->required();
    sc->add_option("m_max", m_max)->required();
    sc->add_flag("--all-pairs", all_pairs, "include pairs with gcd(d,m) > 1");

    std::string level = "fast";
    auto* vp = app.add_subcommand("verify-paper", "run the acceptance suite");
    vp->add_option("--level", level, "fast, full or long-only")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (rc.cache_dir.empty() && !rc.no_cache) rc.cache_dir = default_cache_dir();

    try {
        rc.check();
        if (*dim) return cmd_dim(rc, spec);
        if (*reduce) return cmd_reduce(rc, spec);
        if (*oracle) return cmd_oracle(rc, spec);
        if (*degen) return cmd_degen(rc, d, m, a, stage, ledger);
        if (*cs) return cmd_case(rc, d, m, case_a);
        if (*sc) return cmd_scan(rc, lo, hi, m_max, all_pairs);
        if (*vp) return cmd_verify(rc, level);
    } catch (const Refused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
