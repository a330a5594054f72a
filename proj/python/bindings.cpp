// Thin bridge: every call takes plain values and returns a JSON string,
// which shgh_py decodes. Big integers travel as decimal strings.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "shgh/cremona.hpp"
#include "shgh/degeneration.hpp"
#include "shgh/errors.hpp"
#include "shgh/notation.hpp"
#include "shgh/oracle.hpp"
#include "shgh/verify.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace shgh;

namespace {

std::string system_json(const std::string& spec) {
    auto s = parse_system(spec);
    json j = to_json(s.cls, s.cfg);
    j["text"] = render_system(s);
    j["virtual_dim"] = int_json(virtual_dim(s.cls));
    j["expected_dim"] = int_json(expected_dim(s.cls));
    return j.dump();
}

std::string dim_json(const std::string& spec) {
    auto s = parse_system(spec);
    auto r = shgh_dim(s.cls, s.cfg);
    json j;
    j["dim"] = int_json(r.dim);
    j["status"] = to_string(r.status);
    j["note"] = r.note;
    j["table"] = render_table(r.reduction);
    j["reduction"] = to_json(r.reduction);
    return j.dump();
}

std::string reduce_json(const std::string& spec) { return to_json(reduce_to_standard(parse_system(spec))).dump(); }

std::string oracle_json(const std::string& spec, std::uint32_t p, std::size_t trials, std::uint64_t seed,
                        const std::string& cache_dir, bool frame) {
    auto s = parse_system(spec);
    OracleOptions o;
    o.p = p;
    o.trials = trials;
    o.seed = seed;
    o.cache_dir = cache_dir;
    o.frame = frame;
    CertifiedDim r;
    {
        py::gil_scoped_release nogil;
        r = generic_dim(s, o);
    }
    json ws = json::array();
    for (const auto& w : r.witnesses)
        ws.push_back({{"p", w.p}, {"seed", w.seed}, {"frame", w.frame}, {"rank", w.rank},
                      {"rows", w.rows}, {"cols", w.cols}, {"dim", w.dim}, {"path", w.path}});
    return json{{"dim", int_json(r.dim)},
                {"expected", int_json(r.expected)},
                {"status", to_string(r.status)},
                {"trials_used", r.trials_used},
                {"witnesses", ws},
                {"note", r.note}}
        .dump();
}

std::string fiber_json(int stage, long long d, long long m, long long a) {
    Fiber f = build_stage(stage, d, m, a);
    return json{{"fiber", to_json(f)}, {"validation", to_json(validate(f))}}.dump();
}

std::string validate_json(const std::string& fiber) {
    return to_json(validate(fiber_from_json(json::parse(fiber)))).dump();
}

std::string ledger_json(long long d, long long m, std::optional<long long> a) {
    std::optional<Int> ai;
    if (a) ai = Int(*a);
    return to_json(exceptional_ledger(d, m, ai)).dump();
}

std::string choose_json(long long d, long long m) { return to_json(choose_a(d, m)).dump(); }

std::string scan_json(const std::string& lo, const std::string& hi, long long m_max, bool all_pairs) {
    ScanOptions o;
    o.coprime_only = !all_pairs;
    std::vector<ScanRow> rows;
    {
        py::gil_scoped_release nogil;
        rows = scan(Ratio::parse(lo), Ratio::parse(hi), m_max, o);
    }
    json out = json::array();
    for (const auto& r : rows) out.push_back(to_json(r));
    return out.dump();
}

std::string verify_json(bool include_long, const std::string& cache_dir) {
    VerifyOptions o;
    o.include_long = include_long;
    o.oracle.cache_dir = cache_dir;
    std::vector<CriterionResult> rs;
    {
        py::gil_scoped_release nogil;
        rs = verify_paper(o);
    }
    json out = json::array();
    for (const auto& r : rs) out.push_back(to_json(r));
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_shgh, mod) {
    mod.doc() = "native core of shgh_py";

    auto base = py::register_exception<Error>(mod, "ShghError", PyExc_ValueError);
    py::register_exception<ParseError>(mod, "ParseError", base.ptr());
    py::register_exception<HypothesisError>(mod, "HypothesisError", base.ptr());
    py::register_exception<RatioOutOfRange>(mod, "RatioOutOfRange", base.ptr());
    py::register_exception<ValidationError>(mod, "ValidationError", base.ptr());

    mod.def("system", &system_json, py::arg("spec"));
    mod.def("dim", &dim_json, py::arg("spec"));
    mod.def("reduce", &reduce_json, py::arg("spec"));
    mod.def("oracle", &oracle_json, py::arg("spec"), py::arg("p") = 2147483647u, py::arg("trials") = 3,
            py::arg("seed") = 1, py::arg("cache_dir") = "", py::arg("frame") = true);
    mod.def("fiber", &fiber_json, py::arg("stage"), py::arg("d"), py::arg("m"), py::arg("a"));
    mod.def("validate", &validate_json, py::arg("fiber"));
    mod.def("ledger", &ledger_json, py::arg("d"), py::arg("m"), py::arg("a") = py::none());
    mod.def("choose_a", &choose_json, py::arg("d"), py::arg("m"));
    mod.def("scan", &scan_json, py::arg("lo"), py::arg("hi"), py::arg("m_max"), py::arg("all_pairs") = false);
    mod.def("verify", &verify_json, py::arg("include_long") = false, py::arg("cache_dir") = "");
}
