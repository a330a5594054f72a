#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "shgh/oracle.hpp"

namespace shgh {

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    bool skipped = false;
    bool long_run = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyOptions {
    bool include_fast = true;
    bool include_long = false;
    unsigned jobs = 1;
    std::uint64_t seed = 20240601;
    OracleOptions oracle;   // cache dir, prime and storage for every oracle call
    std::function<void(const std::string&)> progress;   // one line per finished item
};

struct CriterionInfo {
    std::string id;
    std::string title;
    bool long_run = false;
};

const std::vector<CriterionInfo>& criteria();

// Runs the selected criteria in catalogue order. Criteria not selected come
// back with skipped = true.
std::vector<CriterionResult> verify_paper(const VerifyOptions& opt);

bool all_passed(const std::vector<CriterionResult>& rs);
nlohmann::json to_json(const CriterionResult& r);
std::string render_line(const CriterionResult& r);

}  // namespace shgh
