// Acceptance run: one PASS/FAIL/SKIP line per criterion, exit 1 on any failure.
#include <iostream>

#include "CLI11.hpp"
#include "shgh/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    bool fast = false, long_only = false, full = false;
    std::string cache;
    unsigned jobs = 1;
    app.add_flag("--fast", fast, "every criterion except the long rank runs (default)");
    app.add_flag("--long-only", long_only, "only the long rank runs");
    app.add_flag("--full", full, "everything");
    app.add_option("--cache-dir", cache, "witness cache");
    app.add_option("--jobs", jobs);
    CLI11_PARSE(app, argc, argv);
    if (static_cast<int>(fast) + static_cast<int>(long_only) + static_cast<int>(full) > 1) {
        std::cerr << "pick one of --fast, --long-only, --full\n";
        return 2;
    }

    shgh::VerifyOptions vo;
    vo.include_fast = !long_only;
    vo.include_long = long_only || full;
    vo.jobs = jobs;
    vo.oracle.cache_dir = cache;
    vo.progress = [](const std::string& s) {
        if (s.rfind("  ", 0) == 0) std::cout << s << std::endl;
    };
    auto rs = shgh::verify_paper(vo);
    for (const auto& r : rs) std::cout << shgh::render_line(r) << "\n";
    return shgh::all_passed(rs) ? 0 : 1;
}
