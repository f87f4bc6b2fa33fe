// One line per acceptance criterion; the exit status is nonzero if any fails.
#include <cstdio>

#include "lhls/acceptance.hpp"

int main() {
    const lhls::RunConfig cfg;
    int failed = 0;
    for (int id = 1; id <= lhls::kCriterionCount; ++id) {
        const auto r = lhls::run_criterion(id, cfg);
        std::printf("%s\n", lhls::format_line(r).c_str());
        std::fflush(stdout);
        failed += !r.pass;
    }
    std::printf("%d/%d criteria pass\n", lhls::kCriterionCount - failed, lhls::kCriterionCount);
    return failed == 0 ? 0 : 1;
}
