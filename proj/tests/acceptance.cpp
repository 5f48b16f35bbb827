// Runs every acceptance criterion and prints one line each.
#include <cstdio>

#include "tlsbath/app/validation.hpp"

int main() {
    using namespace tlsbath::app;
    int failures = 0;
    for (const CriterionResult& r : validate_all()) {
        std::printf("[%s] criterion %2d %s: %s (required %s)%s%s\n", to_string(r.status), r.id, r.name.c_str(),
                    r.measured.c_str(), r.tolerance.c_str(), r.detail.empty() ? "" : " | ", r.detail.c_str());
        if (r.status != Status::Pass) ++failures;
    }
    std::printf("%d of %d criteria not passed\n", failures, kCriterionCount);
    return failures == 0 ? 0 : 1;
}
