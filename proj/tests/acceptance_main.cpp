// Acceptance suite driver: one pass/fail line per criterion.
// Usage: acceptance [A1 ... A10]   (no arguments runs all ten)

#include "rotwalk/selftest.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    using namespace rotwalk::selftest;
    std::vector<std::string> ids;
    for (int i = 1; i < argc; ++i) ids.emplace_back(argv[i]);
    if (ids.empty())
        ids = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"};

    bool all = true;
    for (const auto& id : ids) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult res = run_one(id);
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%-4s %s  (%s) [%.2f s]\n", res.id.c_str(), res.pass ? "PASS" : "FAIL",
                    res.detail.c_str(), s);
        std::fflush(stdout);
        all = all && res.pass;
    }
    return all ? 0 : 1;
}
