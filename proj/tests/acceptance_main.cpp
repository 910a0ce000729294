// Acceptance battery runner: one pass/fail line per criterion.
// Usage: acceptance_checks [id...]   (no arguments runs all twelve)

#include "fracsemi/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty())
        for (int id = 1; id <= 12; ++id) ids.push_back(id);

    bool all = true;
    for (int id : ids) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto r = fracsemi::run_criterion(id);
            double dt = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
            std::printf("[%s] %2d %s: %s (%.1fs)\n", r.pass ? "PASS" : "FAIL",
                        r.id, r.name.c_str(), r.detail.c_str(), dt);
            all = all && r.pass;
        } catch (const std::exception& e) {
            std::printf("[FAIL] %2d: exception: %s\n", id, e.what());
            all = false;
        }
    }
    return all ? 0 : 1;
}
