#ifndef FRACSEMI_VERIFY_HPP
#define FRACSEMI_VERIFY_HPP

#include <string>
#include <vector>

namespace fracsemi {

/// One line of the verification battery.
struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs a single battery criterion (1..12).
CheckResult run_criterion(int id);

/// Runs the requested criteria (empty = all 12), in order.
std::vector<CheckResult> run_battery(const std::vector<int>& ids = {});

} // namespace fracsemi

#endif
