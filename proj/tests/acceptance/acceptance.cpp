// Runs every acceptance criterion once and prints one PASS/FAIL line each.
// Usage: acceptance [artifact_dir]

#include <exception>
#include <iostream>

#include "blocksplit/verify.hpp"

int main(int argc, char** argv) {
    blocksplit::VerifyOptions options;
    if (argc > 1) options.artifact_dir = argv[1];

    int failed = 0;
    for (int c = 1; c <= 14; ++c) {
        blocksplit::CheckResult res;
        try {
            res = blocksplit::run_criterion(c, options);
        } catch (const std::exception& e) {
            res.criterion = c;
            res.name = "criterion raised an exception";
            res.detail = e.what();
        }
        if (!res.passed) ++failed;
        std::cout << blocksplit::format_check(res) << std::endl;
    }
    std::cout << (14 - failed) << " of 14 criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
