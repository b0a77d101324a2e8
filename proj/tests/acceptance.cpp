#include <iostream>

#include "aind/verify.hpp"

int main(int argc, char** argv) {
    aind::VerifyOptions opts;
    if (argc > 1) opts.filter = argv[1];
    const auto results = aind::verify_paper(opts);
    std::size_t passed = 0;
    for (const auto& r : results) {
        std::cout << aind::format_result(r) << '\n';
        passed += r.passed;
    }
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    return aind::verify_exit_code(results);
}
