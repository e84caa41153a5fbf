#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>

#include "tazrp/acceptance.hpp"

// Runs every acceptance criterion and prints one line per criterion.
// Usage: acceptance [--quick] [--seed N] [--json FILE]
int main(int argc, char** argv) {
    tazrp::AcceptanceOptions opts;
    const char* json_path = nullptr;
    for (int k = 1; k < argc; ++k) {
        if (!std::strcmp(argv[k], "--quick")) {
            opts.quick = true;
        } else if (!std::strcmp(argv[k], "--seed") && k + 1 < argc) {
            opts.seed = std::strtoull(argv[++k], nullptr, 10);
        } else if (!std::strcmp(argv[k], "--json") && k + 1 < argc) {
            json_path = argv[++k];
        } else if (!std::strcmp(argv[k], "--only") && k + 1 < argc) {
            opts.only.push_back(std::atoi(argv[++k]));
        } else {
            std::cerr << "unknown argument " << argv[k] << "\n";
            return 2;
        }
    }
    const auto results = tazrp::run_acceptance(opts, [](const tazrp::CriterionResult& r) {
        std::cout << tazrp::format_line(r) << std::endl;
    });
    int passed = 0;
    for (const auto& r : results) passed += r.pass ? 1 : 0;
    std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
    if (json_path) std::ofstream(json_path) << tazrp::to_json(results, opts).dump(2) << "\n";
    return passed == static_cast<int>(results.size()) ? 0 : 1;
}
