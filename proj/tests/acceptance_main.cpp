#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "quatgreen/acceptance.hpp"

// Usage: acceptance [criterion ids...]; prints one line per criterion.
int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
    quatgreen::AcceptanceOptions opts;
    bool all_pass = true;
    int passed = 0, total = 0;
    for (int id : ids.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : ids) {
        const auto r = quatgreen::run_criterion(id, opts);
        std::printf("%s\n", quatgreen::format_line(r).c_str());
        std::fflush(stdout);
        all_pass = all_pass && r.pass;
        passed += r.pass ? 1 : 0;
        ++total;
    }
    std::printf("%d/%d criteria passed\n", passed, total);
    return all_pass ? 0 : 1;
}
