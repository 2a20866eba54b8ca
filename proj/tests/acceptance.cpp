#include <iostream>

#include "blpack/repro.hpp"

using namespace blpack;

int main() {
    int failed = 0;
    for (int id = 1; id <= 11; ++id) {
        CriterionResult r = run_criterion(id);
        std::cout << "criterion " << id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.seconds << " s)\n";
        if (!r.pass) {
            ++failed;
            std::cout << "  " << to_json(r).at("details").dump() .substr(0, 2000) << "\n";
        }
        std::cout.flush();
    }
    std::cout << (11 - failed) << "/11 criteria pass\n";
    return failed == 0 ? 0 : 1;
}
