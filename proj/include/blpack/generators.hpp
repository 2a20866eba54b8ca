#pragma once

#include <map>
#include <string>
#include <vector>

#include "blpack/core.hpp"
#include "blpack/engine.hpp"

namespace blpack {

struct GeneratedCase {
    std::string construction;
    std::map<std::string, std::string> params;
    InstancePtr instance;
    std::map<std::string, Ordering> orderings;
    std::map<std::string, Packing> reference_packings;
    // Keys: "<ref>_height" pairs with reference_packings[<ref>];
    // "bl_height_<ordering>" is the exact BL height of orderings[<ordering>];
    // "bl_height_lower_bound" is a lower bound on the adversarial BL height;
    // remaining keys are informational.
    std::map<std::string, Rational> expected;
    // Named item groups, e.g. rows of a layered construction.
    std::map<std::string, std::vector<ItemId>> groups;
};

GeneratedCase gen_rect_43(const Rational& eps);
GeneratedCase gen_rect_43_integer(int h);
GeneratedCase gen_square_65(const Rational& eps);
GeneratedCase gen_square_43(int h, const Rational& eps);
GeneratedCase gen_checkerboard(int m);

struct ResetRow {
    std::vector<Rational> sizes;  // decreasing
};
ResetRow gen_reset_row(int m);
// Checkerboard followed by its reset row, in the decreasing-size ordering.
GeneratedCase gen_checkerboard_reset(int m);

GeneratedCase gen_ten_thirds(int n);
GeneratedCase gen_local_search(int k);
GeneratedCase gen_exponential_steps(int k);

Rational checkerboard_eps(int m);
int ten_thirds_m(int n);

// Dispatch by construction name with string parameters (as exposed on the CLI).
GeneratedCase generate(const std::string& name, const std::map<std::string, std::string>& params);
std::vector<std::string> construction_names();

}  // namespace blpack
