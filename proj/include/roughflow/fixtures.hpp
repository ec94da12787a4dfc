#pragma once

#include <string>
#include <vector>

namespace roughflow::fixtures {

struct FixtureInfo {
    std::string name;
    std::string category; // driver | field | golden | config
    std::string description;
};

// Built-in fixture catalog plus the contents of an optional custom
// directory (scanned non-recursively).
std::vector<FixtureInfo> catalog(const std::string& custom_dir = "");

// Two-dimensional piecewise-linear driver with small rational knots;
// exact signatures, gentle slopes.
const char* zigzag_path_csv();

// Golden table for products of single vertices and one recursion step in
// the branched algebra. Lines: sigma | tau | expected element.
const char* tree_product_table();

// Golden table for aromatic composition over letters a,b,g,d, including
// the three-term product of two grafted pairs. Same line format with
// vertex/edge-list encodings.
const char* aromatic_product_table();

// Returns the named built-in content or throws config_error.
std::string builtin(const std::string& name);

} // namespace roughflow::fixtures
