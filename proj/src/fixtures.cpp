#include "roughflow/fixtures.hpp"

#include <filesystem>

#include "roughflow/errors.hpp"

namespace roughflow::fixtures {

const char* zigzag_path_csv() {
    return "time,x_1,x_2\n"
           "0,0,0\n"
           "0.25,0.5,-0.25\n"
           "0.5,0.25,0.5\n"
           "0.75,-0.25,0.25\n"
           "1,0.5,0.75\n";
}

const char* tree_product_table() {
    return "._a | ._a | 1 * [._a]_a\n"
           "._a | ._b | 1 * [._a]_b\n"
           "._b | ._a | 1 * [._b]_a\n"
           "._b | ._b | 1 * [._b]_b\n"
           "._a | [._b]_a | 1 * [._a,._b]_a + 1 * [[._a]_b]_a\n"
           "._a | [._b]_b | 1 * [._a,._b]_b + 1 * [[._a]_b]_b\n"
           "._b | [._a]_a | 1 * [._a,._b]_a + 1 * [[._b]_a]_a\n"
           "[._a]_b | ._a | 1 * [[._a]_b]_a\n";
}

const char* aromatic_product_table() {
    return "{0:a} | {0:b} | 1 * {0:a,1:b} + 1 * {0:a,1:b;0->1}\n"
           "{0:a,1:b;0->1} | {0:g,1:d;0->1} | "
           "1 * {0:a,1:b,2:g,3:d;0->1,2->3} + "
           "1 * {0:a,1:b,2:g,3:d;0->1,1->2,2->3} + "
           "1 * {0:a,1:b,2:g,3:d;0->1,1->3,2->3}\n"
           "{0:a;0->0} | {0:b} | 1 * {0:a,1:b;0->0}\n"
           "{0:b} | {0:a;0->0} | 1 * {0:a,1:b;0->0} + 1 * {0:a,1:b;0->0,1->0}\n";
}

std::string builtin(const std::string& name) {
    if (name == "zigzag") return zigzag_path_csv();
    if (name == "tree-products") return tree_product_table();
    if (name == "aromatic-products") return aromatic_product_table();
    throw config_error("unknown builtin fixture: " + name);
}

std::vector<FixtureInfo> catalog(const std::string& custom_dir) {
    std::vector<FixtureInfo> out{
        {"pure-area", "driver",
         "level-2 weak geometric rough path 1 + (t-s)A for an antisymmetric area matrix A"},
        {"zigzag", "driver",
         "piecewise-linear 2-d path with rational knots; exact signatures at any level"},
        {"rotation-shear", "field", "pair of linear fields with a nonzero commutator"},
        {"polynomial-pair", "field", "two smooth polynomial fields on R^2 with exact oracles"},
        {"tree-products", "golden", "branched-algebra product table (single vertices and "
                                    "one recursion step)"},
        {"aromatic-products", "golden",
         "aromatic composition table, including the three-term product of two grafted pairs"},
        {"fixtures/configs/", "config",
         "commented example config per experiment kind (chen, bchd, tree-products, "
         "aromatic-products, taylor, composition, convergence, decay, four-point)"},
    };
    if (!custom_dir.empty()) {
        namespace fs = std::filesystem;
        if (fs::exists(custom_dir))
            for (const auto& entry : fs::directory_iterator(custom_dir))
                if (entry.is_regular_file())
                    out.push_back({entry.path().filename().string(), "custom",
                                   "user fixture from " + custom_dir});
    }
    return out;
}

} // namespace roughflow::fixtures
