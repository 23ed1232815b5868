#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"

// Accepts --seed=N (or MEALYFORGE_SEED) after gtest has taken its own flags.
int main(int argc, char** argv) {
    testing::InitGoogleTest(&argc, argv);
    if (const char* env = std::getenv("MEALYFORGE_SEED")) mftest::seed() = static_cast<unsigned>(std::stoul(env));
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--seed=", 0) == 0) mftest::seed() = static_cast<unsigned>(std::stoul(arg.substr(7)));
    }
    return RUN_ALL_TESTS();
}
