#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "../../tests/oracles.hpp"
#include "selftest.hpp"

#include <iostream>

int run_selftest(std::uint64_t seed, const std::string& filter)
{
    oracle::seed_base() = seed;
    doctest::Context ctx;
    if (!filter.empty())
        ctx.addFilter("test-case", filter.c_str());
    ctx.setOption("no-path-filenames", true);
    int rc = ctx.run();
    std::cout << "selftest seed " << seed << ": " << (rc == 0 ? "PASS" : "FAIL") << '\n';
    return rc;
}
