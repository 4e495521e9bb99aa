#pragma once

#include <cstdint>
#include <string>

// Runs the bundled property suites; returns the number of failed test cases.
int run_selftest(std::uint64_t seed, const std::string& filter);
