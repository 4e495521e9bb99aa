#pragma once

// Machines shipped with the library. All of them keep their reachable
// configurations readable (see tm_compiler.hpp), so their compiled steps
// agree with tm_step exactly.

#include "ldl/tm_compiler.hpp"

namespace ldl {

// Builds a total transition table from named states; transitions left
// unspecified stay in their state, keep the symbol and move right.
class MachineBuilder {
public:
    int state(const std::string& name);
    MachineBuilder& on(const std::string& from, std::uint8_t read, const std::string& to, std::uint8_t write, Move move);
    // Same transition for 1 and 3, writing back what was read.
    MachineBuilder& on_digits(const std::string& from, const std::string& to, Move move);
    MachineBuilder& on_all(const std::string& from, const std::string& to, Move move);
    TuringMachine build(const std::string& init, const std::vector<std::string>& accept,
                        const std::vector<std::string>& negative = {});

private:
    std::map<std::string, int> ids_;
    std::map<std::pair<int, std::uint8_t>, Transition> delta_;
};

// Overwrites everything with blanks while running right.
TuringMachine unary_eraser();
// Adds one to a binary word written least significant digit first (1 = bit
// 0, 3 = bit 1).
TuringMachine binary_increment();
// Doubles a binary word written least significant digit first.
TuringMachine binary_doubler();
// Accepts pair-encoded bit strings ("1 1" = 0, "1 3" = 1) that read the same
// backwards; consumed pairs on the left become "3 3", on the right blanks.
TuringMachine palindrome_checker();
// Bounces between its first two cells forever.
TuringMachine busy_loop();

struct PipelineMachine {
    std::string name;
    TuringMachine machine;
    Polynomial modulus;
    Polynomial runtime;
};

// f(x) = 2x: with m(n) = n + 1 the biased input k + 2^P already is 2^n f
// at the grid point, so the machine only removes the bias.
PipelineMachine doubling_pipeline_machine();
// f(x) = 1: replaces the input by the 2^n found on the left tape.
PipelineMachine constant_pipeline_machine();

}  // namespace ldl
