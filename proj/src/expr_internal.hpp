#pragma once

#include "ldl/expr.hpp"

#include <mutex>

namespace ldl {

struct Node {
    Op op = Op::Zero;
    int a = 0;  // Proj/XVar/FVar index
    int b = 0;  // Proj arity
    std::vector<Expr> kids;  // Comp: fn then args; Lode: init, body
    int arity = 0;
    int f_arity = 0;
    std::vector<SortCond> outs;
    std::set<int> nat_x;
    std::set<int> nat_f;

    mutable std::once_flag compiled;
    mutable std::unique_ptr<Program> program;
};

// Straight-line code for one evaluation frame. Composition and lode nodes
// call into the programs of their closed sub-expressions.
struct Instr {
    Op op;
    int out;               // first slot of the result
    int dim;
    int a = 0;
    std::vector<int> in;   // first slot of each operand
    std::vector<int> in_dims;
    const Node* node;
};

class Program {
public:
    std::vector<Instr> code;
    int slots = 0;
    int root = 0;
    int root_dim = 0;
};

}  // namespace ldl
