#include "ldl/machines.hpp"

namespace ldl {

int MachineBuilder::state(const std::string& name)
{
    auto [it, inserted] = ids_.emplace(name, static_cast<int>(ids_.size()));
    return it->second;
}

MachineBuilder& MachineBuilder::on(const std::string& from, std::uint8_t read, const std::string& to,
                                   std::uint8_t write, Move move)
{
    int q = state(from);
    Transition t{state(to), write, move};
    if (!delta_.emplace(std::pair{q, read}, t).second)
        throw MachineError("state '" + from + "' already has a transition on " + std::to_string(read));
    return *this;
}

MachineBuilder& MachineBuilder::on_digits(const std::string& from, const std::string& to, Move move)
{
    return on(from, 1, to, 1, move).on(from, 3, to, 3, move);
}

MachineBuilder& MachineBuilder::on_all(const std::string& from, const std::string& to, Move move)
{
    return on_digits(from, to, move).on(from, 0, to, 0, move);
}

TuringMachine MachineBuilder::build(const std::string& init, const std::vector<std::string>& accept,
                                    const std::vector<std::string>& negative)
{
    int q0 = state(init);
    std::set<int> acc, neg;
    for (const auto& a : accept)
        acc.insert(state(a));
    for (const auto& a : negative)
        neg.insert(state(a));
    auto delta = delta_;
    int n = static_cast<int>(ids_.size());
    for (int q = 0; q < n; ++q)
        for (auto s : TuringMachine::kSymbols)
            delta.emplace(std::pair{q, s}, Transition{q, s, Move::Right});
    return TuringMachine(n, q0, std::move(acc), std::move(delta), std::move(neg));
}

namespace {

constexpr auto L = Move::Left;
constexpr auto R = Move::Right;

std::string sym(std::uint8_t s) { return std::to_string(s); }

}  // namespace

TuringMachine unary_eraser()
{
    MachineBuilder b;
    b.on("erase", 0, "erase", 0, R).on("erase", 1, "erase", 0, R).on("erase", 3, "erase", 0, R);
    return b.build("erase", {});
}

TuringMachine binary_increment()
{
    MachineBuilder b;
    b.on("carry", 3, "carry", 1, R).on("carry", 1, "done", 3, R).on("carry", 0, "done", 3, R);
    b.on_all("done", "done", R);
    return b.build("carry", {"done"});
}

TuringMachine binary_doubler()
{
    // hold_s carries the digit displaced from the previous cell
    MachineBuilder b;
    b.on("start", 1, "hold_1", 1, R).on("start", 3, "hold_3", 1, R).on("start", 0, "done", 0, R);
    for (std::uint8_t held : {1, 3}) {
        std::string h = "hold_" + sym(held);
        b.on(h, 1, "hold_1", held, R).on(h, 3, "hold_3", held, R).on(h, 0, "done", held, R);
    }
    b.on_all("done", "done", R);
    return b.build("start", {"done"});
}

TuringMachine palindrome_checker()
{
    MachineBuilder b;
    // at the marker of the first unconsumed pair
    b.on("take_mark", 1, "take_bit", 3, R).on("take_mark", 3, "no", 3, R).on("take_mark", 0, "yes", 0, R);
    b.on("take_bit", 1, "carry_1_0", 3, R).on("take_bit", 3, "carry_3_0", 3, R).on("take_bit", 0, "no", 0, R);
    for (std::uint8_t first : {1, 3}) {
        // carry_b_p: parity p = 0 on marker cells
        for (int p : {0, 1}) {
            std::string c = "carry_" + sym(first) + "_" + std::to_string(p);
            std::string flip = "carry_" + sym(first) + "_" + std::to_string(1 - p);
            b.on_digits(c, flip, R);
            if (p == 0)
                b.on(c, 0, "last_" + sym(first), 0, L);
            else
                b.on(c, 0, "no", 0, R);
        }
        std::string last = "last_" + sym(first);
        for (std::uint8_t second : {1, 3}) {
            std::string cmp = "cmp_" + sym(first) + "_" + sym(second);
            b.on(last, second, cmp, 0, L);
            // marker 3: the pair met the consumed prefix, all pairs matched
            b.on(cmp, 3, "yes", 3, R);
            if (first == second)
                b.on(cmp, 1, "back_bit", 0, L);
            else
                b.on(cmp, 1, "no", 1, R);
        }
    }
    b.on_digits("back_bit", "back_mark", L);
    b.on("back_mark", 1, "back_bit", 1, L).on("back_mark", 3, "skip", 3, R);
    b.on_all("skip", "take_mark", R);
    b.on_all("yes", "yes", R);
    b.on_all("no", "no", R);
    return b.build("take_mark", {"yes"});
}

TuringMachine busy_loop()
{
    MachineBuilder b;
    b.on_all("right", "left", R);
    b.on_all("left", "right", L);
    return b.build("right", {});
}

PipelineMachine doubling_pipeline_machine()
{
    // Input cells: marker/bit of pair P+1 at 0/1, of pair P at 2/3, the low
    // P pairs from 4 on. Output: |k + 2^P - 2^P| in the same field, head
    // back on cell 0.
    MachineBuilder b;
    b.on_digits("top_mark", "top_bit", R);
    b.on("top_bit", 3, "full_mark", 1, R).on("top_bit", 1, "p_mark", 1, R);
    // input 2^(P+1): output 2^P
    b.on_digits("full_mark", "full_bit", R);
    b.on("full_bit", 1, "pos_2", 3, L);
    b.on_digits("p_mark", "p_bit", R);
    // bit P set: non-negative, clear it
    b.on("p_bit", 3, "pos_2", 1, L).on("p_bit", 1, "sentinel", 1, R);
    // negative: 2^P - low as the two's complement of the low P bits
    b.on("sentinel", 1, "scan_bit", 3, R);
    b.on_digits("scan_bit", "scan_mark", R);
    b.on_digits("scan_mark", "scan_bit", R).on("scan_mark", 0, "copy_bit", 0, L);
    b.on("copy_bit", 1, "copy_mark", 1, L).on("copy_bit", 3, "inv_mark", 3, L);
    b.on("copy_mark", 1, "copy_bit", 1, L).on("copy_mark", 3, "set_p", 1, L);
    b.on("inv_bit", 1, "inv_mark", 3, L).on("inv_bit", 3, "inv_mark", 1, L);
    b.on("inv_mark", 1, "inv_bit", 1, L).on("inv_mark", 3, "keep_p", 1, L);
    // low bits all zero: |k| = 2^P
    b.on("set_p", 1, "neg_2", 3, L);
    b.on_digits("keep_p", "neg_2", L);
    for (std::string sign : {"pos", "neg"}) {
        b.on_digits(sign + "_2", sign + "_1", L);
        b.on_digits(sign + "_1", sign + "_halt", L);
        b.on_all(sign + "_halt", sign + "_halt_odd", R);
        b.on_all(sign + "_halt_odd", sign + "_halt", L);
    }
    return {"double",
            b.build("top_mark", {"pos_halt", "pos_halt_odd", "neg_halt", "neg_halt_odd"}, {"neg_halt", "neg_halt_odd"}),
            Polynomial{{1, 1}}, Polynomial{{8, 4}}};
}

PipelineMachine constant_pipeline_machine()
{
    MachineBuilder b;
    b.on("sentinel", 1, "scan_bit", 3, R);
    b.on_digits("scan_bit", "scan_mark", R);
    b.on_digits("scan_mark", "scan_bit", R).on("scan_mark", 0, "erase_bit", 0, L);
    b.on("erase_bit", 1, "erase_mark", 0, L).on("erase_bit", 3, "erase_mark", 0, L);
    b.on("erase_mark", 1, "erase_bit", 0, L).on("erase_mark", 3, "walk", 0, L);
    // left tape from the head outward: 1^(2n) 3 1
    b.on("walk", 1, "walk", 1, L).on("walk", 3, "halt", 3, L);
    b.on_all("halt", "halt_odd", R);
    b.on_all("halt_odd", "halt", L);
    return {"one", b.build("sentinel", {"halt", "halt_odd"}), Polynomial{{0, 1}}, Polynomial{{8, 6}}};
}

}  // namespace ldl
