#include "expr_internal.hpp"

#include <unordered_map>

namespace ldl {

namespace {

// Post-order over one frame; sub-frames (comp functions, lode parts) are
// compiled separately on first use.
void compile_frame(const Expr& root, Program& p)
{
    std::unordered_map<const Node*, int> slot_of;
    struct Item {
        Expr e;
        bool expanded;
    };
    std::vector<Item> stack{{root, false}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const Node* n = it.e.id();
        if (slot_of.count(n))
            continue;
        const auto& k = it.e.kids();
        std::size_t first = 0;
        if (n->op == Op::Comp)
            first = 1;
        if (n->op == Op::Lode)
            first = k.size();
        if (!it.expanded) {
            stack.push_back({it.e, true});
            for (std::size_t i = first; i < k.size(); ++i)
                if (!slot_of.count(k[i].id()))
                    stack.push_back({k[i], false});
            continue;
        }
        Instr ins{n->op, p.slots, static_cast<int>(it.e.dim()), n->a, {}, {}, n};
        for (std::size_t i = first; i < k.size(); ++i) {
            ins.in.push_back(slot_of.at(k[i].id()));
            ins.in_dims.push_back(static_cast<int>(k[i].dim()));
        }
        slot_of.emplace(n, p.slots);
        p.slots += ins.dim;
        p.code.push_back(std::move(ins));
    }
    p.root = slot_of.at(root.id());
    p.root_dim = static_cast<int>(root.dim());
}

class Runner {
public:
    explicit Runner(const EvalOptions& o) : opts_(o) {}

    // Runs p; the result occupies slots[p.root .. p.root + p.root_dim).
    void run(const Program& p, const Vec& args, const Vec* state, Vec& slots)
    {
        slots.resize(static_cast<std::size_t>(p.slots));
        for (const Instr& ins : p.code)
            step(ins, args, state, slots);
    }

    Vec result(const Program& p, const Vec& slots) const
    {
        return Vec(slots.begin() + p.root, slots.begin() + p.root + p.root_dim);
    }

private:
    // Scratch space per program. A program is never active twice at once
    // because comp and lode nesting follows the acyclic expression graph.
    struct Frame {
        Vec args;
        Vec slots;
    };

    const EvalOptions& opts_;
    std::unordered_map<const Program*, Frame> frames_;

    Frame& frame(const Program& p) { return frames_[&p]; }

    void guard(const Rational& v) const
    {
        if (opts_.guard_bits == 0)
            return;
        std::size_t bits = mpz_sizeinbase(v.get_num_mpz_t(), 2) + mpz_sizeinbase(v.get_den_mpz_t(), 2);
        if (bits > opts_.guard_bits)
            throw ResourceError("intermediate value of " + std::to_string(bits) + " bits exceeds the guard of " +
                                std::to_string(opts_.guard_bits));
    }

    static const Rational& natural_arg(const Vec& args, const char* what)
    {
        if (args.empty())
            throw SortError(std::string(what) + " without an argument");
        if (!is_natural(args[0]))
            throw SortError(std::string(what) + " of " + to_string(args[0]) + ", which is not a natural number");
        return args[0];
    }

    static const Rational& arg(const Vec& v, int i, const char* what)
    {
        if (i >= static_cast<int>(v.size()))
            throw SortError(std::string(what) + std::to_string(i) + " is not bound");
        return v[static_cast<std::size_t>(i)];
    }

    void step(const Instr& ins, const Vec& args, const Vec* state, Vec& s)
    {
        auto out = [&](int j) -> Rational& { return s[static_cast<std::size_t>(ins.out + j)]; };
        auto in = [&](int o, int j) -> const Rational& { return s[static_cast<std::size_t>(ins.in[o] + j)]; };
        switch (ins.op) {
        case Op::Zero:
            out(0) = 0;
            return;
        case Op::One:
            out(0) = 1;
            return;
        case Op::Len:
            out(0) = Rational(Integer(bit_length(natural_arg(args, "len").get_num())));
            return;
        case Op::Proj:
        case Op::XVar:
            out(0) = arg(args, ins.a, "argument x");
            return;
        case Op::FVar:
            if (!state)
                throw SortError("state variable f" + std::to_string(ins.a) + " outside a lode body");
            out(0) = arg(*state, ins.a, "state variable f");
            return;
        case Op::Add:
            for (int j = 0; j < ins.dim; ++j) {
                mpq_add(out(j).get_mpq_t(), in(0, j).get_mpq_t(), in(1, j).get_mpq_t());
                guard(out(j));
            }
            return;
        case Op::Sub:
            for (int j = 0; j < ins.dim; ++j) {
                mpq_sub(out(j).get_mpq_t(), in(0, j).get_mpq_t(), in(1, j).get_mpq_t());
                guard(out(j));
            }
            return;
        case Op::Mul:
            for (int j = 0; j < ins.dim; ++j) {
                mpq_mul(out(j).get_mpq_t(), in(0, j).get_mpq_t(), in(1, j).get_mpq_t());
                guard(out(j));
            }
            return;
        case Op::SignBar:
            for (int j = 0; j < ins.dim; ++j)
                out(j) = signbar(in(0, j));
            return;
        case Op::Half:
            for (int j = 0; j < ins.dim; ++j) {
                mpq_div_2exp(out(j).get_mpq_t(), in(0, j).get_mpq_t(), 1);
                guard(out(j));
            }
            return;
        case Op::Third:
            for (int j = 0; j < ins.dim; ++j) {
                out(j) = in(0, j) / 3;
                guard(out(j));
            }
            return;
        case Op::Tuple: {
            int o = 0;
            for (std::size_t i = 0; i < ins.in.size(); ++i)
                for (int j = 0; j < ins.in_dims[i]; ++j)
                    out(o++) = in(static_cast<int>(i), j);
            return;
        }
        case Op::Comp: {
            const Program& p = ins.node->kids[0].program();
            Frame& fr = frame(p);
            std::size_t n = 0;
            for (int d : ins.in_dims)
                n += static_cast<std::size_t>(d);
            fr.args.resize(n);
            n = 0;
            for (std::size_t i = 0; i < ins.in.size(); ++i)
                for (int j = 0; j < ins.in_dims[i]; ++j)
                    fr.args[n++] = in(static_cast<int>(i), j);
            run(p, fr.args, nullptr, fr.slots);
            for (int j = 0; j < ins.dim; ++j)
                out(j) = fr.slots[static_cast<std::size_t>(p.root + j)];
            return;
        }
        case Op::Lode:
            lode(ins, args, s);
            return;
        }
    }

    void lode(const Instr& ins, const Vec& args, Vec& s)
    {
        const std::size_t steps = bit_length(natural_arg(args, "lode iteration").get_num());
        const Expr& init = ins.node->kids[0];
        const Expr& body = ins.node->kids[1];
        Vec y(args.begin() + 1, args.end());
        const Program& ip = init.program();
        Frame& init_frame = frame(ip);
        run(ip, y, nullptr, init_frame.slots);
        Vec state = result(ip, init_frame.slots);
        if (steps > 0) {
            const Program& bp = body.program();
            Vec& slots = frame(bp).slots;
            Vec body_args;
            body_args.reserve(args.size());
            body_args.emplace_back(0);
            body_args.insert(body_args.end(), y.begin(), y.end());
            Integer t_val = 1;  // 2^t
            for (std::size_t t = 0; t < steps; ++t) {
                body_args[0] = Rational(t_val - 1);
                run(bp, body_args, &state, slots);
                for (std::size_t j = 0; j < state.size(); ++j) {
                    state[j] += slots[static_cast<std::size_t>(bp.root) + j];
                    guard(state[j]);
                }
                t_val *= 2;
            }
        }
        for (int j = 0; j < ins.dim; ++j)
            s[static_cast<std::size_t>(ins.out + j)] = std::move(state[static_cast<std::size_t>(j)]);
    }
};

}  // namespace

const Program& Expr::program() const
{
    std::call_once(node_->compiled, [this] {
        auto p = std::make_unique<Program>();
        compile_frame(*this, *p);
        node_->program = std::move(p);
    });
    return *node_->program;
}

Vec eval(const Expr& e, const Vec& args, const EvalOptions& opts)
{
    if (!e.valid())
        throw std::invalid_argument("eval of an empty expression");
    if (static_cast<int>(args.size()) < e.arity())
        throw SortError("expression of arity " + std::to_string(e.arity()) + " given " + std::to_string(args.size()) +
                        " arguments");
    if (e.f_arity() > 0)
        throw SortError("expression refers to state variables outside a lode body");
    for (int i : e.nat_inputs())
        if (!is_natural(args[static_cast<std::size_t>(i)]))
            throw SortError("argument x" + std::to_string(i) + " = " + to_string(args[static_cast<std::size_t>(i)]) +
                            " must be a natural number");
    Runner r(opts);
    const Program& p = e.program();
    Vec slots;
    r.run(p, args, nullptr, slots);
    return r.result(p, slots);
}

}  // namespace ldl
