#include "expr_internal.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace ldl {

std::string_view op_name(Op op)
{
    switch (op) {
    case Op::Zero: return "zero";
    case Op::One: return "one";
    case Op::Len: return "len";
    case Op::Proj: return "proj";
    case Op::XVar: return "var";
    case Op::FVar: return "var";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::SignBar: return "sgnb";
    case Op::Half: return "half";
    case Op::Third: return "third";
    case Op::Tuple: return "vec";
    case Op::Comp: return "comp";
    case Op::Lode: return "lode";
    }
    return "?";
}

Rational signbar(const Rational& x)
{
    static const Rational quarter(1, 4), three_quarters(3, 4);
    if (x <= quarter)
        return 0;
    if (x >= three_quarters)
        return 1;
    return 2 * x - Rational(1, 2);
}

std::string VarRef::str() const { return (kind == Kind::X ? "x" : "f") + std::to_string(index); }

namespace {

SortCond join(const SortCond& a, const SortCond& b)
{
    if (a.real || b.real)
        return SortCond::real_sort();
    SortCond r = a;
    r.xs.insert(b.xs.begin(), b.xs.end());
    r.fs.insert(b.fs.begin(), b.fs.end());
    return r;
}

void absorb_requirements(Node& n, const Expr& k)
{
    n.nat_x.insert(k.nat_inputs().begin(), k.nat_inputs().end());
    n.nat_f.insert(k.id()->nat_f.begin(), k.id()->nat_f.end());
    n.arity = std::max(n.arity, k.arity());
    n.f_arity = std::max(n.f_arity, k.f_arity());
}

std::shared_ptr<Node> leaf(Op op, int arity, SortCond out)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->arity = arity;
    n->outs = {std::move(out)};
    return n;
}

std::shared_ptr<Node> elementwise(Op op, const std::vector<Expr>& ks)
{
    for (const auto& k : ks)
        if (!k.valid())
            throw std::invalid_argument(std::string(op_name(op)) + " of an empty expression");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = ks;
    std::size_t d = ks[0].dim();
    for (const auto& k : ks) {
        if (k.dim() != d)
            throw SortError(std::string(op_name(op)) + " of operands with " + std::to_string(d) + " and " +
                            std::to_string(k.dim()) + " components");
        absorb_requirements(*n, k);
    }
    for (std::size_t j = 0; j < d; ++j) {
        SortCond c;
        switch (op) {
        case Op::Add:
        case Op::Mul:
            c = join(ks[0].out_sorts()[j], ks[1].out_sorts()[j]);
            break;
        case Op::SignBar:
            // sgnb maps integers to {0,1}
            c = ks[0].out_sorts()[j];
            break;
        default:
            c = SortCond::real_sort();
        }
        n->outs.push_back(std::move(c));
    }
    return n;
}

}  // namespace

Expr Expr::make(std::shared_ptr<Node> n) { return Expr(std::move(n)); }

Expr Expr::zero() { return make(leaf(Op::Zero, 0, SortCond::nat())); }
Expr Expr::one() { return make(leaf(Op::One, 0, SortCond::nat())); }

Expr Expr::len()
{
    auto n = leaf(Op::Len, 1, SortCond::nat());
    n->nat_x = {0};
    return make(std::move(n));
}

Expr Expr::proj(int i, int k)
{
    if (i < 0 || i >= k)
        throw SortError("projection index " + std::to_string(i) + " outside arity " + std::to_string(k));
    auto n = leaf(Op::Proj, k, SortCond{false, {i}, {}});
    n->a = i;
    n->b = k;
    return make(std::move(n));
}

Expr Expr::x(int i)
{
    if (i < 0)
        throw SortError("negative variable index");
    auto n = leaf(Op::XVar, i + 1, SortCond{false, {i}, {}});
    n->a = i;
    return make(std::move(n));
}

Expr Expr::f(int i)
{
    if (i < 0)
        throw SortError("negative state index");
    auto n = leaf(Op::FVar, 0, SortCond{false, {}, {i}});
    n->a = i;
    n->f_arity = i + 1;
    return make(std::move(n));
}

Expr Expr::add(Expr a, Expr b) { return make(elementwise(Op::Add, {std::move(a), std::move(b)})); }
Expr Expr::sub(Expr a, Expr b) { return make(elementwise(Op::Sub, {std::move(a), std::move(b)})); }
Expr Expr::mul(Expr a, Expr b) { return make(elementwise(Op::Mul, {std::move(a), std::move(b)})); }
Expr Expr::sgnb(Expr a) { return make(elementwise(Op::SignBar, {std::move(a)})); }
Expr Expr::half(Expr a) { return make(elementwise(Op::Half, {std::move(a)})); }
Expr Expr::third(Expr a) { return make(elementwise(Op::Third, {std::move(a)})); }

Expr Expr::tuple(std::vector<Expr> parts)
{
    if (parts.empty())
        throw SortError("vec needs at least one component");
    auto n = std::make_shared<Node>();
    n->op = Op::Tuple;
    for (const auto& p : parts) {
        if (!p.valid())
            throw std::invalid_argument("vec of an empty expression");
        absorb_requirements(*n, p);
        n->outs.insert(n->outs.end(), p.out_sorts().begin(), p.out_sorts().end());
    }
    n->kids = std::move(parts);
    return make(std::move(n));
}

Expr Expr::comp(Expr fn, std::vector<Expr> args)
{
    if (!fn.valid())
        throw std::invalid_argument("comp of an empty expression");
    if (fn.f_arity() > 0)
        throw SortError("the function of a comp refers to state variable f" + std::to_string(fn.f_arity() - 1));
    auto n = std::make_shared<Node>();
    n->op = Op::Comp;
    std::vector<SortCond> in;
    for (const auto& a : args) {
        if (!a.valid())
            throw std::invalid_argument("comp argument is an empty expression");
        absorb_requirements(*n, a);
        in.insert(in.end(), a.out_sorts().begin(), a.out_sorts().end());
    }
    if (static_cast<int>(in.size()) < fn.arity())
        throw SortError("comp supplies " + std::to_string(in.size()) + " values to a function of arity " +
                        std::to_string(fn.arity()));
    for (int i : fn.nat_inputs()) {
        const SortCond& c = in[static_cast<std::size_t>(i)];
        if (c.real)
            throw SortError("comp passes a REAL value to natural-number input x" + std::to_string(i));
        n->nat_x.insert(c.xs.begin(), c.xs.end());
        n->nat_f.insert(c.fs.begin(), c.fs.end());
    }
    for (const auto& o : fn.out_sorts()) {
        SortCond c = o.real ? SortCond::real_sort() : SortCond::nat();
        if (!o.real)
            for (int i : o.xs)
                c = join(c, in[static_cast<std::size_t>(i)]);
        n->outs.push_back(std::move(c));
    }
    n->kids.reserve(args.size() + 1);
    n->kids.push_back(std::move(fn));
    for (auto& a : args)
        n->kids.push_back(std::move(a));
    return make(std::move(n));
}

Expr Expr::lode(Expr init, Expr body)
{
    if (!init.valid() || !body.valid())
        throw std::invalid_argument("lode of an empty expression");
    if (init.f_arity() > 0)
        throw SortError("lode initial value refers to state variable f" + std::to_string(init.f_arity() - 1));
    const std::size_t d = init.dim();
    if (body.dim() != d)
        throw SortError("lode body has " + std::to_string(body.dim()) + " components, state has " +
                        std::to_string(d));
    if (body.f_arity() > static_cast<int>(d))
        throw SortError("lode body refers to f" + std::to_string(body.f_arity() - 1) + " beyond the state");
    std::vector<VarRef> fv;
    for (std::size_t j = 0; j < d; ++j)
        fv.push_back(VarRef::f(static_cast<int>(j)));
    if (!check_essentially_linear(body, fv))
        throw LinearityError("lode body is not essentially linear in its state");

    auto n = std::make_shared<Node>();
    n->op = Op::Lode;

    const auto& io = init.out_sorts();
    const auto& bo = body.out_sorts();
    std::vector<bool> nat(d);
    for (std::size_t j = 0; j < d; ++j)
        nat[j] = !io[j].real;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t j = 0; j < d; ++j) {
            if (!nat[j])
                continue;
            bool ok = !bo[j].real;
            for (int k : bo[j].fs)
                ok = ok && nat[static_cast<std::size_t>(k)];
            if (!ok) {
                nat[j] = false;
                changed = true;
            }
        }
    }
    for (int k : body.id()->nat_f)
        if (!nat[static_cast<std::size_t>(k)])
            throw SortError("lode body needs state f" + std::to_string(k) + " natural but it is REAL");

    // input i of init is input i+1 of the lode; body input 0 is the
    // iteration value, body input i >= 1 is lode input i
    std::vector<std::set<int>> cond(d);
    for (std::size_t j = 0; j < d; ++j) {
        for (int i : io[j].xs)
            cond[j].insert(i + 1);
        for (int i : bo[j].xs)
            if (i > 0)
                cond[j].insert(i);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t j = 0; j < d; ++j)
            for (int k : bo[j].fs) {
                auto before = cond[j].size();
                cond[j].insert(cond[static_cast<std::size_t>(k)].begin(), cond[static_cast<std::size_t>(k)].end());
                changed = changed || cond[j].size() != before;
            }
    }
    for (std::size_t j = 0; j < d; ++j)
        n->outs.push_back(nat[j] ? SortCond{false, cond[j], {}} : SortCond::real_sort());

    n->nat_x.insert(0);
    for (int i : init.nat_inputs())
        n->nat_x.insert(i + 1);
    for (int i : body.nat_inputs())
        if (i > 0)
            n->nat_x.insert(i);
    for (int k : body.id()->nat_f)
        n->nat_x.insert(cond[static_cast<std::size_t>(k)].begin(), cond[static_cast<std::size_t>(k)].end());
    n->arity = std::max({1, init.arity() + 1, body.arity()});
    n->kids = {std::move(init), std::move(body)};
    return make(std::move(n));
}

Op Expr::op() const { return node_->op; }
int Expr::index() const { return node_->a; }
int Expr::count() const { return node_->b; }
const std::vector<Expr>& Expr::kids() const { return node_->kids; }
int Expr::arity() const { return node_->arity; }
int Expr::f_arity() const { return node_->f_arity; }
std::size_t Expr::dim() const { return node_->outs.size(); }
const std::vector<SortCond>& Expr::out_sorts() const { return node_->outs; }
const std::set<int>& Expr::nat_inputs() const { return node_->nat_x; }

Expr operator+(const Expr& a, const Expr& b) { return Expr::add(a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sub(a, b); }
Expr operator-(const Expr& a)
{
    Expr z = Expr::zero();
    if (a.dim() > 1)
        z = Expr::tuple(std::vector<Expr>(a.dim(), z));
    return Expr::sub(z, a);
}
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul(a, b); }

// ---- degree analysis ----

namespace {

class WeightAnalysis {
public:
    std::vector<int> run(const Expr& e, const std::vector<int>& wx, const std::vector<int>& wf)
    {
        std::map<const Node*, std::vector<int>> memo;
        return visit(e, wx, wf, memo);
    }

private:
    using Key = std::pair<const Node*, std::vector<int>>;
    std::map<Key, std::vector<int>> calls_;

    static int at(const std::vector<int>& w, int i)
    {
        return i < static_cast<int>(w.size()) ? w[static_cast<std::size_t>(i)] : 0;
    }

    std::vector<int> visit(const Expr& e, const std::vector<int>& wx, const std::vector<int>& wf,
                           std::map<const Node*, std::vector<int>>& memo)
    {
        if (auto it = memo.find(e.id()); it != memo.end())
            return it->second;
        std::vector<int> r;
        const auto& k = e.kids();
        switch (e.op()) {
        case Op::Zero:
        case Op::One:
            r = {0};
            break;
        case Op::Len:
            if (at(wx, 0) > 0)
                throw UnsupportedError("degree of len applied to a weighted variable");
            r = {0};
            break;
        case Op::Proj:
        case Op::XVar:
            r = {at(wx, e.index())};
            break;
        case Op::FVar:
            r = {at(wf, e.index())};
            break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul: {
            auto a = visit(k[0], wx, wf, memo), b = visit(k[1], wx, wf, memo);
            r.resize(a.size());
            for (std::size_t j = 0; j < a.size(); ++j)
                r[j] = e.op() == Op::Mul ? a[j] + b[j] : std::max(a[j], b[j]);
            break;
        }
        case Op::SignBar:
            r.assign(e.dim(), 0);
            break;
        case Op::Half:
        case Op::Third:
            r = visit(k[0], wx, wf, memo);
            break;
        case Op::Tuple:
            for (const auto& p : k) {
                auto w = visit(p, wx, wf, memo);
                r.insert(r.end(), w.begin(), w.end());
            }
            break;
        case Op::Comp: {
            std::vector<int> in;
            for (std::size_t i = 1; i < k.size(); ++i) {
                auto w = visit(k[i], wx, wf, memo);
                in.insert(in.end(), w.begin(), w.end());
            }
            Key key{k[0].id(), in};
            if (auto it = calls_.find(key); it != calls_.end()) {
                r = it->second;
            } else {
                std::map<const Node*, std::vector<int>> inner;
                r = visit(k[0], in, {}, inner);
                calls_.emplace(std::move(key), r);
            }
            break;
        }
        case Op::Lode:
            for (int i = 0; i < e.arity(); ++i)
                if (at(wx, i) > 0)
                    throw UnsupportedError("degree of a lode whose arguments depend on a weighted variable");
            r.assign(e.dim(), 0);
            break;
        }
        memo.emplace(e.id(), r);
        return r;
    }
};

}  // namespace

std::vector<int> weights(const Expr& e, const std::vector<int>& wx, const std::vector<int>& wf)
{
    return WeightAnalysis{}.run(e, wx, wf);
}

int degree(const VarRef& v, const Expr& e)
{
    std::vector<int> wx, wf;
    auto& w = v.kind == VarRef::Kind::X ? wx : wf;
    w.assign(static_cast<std::size_t>(v.index) + 1, 0);
    w.back() = 1;
    auto r = weights(e, wx, wf);
    return *std::max_element(r.begin(), r.end());
}

bool check_essentially_linear(const Expr& body, const std::vector<VarRef>& fvars)
{
    std::vector<int> wx, wf;
    for (const auto& v : fvars) {
        auto& w = v.kind == VarRef::Kind::X ? wx : wf;
        if (static_cast<int>(w.size()) <= v.index)
            w.resize(static_cast<std::size_t>(v.index) + 1, 0);
        w[static_cast<std::size_t>(v.index)] = 1;
    }
    auto r = weights(body, wx, wf);
    return std::all_of(r.begin(), r.end(), [](int d) { return d <= 1; });
}

// ---- structural predicates ----

namespace {

template <class Visit>
void walk(const Expr& e, Visit&& visit)
{
    std::unordered_set<const Node*> seen;
    std::vector<Expr> stack{e};
    while (!stack.empty()) {
        Expr cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur.id()).second)
            continue;
        visit(cur);
        for (const auto& k : cur.kids())
            stack.push_back(k);
    }
}

}  // namespace

void validate(const Expr& e)
{
    std::set<std::pair<const Node*, bool>> seen;
    std::vector<std::pair<Expr, bool>> stack{{e, false}};
    while (!stack.empty()) {
        auto [cur, in_body] = stack.back();
        stack.pop_back();
        if (!seen.insert({cur.id(), in_body}).second)
            continue;
        if (cur.op() == Op::Mul && !in_body)
            throw SortError("mul outside a lode body");
        const auto& k = cur.kids();
        for (std::size_t i = 0; i < k.size(); ++i)
            stack.emplace_back(k[i], in_body || (cur.op() == Op::Lode && i == 1));
    }
}

bool is_neural(const Expr& e)
{
    bool ok = true;
    walk(e, [&](const Expr& n) {
        if (n.op() == Op::Len || n.op() == Op::Lode || n.op() == Op::Mul || n.op() == Op::FVar)
            ok = false;
    });
    return ok;
}

std::size_t node_count(const Expr& e)
{
    std::size_t n = 0;
    walk(e, [&](const Expr&) { ++n; });
    return n;
}

}  // namespace ldl
