#include "ldl/neural_extract.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ldl {

NetworkParseError::NetworkParseError(std::size_t line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line)
{
}

Network::Network(std::size_t inputs, std::vector<Layer> layers) : inputs_(inputs), layers_(std::move(layers))
{
    if (layers_.empty())
        throw ShapeError("a network needs at least one layer");
    std::size_t cols = inputs_;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const Layer& l = layers_[k];
        std::string where = "layer " + std::to_string(k + 1);
        if (l.cols != cols)
            throw ShapeError(where + " reads " + std::to_string(l.cols) + " columns, previous layer has " +
                             std::to_string(cols));
        if (l.rows.empty())
            throw ShapeError(where + " has no neurons");
        if (l.bias.size() != l.rows.size() || l.activated.size() != l.rows.size())
            throw ShapeError(where + " has bias or activation rows of the wrong length");
        for (const auto& row : l.rows)
            for (const auto& [j, w] : row)
                if (j >= l.cols)
                    throw ShapeError(where + " refers to column " + std::to_string(j));
        cols = l.rows.size();
    }
}

std::size_t Network::outputs() const { return layers_.back().size(); }

std::size_t Network::depth() const
{
    std::size_t d = 0;
    for (const auto& l : layers_)
        for (bool a : l.activated)
            if (a) {
                ++d;
                break;
            }
    return d;
}

std::size_t Network::neurons() const
{
    std::size_t n = 0;
    for (const auto& l : layers_)
        n += l.size();
    return n;
}

Vec net_eval(const Network& net, const Vec& inputs)
{
    if (inputs.size() != net.inputs())
        throw ShapeError("network takes " + std::to_string(net.inputs()) + " inputs, given " +
                         std::to_string(inputs.size()));
    Vec cur = inputs, next;
    Rational prod;
    for (const auto& l : net.layers()) {
        next.assign(l.size(), Rational(0));
        for (std::size_t i = 0; i < l.size(); ++i) {
            Rational& acc = next[i];
            acc = l.bias[i];
            for (const auto& [j, w] : l.rows[i]) {
                mpq_mul(prod.get_mpq_t(), w.get_mpq_t(), cur[j].get_mpq_t());
                acc += prod;
            }
            if (l.activated[i])
                acc = signbar(acc);
        }
        std::swap(cur, next);
    }
    return cur;
}

std::string net_serialize(const Network& net)
{
    std::string out = "layers " + std::to_string(net.layers().size()) + " inputs " + std::to_string(net.inputs()) +
                      " outputs " + std::to_string(net.outputs()) + "\n";
    std::size_t k = 0;
    for (const auto& l : net.layers()) {
        out += "layer " + std::to_string(++k) + " rows " + std::to_string(l.size()) + " cols " +
               std::to_string(l.cols) + "\n";
        for (const auto& row : l.rows) {
            std::vector<std::string> dense(l.cols, "0");
            for (const auto& [j, w] : row)
                dense[j] = to_string(w);
            for (std::size_t j = 0; j < dense.size(); ++j)
                out += (j ? " " : "") + dense[j];
            out += "\n";
        }
        for (std::size_t i = 0; i < l.size(); ++i)
            out += (i ? " " : "") + to_string(l.bias[i]);
        out += "\n";
        for (std::size_t i = 0; i < l.size(); ++i)
            out += std::string(i ? " " : "") + (l.activated[i] ? "1" : "0");
        out += "\n";
    }
    return out;
}

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : in_(std::string(text)) {}

    std::vector<std::string> next(const char* what)
    {
        std::string raw;
        if (!std::getline(in_, raw))
            throw NetworkParseError(line_ + 1, std::string("unexpected end of file, expected ") + what);
        ++line_;
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        return tok;
    }

    bool at_end()
    {
        std::string rest;
        while (std::getline(in_, rest)) {
            ++line_;
            if (rest.find_first_not_of(" \t\r") != std::string::npos)
                return false;
        }
        return true;
    }

    std::size_t line() const { return line_; }

private:
    std::istringstream in_;
    std::size_t line_ = 0;
};

std::size_t parse_count(const std::string& tok, std::size_t line)
{
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        if (!tok.empty() && tok[0] != '-')
            v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (tok.empty() || pos != tok.size())
        throw NetworkParseError(line, "bad count '" + tok + "'");
    return v;
}

Vec parse_row(LineReader& r, std::size_t n, const char* what)
{
    auto tok = r.next(what);
    if (tok.size() != n)
        throw NetworkParseError(r.line(), std::string(what) + " has " + std::to_string(tok.size()) +
                                              " entries, expected " + std::to_string(n));
    Vec out;
    out.reserve(n);
    for (const auto& t : tok) {
        try {
            out.push_back(parse_rational(t));
        } catch (const std::exception& e) {
            throw NetworkParseError(r.line(), "bad rational '" + t + "'");
        }
    }
    return out;
}

}  // namespace

Network net_deserialize(std::string_view text)
{
    LineReader r(text);
    auto head = r.next("header");
    if (head.size() != 6 || head[0] != "layers" || head[2] != "inputs" || head[4] != "outputs")
        throw NetworkParseError(r.line(), "expected 'layers L inputs d outputs d'");
    std::size_t count = parse_count(head[1], r.line());
    std::size_t inputs = parse_count(head[3], r.line());
    std::size_t outputs = parse_count(head[5], r.line());
    std::vector<Layer> layers;
    std::size_t cols = inputs;
    for (std::size_t k = 1; k <= count; ++k) {
        auto lh = r.next("layer header");
        if (lh.size() != 6 || lh[0] != "layer" || lh[2] != "rows" || lh[4] != "cols")
            throw NetworkParseError(r.line(), "expected 'layer k rows m cols n'");
        if (parse_count(lh[1], r.line()) != k)
            throw NetworkParseError(r.line(), "layers out of order");
        std::size_t m = parse_count(lh[3], r.line());
        Layer l;
        l.cols = parse_count(lh[5], r.line());
        if (l.cols != cols)
            throw NetworkParseError(r.line(), "layer " + std::to_string(k) + " has " + std::to_string(l.cols) +
                                                  " columns, previous layer has " + std::to_string(cols));
        if (m == 0)
            throw NetworkParseError(r.line(), "layer " + std::to_string(k) + " has no neurons");
        for (std::size_t i = 0; i < m; ++i) {
            Vec dense = parse_row(r, l.cols, "weight row");
            std::vector<std::pair<std::size_t, Rational>> row;
            for (std::size_t j = 0; j < dense.size(); ++j)
                if (dense[j] != 0)
                    row.emplace_back(j, dense[j]);
            l.rows.push_back(std::move(row));
        }
        l.bias = parse_row(r, m, "bias row");
        Vec mask = parse_row(r, m, "activation row");
        for (const auto& v : mask) {
            if (v != 0 && v != 1)
                throw NetworkParseError(r.line(), "activation entries must be 0 or 1");
            l.activated.push_back(v == 1);
        }
        cols = m;
        layers.push_back(std::move(l));
    }
    if (cols != outputs)
        throw NetworkParseError(r.line(), "last layer has " + std::to_string(cols) + " rows, header says " +
                                              std::to_string(outputs) + " outputs");
    if (!r.at_end())
        throw NetworkParseError(r.line(), "trailing content after the last layer");
    try {
        return Network(inputs, std::move(layers));
    } catch (const ShapeError& e) {
        throw NetworkParseError(r.line(), e.what());
    }
}

namespace {

// c + sum w_i s_i over sources s_i (free inputs first, then sgnb neurons);
// terms sorted by source, no zero weights.
struct Lin {
    Rational c;
    std::vector<std::pair<int, Rational>> terms;

    bool constant() const { return terms.empty(); }
    friend bool operator<(const Lin& a, const Lin& b)
    {
        if (a.c != b.c)
            return a.c < b.c;
        return a.terms < b.terms;
    }
};

Lin combine(const Lin& a, const Rational& ka, const Lin& b, const Rational& kb)
{
    Lin out;
    out.c = ka * a.c + kb * b.c;
    auto i = a.terms.begin(), j = b.terms.begin();
    while (i != a.terms.end() || j != b.terms.end()) {
        if (j == b.terms.end() || (i != a.terms.end() && i->first < j->first)) {
            out.terms.emplace_back(i->first, ka * i->second);
            ++i;
        } else if (i == a.terms.end() || j->first < i->first) {
            out.terms.emplace_back(j->first, kb * j->second);
            ++j;
        } else {
            Rational w = ka * i->second + kb * j->second;
            if (w != 0)
                out.terms.emplace_back(i->first, std::move(w));
            ++i;
            ++j;
        }
    }
    if (ka == 0 || kb == 0)
        std::erase_if(out.terms, [](const auto& t) { return t.second == 0; });
    return out;
}

Lin scale(const Lin& a, const Rational& k) { return combine(a, k, Lin{}, 0); }

Lin constant_lin(const Rational& c) { return Lin{c, {}}; }

using SymVec = std::vector<Lin>;

class Unroller {
public:
    Unroller(const ExtractOptions& opts, int arity) : opts_(opts)
    {
        for (int i = 0; i < arity; ++i) {
            if (auto it = opts.fixed.find(i); it != opts.fixed.end()) {
                inputs_.push_back(constant_lin(it->second));
            } else {
                free_.push_back(i);
                int id = static_cast<int>(depth_.size());
                depth_.push_back(0);
                pre_.emplace_back();
                inputs_.push_back(Lin{0, {{id, Rational(1)}}});
            }
        }
    }

    SymVec top(const Expr& e)
    {
        Frame fr{&inputs_, nullptr, {}};
        return run(e, fr);
    }

    const std::vector<int>& free_inputs() const { return free_; }
    std::size_t budget_used() const { return budget_pos_; }
    const std::vector<int>& depth() const { return depth_; }
    const std::vector<Lin>& pre() const { return pre_; }

private:
    struct Frame {
        const SymVec* args;
        const SymVec* state;
        std::unordered_map<const Node*, SymVec> memo;
    };

    const ExtractOptions& opts_;
    SymVec inputs_;
    std::vector<int> free_;
    std::vector<int> depth_;
    std::vector<Lin> pre_;
    std::map<Lin, int> neuron_of_;
    std::size_t budget_pos_ = 0;

    Lin neuron(Lin pre)
    {
        if (pre.constant())
            return constant_lin(signbar(pre.c));
        auto it = neuron_of_.find(pre);
        if (it == neuron_of_.end()) {
            int d = 0;
            for (const auto& [s, w] : pre.terms)
                d = std::max(d, depth_[static_cast<std::size_t>(s)]);
            int id = static_cast<int>(depth_.size());
            depth_.push_back(d + 1);
            pre_.push_back(pre);
            it = neuron_of_.emplace(std::move(pre), id).first;
        }
        return Lin{0, {{it->second, Rational(1)}}};
    }

    static const Lin& at(const SymVec* v, int i, const char* what)
    {
        if (!v || i < 0 || static_cast<std::size_t>(i) >= v->size())
            throw SortError(std::string(what) + std::to_string(i) + " is not bound");
        return (*v)[static_cast<std::size_t>(i)];
    }

    static const Integer& known_natural(const Lin& v, const char* what)
    {
        if (!v.constant())
            throw NotNeuralError(std::string(what) + " depends on a free input");
        if (!is_natural(v.c))
            throw SortError(std::string(what) + " of " + to_string(v.c) + ", which is not a natural number");
        return v.c.get_num();
    }

    std::size_t iterations(const Lin& v)
    {
        if (v.constant())
            return bit_length(known_natural(v, "lode iteration"));
        if (budget_pos_ >= opts_.budget.size())
            throw NotNeuralError("lode iteration count depends on a free input and the budget has " +
                                 std::to_string(opts_.budget.size()) + " entries");
        return opts_.budget[budget_pos_++];
    }

    SymVec run(const Expr& e, Frame& fr)
    {
        if (auto it = fr.memo.find(e.id()); it != fr.memo.end())
            return it->second;
        SymVec out = compute(e, fr);
        fr.memo.emplace(e.id(), out);
        return out;
    }

    SymVec pointwise(const Expr& e, Frame& fr, const Rational& ka, const Rational& kb)
    {
        SymVec a = run(e.kids()[0], fr), b = run(e.kids()[1], fr);
        SymVec out;
        for (std::size_t j = 0; j < a.size(); ++j)
            out.push_back(combine(a[j], ka, b[j], kb));
        return out;
    }

    SymVec compute(const Expr& e, Frame& fr)
    {
        const auto& k = e.kids();
        switch (e.op()) {
        case Op::Zero:
            return {constant_lin(0)};
        case Op::One:
            return {constant_lin(1)};
        case Op::Len:
            return {constant_lin(Rational(Integer(bit_length(known_natural(at(fr.args, 0, "x"), "len")))))};
        case Op::Proj:
        case Op::XVar:
            return {at(fr.args, e.index(), "argument x")};
        case Op::FVar:
            return {at(fr.state, e.index(), "state variable f")};
        case Op::Add:
            return pointwise(e, fr, 1, 1);
        case Op::Sub:
            return pointwise(e, fr, 1, -1);
        case Op::Mul: {
            SymVec a = run(k[0], fr), b = run(k[1], fr);
            SymVec out;
            for (std::size_t j = 0; j < a.size(); ++j) {
                if (a[j].constant())
                    out.push_back(scale(b[j], a[j].c));
                else if (b[j].constant())
                    out.push_back(scale(a[j], b[j].c));
                else
                    throw NotNeuralError("product of two input-dependent values");
            }
            return out;
        }
        case Op::SignBar: {
            SymVec out;
            for (auto& v : run(k[0], fr))
                out.push_back(neuron(std::move(v)));
            return out;
        }
        case Op::Half:
        case Op::Third: {
            Rational f = e.op() == Op::Half ? Rational(1, 2) : Rational(1, 3);
            SymVec out;
            for (const auto& v : run(k[0], fr))
                out.push_back(scale(v, f));
            return out;
        }
        case Op::Tuple: {
            SymVec out;
            for (const auto& p : k) {
                SymVec v = run(p, fr);
                out.insert(out.end(), v.begin(), v.end());
            }
            return out;
        }
        case Op::Comp: {
            SymVec args;
            for (std::size_t i = 1; i < k.size(); ++i) {
                SymVec v = run(k[i], fr);
                args.insert(args.end(), v.begin(), v.end());
            }
            Frame sub{&args, nullptr, {}};
            return run(k[0], sub);
        }
        case Op::Lode: {
            std::size_t steps = iterations(at(fr.args, 0, "x"));
            SymVec y(fr.args->begin() + 1, fr.args->end());
            Frame init{&y, nullptr, {}};
            SymVec state = run(k[0], init);
            SymVec body_args = y;
            body_args.insert(body_args.begin(), constant_lin(0));
            Integer pow = 1;
            for (std::size_t t = 0; t < steps; ++t) {
                body_args[0] = constant_lin(Rational(pow - 1));
                Frame body{&body_args, &state, {}};
                SymVec delta = run(k[1], body);
                for (std::size_t j = 0; j < state.size(); ++j)
                    state[j] = combine(state[j], 1, delta[j], 1);
                pow *= 2;
            }
            return state;
        }
        }
        throw std::logic_error("unknown operation");
    }
};

// Lays neurons out by depth. A value needed in layer k reads the neurons of
// layer k-1 directly and everything older through one identity neuron per
// layer holding the older partial sum.
class Layout {
public:
    Layout(const std::vector<int>& depth, const std::vector<Lin>& pre, std::size_t inputs)
        : depth_(depth), pre_(pre), column_(depth.size(), 0)
    {
        for (std::size_t i = 0; i < inputs; ++i)
            column_[i] = i;
        inputs_ = inputs;
    }

    Network build(const SymVec& outputs)
    {
        std::vector<char> live(depth_.size(), 0);
        std::vector<int> todo;
        for (const auto& o : outputs)
            for (const auto& [s, w] : o.terms)
                todo.push_back(s);
        int max_depth = 0;
        while (!todo.empty()) {
            int s = todo.back();
            todo.pop_back();
            if (live[static_cast<std::size_t>(s)])
                continue;
            live[static_cast<std::size_t>(s)] = 1;
            max_depth = std::max(max_depth, depth_[static_cast<std::size_t>(s)]);
            for (const auto& [t, w] : pre_[static_cast<std::size_t>(s)].terms)
                todo.push_back(t);
        }
        layers_.assign(static_cast<std::size_t>(max_depth) + 1, Layer{});
        for (std::size_t s = inputs_; s < depth_.size(); ++s) {
            if (!live[s])
                continue;
            int k = depth_[s];
            column_[s] = append(k, pre_[s], true);
        }
        for (const auto& o : outputs)
            append(max_depth + 1, o, false);
        std::size_t cols = inputs_;
        for (auto& l : layers_) {
            l.cols = cols;
            cols = l.size();
        }
        return Network(inputs_, std::move(layers_));
    }

private:
    const std::vector<int>& depth_;
    const std::vector<Lin>& pre_;
    std::vector<std::size_t> column_;
    std::size_t inputs_;
    std::vector<Layer> layers_;
    std::map<std::pair<int, Lin>, std::size_t> carry_;

    // Adds a neuron computing `form` to layer k (1-based), returns its column.
    std::size_t append(int k, const Lin& form, bool activated)
    {
        Lin recent, old;
        recent.c = form.c;
        for (const auto& t : form.terms) {
            if (depth_[static_cast<std::size_t>(t.first)] == k - 1)
                recent.terms.push_back(t);
            else
                old.terms.push_back(t);
        }
        std::vector<std::pair<std::size_t, Rational>> row;
        for (const auto& [s, w] : recent.terms)
            row.emplace_back(column_[static_cast<std::size_t>(s)], w);
        if (!old.terms.empty()) {
            // carried up to a factor, so rescaled partial sums share a neuron
            Rational lead = old.terms.front().second;
            std::size_t col = carry(k - 1, scale(old, 1 / lead));
            row.emplace_back(col, lead);
        }
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        Layer& l = layers_[static_cast<std::size_t>(k - 1)];
        l.rows.push_back(std::move(row));
        l.bias.push_back(recent.c);
        l.activated.push_back(activated);
        return l.size() - 1;
    }

    std::size_t carry(int k, const Lin& form)
    {
        auto key = std::pair{k, form};
        if (auto it = carry_.find(key); it != carry_.end())
            return it->second;
        std::size_t col = append(k, form, false);
        carry_.emplace(std::move(key), col);
        return col;
    }
};

}  // namespace

Extraction extract(const Expr& e, const ExtractOptions& opts)
{
    if (!e.valid())
        throw std::invalid_argument("extract of an empty expression");
    if (e.f_arity() > 0)
        throw SortError("expression refers to state variables outside a lode body");
    for (const auto& [i, v] : opts.fixed)
        if (i < 0 || i >= e.arity())
            throw std::invalid_argument("fixed input x" + std::to_string(i) + " is not an input of the expression");
    Unroller u(opts, e.arity());
    SymVec out = u.top(e);
    Layout layout(u.depth(), u.pre(), u.free_inputs().size());
    return {layout.build(out), u.free_inputs(), u.budget_used()};
}

}  // namespace ldl
