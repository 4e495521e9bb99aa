#include "ldl/tm_compiler.hpp"

#include "ldl/special_functions.hpp"

#include <sstream>

namespace ldl {

namespace {

bool valid_symbol(long s) { return s == 0 || s == 1 || s == 3; }

Expr x(int i) { return Expr::x(i); }
Expr f(int i) { return Expr::f(i); }

// Components 0..k-1 of the inputs, followed by `extra`.
Expr pass_through(int k, std::vector<Expr> extra)
{
    std::vector<Expr> parts;
    for (int i = 0; i < k; ++i)
        parts.push_back(x(i));
    for (auto& e : extra)
        parts.push_back(std::move(e));
    return Expr::tuple(std::move(parts));
}

Expr pick(int i, int k, const Expr& e) { return Expr::comp(Expr::proj(i, k), {e}); }

// Digit in front of 4 * v, for v a leaf.
Expr read_digit(const Expr& v)
{
    return affine(0, {{1, Expr::sgnb(scaled(4, v))}, {2, Expr::sgnb(affine(-2, {{4, v}}))}});
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

long parse_long(const std::string& tok, const std::string& what, std::size_t line)
{
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (tok.empty() || pos != tok.size())
        throw MachineError("line " + std::to_string(line) + ": bad " + what + " '" + tok + "'");
    return v;
}

std::set<int> parse_state_list(const std::string& tok, std::size_t line)
{
    std::set<int> out;
    if (tok.empty())
        return out;
    for (const auto& part : split(tok, ','))
        out.insert(static_cast<int>(parse_long(part, "state", line)));
    return out;
}

std::string join(const std::set<int>& s)
{
    std::string out;
    for (int q : s) {
        if (!out.empty())
            out += ',';
        out += std::to_string(q);
    }
    return out;
}

}  // namespace

TuringMachine::TuringMachine(int states, int init, std::set<int> accept,
                             std::map<std::pair<int, std::uint8_t>, Transition> delta, std::set<int> negative)
    : states_(states), init_(init), accept_(std::move(accept)), negative_(std::move(negative)), delta_(std::move(delta))
{
    auto in_range = [&](int q) { return q >= 0 && q < states_; };
    if (states_ <= 0)
        throw MachineError("a machine needs at least one state");
    if (!in_range(init_))
        throw MachineError("initial state " + std::to_string(init_) + " out of range");
    for (int q : accept_)
        if (!in_range(q))
            throw MachineError("accepting state " + std::to_string(q) + " out of range");
    for (int q : negative_)
        if (!accept_.count(q))
            throw MachineError("negative state " + std::to_string(q) + " is not accepting");
    for (const auto& [key, t] : delta_) {
        if (!in_range(key.first) || !valid_symbol(key.second))
            throw MachineError("transition from an invalid state or symbol");
        if (!in_range(t.next) || !valid_symbol(t.write))
            throw MachineError("transition from state " + std::to_string(key.first) + " to an invalid state or symbol");
    }
    for (int q = 0; q < states_; ++q)
        for (auto s : kSymbols)
            if (!delta_.count({q, s}))
                throw MachineError("missing transition for state " + std::to_string(q) + " symbol " +
                                   std::to_string(s));
}

const Transition& TuringMachine::delta(int q, std::uint8_t sym) const
{
    auto it = delta_.find({q, sym});
    if (it == delta_.end())
        throw MachineError("no transition for state " + std::to_string(q) + " symbol " + std::to_string(sym));
    return it->second;
}

TuringMachine TuringMachine::parse(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    bool have_header = false;
    int states = 0, init = 0;
    std::set<int> accept, negative;
    std::map<std::pair<int, std::uint8_t>, Transition> delta;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto c = raw.find_first_of("#;"); c != std::string::npos)
            raw.erase(c);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        if (!have_header) {
            if (tok.size() < 5 || tok.size() > 6 || tok[0] != "states" || tok[2] != "init" || tok[4] != "accept")
                throw MachineError("line " + std::to_string(lineno) + ": expected 'states N init Q accept q,...'");
            states = static_cast<int>(parse_long(tok[1], "state count", lineno));
            init = static_cast<int>(parse_long(tok[3], "state", lineno));
            accept = parse_state_list(tok.size() == 6 ? tok[5] : "", lineno);
            have_header = true;
            continue;
        }
        if (tok[0] == "negative") {
            if (tok.size() > 2)
                throw MachineError("line " + std::to_string(lineno) + ": expected 'negative q,...'");
            negative = parse_state_list(tok.size() == 2 ? tok[1] : "", lineno);
            continue;
        }
        if (tok.size() != 6 || tok[2] != "->" || (tok[5] != "L" && tok[5] != "R"))
            throw MachineError("line " + std::to_string(lineno) + ": expected 'q s -> q' s' L|R'");
        int q = static_cast<int>(parse_long(tok[0], "state", lineno));
        long s = parse_long(tok[1], "symbol", lineno);
        Transition t;
        t.next = static_cast<int>(parse_long(tok[3], "state", lineno));
        long w = parse_long(tok[4], "symbol", lineno);
        if (!valid_symbol(s) || !valid_symbol(w))
            throw MachineError("line " + std::to_string(lineno) + ": symbols must be 0, 1 or 3");
        t.write = static_cast<std::uint8_t>(w);
        t.move = tok[5] == "L" ? Move::Left : Move::Right;
        if (!delta.emplace(std::pair{q, static_cast<std::uint8_t>(s)}, t).second)
            throw MachineError("line " + std::to_string(lineno) + ": duplicate transition");
    }
    if (!have_header)
        throw MachineError("empty machine description");
    return TuringMachine(states, init, std::move(accept), std::move(delta), std::move(negative));
}

std::string TuringMachine::str() const
{
    std::string out = "states " + std::to_string(states_) + " init " + std::to_string(init_) + " accept " +
                      join(accept_) + "\n";
    if (!negative_.empty())
        out += "negative " + join(negative_) + "\n";
    for (const auto& [key, t] : delta_) {
        out += std::to_string(key.first) + " " + std::to_string(key.second) + " -> " + std::to_string(t.next) + " " +
               std::to_string(t.write) + (t.move == Move::Left ? " L\n" : " R\n");
    }
    return out;
}

Configuration tm_step(const TuringMachine& m, const Configuration& c)
{
    const auto& l = c.l.digits();
    const auto& r = c.r.digits();
    const Transition& t = m.delta(c.q, c.r.at_or_blank(0));
    std::vector<std::uint8_t> nl, nr;
    auto r_tail = r.empty() ? r.end() : r.begin() + 1;
    if (t.move == Move::Right) {
        nl.push_back(t.write);
        nl.insert(nl.end(), l.begin(), l.end());
        nr.assign(r_tail, r.end());
    } else {
        nl.assign(l.empty() ? l.end() : l.begin() + 1, l.end());
        nr.push_back(c.l.at_or_blank(0));
        nr.push_back(t.write);
        nr.insert(nr.end(), r_tail, r.end());
    }
    return {t.next, CantorWord(std::move(nl)).trimmed(), CantorWord(std::move(nr)).trimmed()};
}

Configuration tm_run(const TuringMachine& m, Configuration c, std::size_t steps)
{
    for (std::size_t i = 0; i < steps; ++i)
        c = tm_step(m, c);
    return c;
}

RealConfig config_encode(const Configuration& c) { return {Rational(c.q), gamma_encode(c.l), gamma_encode(c.r)}; }

Configuration config_decode(const RealConfig& rc, std::size_t k)
{
    if (!is_natural(rc.q))
        throw EncodingError("state component " + to_string(rc.q) + " is not a natural number");
    return {static_cast<int>(rc.q.get_num().get_si()), gamma_decode(rc.l, k).trimmed(), gamma_decode(rc.r, k).trimmed()};
}

Expr build_head_read()
{
    return affine(0, {{1, Expr::sgnb(x(0))}, {2, Expr::sgnb(affine(-2, {{1, x(0)}}))}});
}

Expr build_next(const TuringMachine& m)
{
    std::map<std::pair<Integer, Integer>, Vec> table;
    for (int q = 0; q < m.states(); ++q) {
        for (auto s : TuringMachine::kSymbols) {
            const Transition& t = m.delta(q, s);
            table[{q, s}] = Vec{Rational(t.next), Rational(t.write), Rational(t.move == Move::Right ? 1 : 0)};
        }
    }
    // (q, l, r) -> (q, l, r, a, b) with a, b the digits under and left of the head
    Expr reads = pass_through(3, {read_digit(x(2)), read_digit(x(1))});
    // -> (q, l, r, a, b, q', w, d), d = 1 for a right move
    Expr select = pass_through(5, {Expr::comp(build_send2d(4, table), {x(0), x(3)})});

    const Rational q4(1, 4), q16(1, 16);
    Expr d = x(7), not_d = affine(1, {{-1, x(7)}});
    Expr r_tail = affine(0, {{4, x(2)}, {-1, x(3)}});
    Expr l_tail = affine(0, {{4, x(1)}, {-1, x(4)}});
    Expr l_right = affine(0, {{q4, x(1)}, {q4, x(6)}});
    Expr r_left = affine(0, {{q4, x(4)}, {q16, x(6)}, {q4, x(2)}, {-q16, x(3)}});
    Expr write = Expr::tuple({x(5), gate(d, l_right) + gate(not_d, l_tail), gate(d, r_tail) + gate(not_d, r_left)});

    return Expr::comp(write, {Expr::comp(select, {Expr::comp(reads, {x(0), x(1), x(2)})})});
}

Expr build_exec(const TuringMachine& m)
{
    Expr state = Expr::tuple({f(0), f(1), f(2)});
    // The first iteration (x0 = 0) is idle, so tau = 2^t runs t steps.
    Expr on = Expr::sgnb(x(0));
    Expr body = Expr::mul(Expr::tuple({on, on, on}), Expr::comp(build_next(m), {f(0), f(1), f(2)}) - state);
    return Expr::lode(Expr::tuple({x(0), x(1), x(2)}), body);
}

namespace {

// Most significant bit first comparator over (r, p, acc, scale); the lode
// arguments are (iterations, r0, p0). `digit_gain` reads (r, p, acc, scale,
// bit) as x0..x4 and is added to acc each step; scale is multiplied by
// `shrink`.
Expr msb_lode(const Expr& first_scale, const Rational& shrink, const Expr& digit_gain)
{
    Expr init = Expr::tuple({x(0), x(1), Expr::zero(), first_scale});
    Expr delta = Expr::tuple({
        Expr::sub(Expr::zero(), Expr::mul(x(4), x(1))),
        Expr::sub(Expr::zero(), Expr::half(x(1))),
        digit_gain,
        scaled(shrink - 1, x(3)),
    });
    Expr bit = Expr::sgnb(Expr::add(Expr::sub(f(0), f(1)), Expr::one()));
    return Expr::lode(init, Expr::comp(delta, {f(0), f(1), f(2), f(3), bit}));
}

}  // namespace

Expr build_decode(int d)
{
    if (d < 1)
        throw std::invalid_argument("decode needs at least one argument");
    static const Expr single = [] {
        Expr pow2_len = Expr::lode(Expr::one(), f(0));
        // acc gains (1 + 2 bit) * scale, scale 1/4 then /4 per digit
        Expr gain = Expr::add(x(3), scaled(2, Expr::mul(x(4), x(3))));
        Expr core = msb_lode(constant(Rational(1, 4)), Rational(1, 4), gain);
        Expr digits = pick(2, 4, Expr::comp(core, {x(0), x(0), Expr::half(Expr::comp(pow2_len, {x(0)}))}));
        // 0 has no binary digits and encodes as "1"
        return digits + affine(Rational(1, 4), {{Rational(-1, 4), Expr::sgnb(x(0))}});
    }();
    std::vector<Expr> parts;
    for (int i = 0; i < d; ++i)
        parts.push_back(Expr::comp(single, {x(i)}));
    return d == 1 ? Expr::comp(single, {x(0)}) : Expr::tuple(std::move(parts));
}

Expr build_decode_pairs()
{
    static const Expr e = [] {
        // pair "1 (1+2b)" at scale s: s (1/4 + (1+2b)/16) = s (5 + 2b) / 16
        Expr gain = affine(0, {{Rational(5, 16), x(3)}, {Rational(1, 8), Expr::mul(x(4), x(3))}});
        Expr core = msb_lode(Expr::one(), Rational(1, 16), gain);
        return pick(2, 4, Expr::comp(core, {x(0), x(1), x(2)}));
    }();
    return e;
}

Expr build_encodemul()
{
    static const Expr e = [] {
        const Rational q4(1, 4);
        // (r, u, v) -> (r, u, v, a) -> (.., b) -> (.., I, F, bit)
        Expr s1 = pass_through(3, {read_digit(x(0))});
        Expr s2 = pass_through(4, {Expr::comp(build_head_read(), {affine(0, {{16, x(0)}, {-4, x(3)}})})});
        Expr pairs = build_send(std::vector<std::pair<Integer, Vec>>{
            {0, Vec{0, 0, 0}}, {5, Vec{1, 0, 0}}, {7, Vec{1, 0, 1}}, {13, Vec{0, 1, 0}}, {15, Vec{0, 1, 1}}});
        Expr s3 = pass_through(5, {Expr::comp(pairs, {affine(0, {{4, x(3)}, {1, x(4)}})})});
        // With U = u 2^s and V = v 2^s after s steps: an integer bit gives
        // U <- 2U + bit V, a fraction bit U <- U + bit V/2 and V <- V/2, a
        // blank pair leaves both unchanged.
        Expr frac_drop = gate(x(6), scaled(q4, x(2)));
        Expr v_next = Expr::sub(Expr::half(x(2)), frac_drop);
        Expr u_next = Expr::half(x(1)) + gate(x(5), Expr::half(x(1))) + gate(x(7), v_next);
        Expr r_next = affine(0, {{16, x(0)}, {-4, x(3)}, {-1, x(4)}});
        Expr s4 = Expr::tuple({r_next, u_next, v_next});
        Expr step = Expr::comp(s4, {Expr::comp(s3, {Expr::comp(s2, {Expr::comp(s1, {x(0), x(1), x(2)})})})});

        Expr run = Expr::lode(Expr::tuple({x(0), Expr::zero(), x(1)}),
                              Expr::comp(step, {f(0), f(1), f(2)}) - Expr::tuple({f(0), f(1), f(2)}));
        Expr doubling = Expr::lode(x(0), f(0));
        return Expr::comp(doubling, {x(0), pick(1, 3, Expr::comp(run, {x(0), x(1), x(2)}))});
    }();
    return e;
}

Polynomial Polynomial::parse(std::string_view text)
{
    Polynomial p;
    for (const auto& tok : split(text, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            if (!tok.empty() && tok[0] != '-')
                v = std::stoul(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (tok.empty() || pos != tok.size())
            throw std::invalid_argument("bad polynomial coefficient '" + tok + "'");
        p.coeffs.push_back(v);
    }
    return p;
}

unsigned long Polynomial::operator()(unsigned long v) const
{
    unsigned long acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * v + *it;
    return acc;
}

std::string Polynomial::str() const
{
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        out += (i ? "," : "") + std::to_string(coeffs[i]);
    return out;
}

namespace {

// Natural numbers of the form 2^e - 1 carry the exponent e as their bit
// length, so exponent arithmetic reduces to lodes over them.

// 2^n -> 2^n - 1
Expr mersenne_of_power(const Expr& p)
{
    static const Expr fn = Expr::lode(Expr::zero(), Expr::add(f(0), Expr::sgnb(x(0))));
    return Expr::comp(fn, {p});
}

// exponents add
Expr mersenne_sum(const Expr& a, const Expr& b)
{
    static const Expr fn = Expr::lode(x(0), Expr::add(f(0), Expr::one()));
    return Expr::comp(fn, {b, a});
}

// exponents multiply
Expr mersenne_product(const Expr& a, const Expr& k)
{
    static const Expr fn = Expr::lode(Expr::zero(), Expr::add(Expr::mul(f(0), x(1)), x(1)));
    return Expr::comp(fn, {k, a});
}

Expr mersenne_const(unsigned long e) { return constant(Rational(pow2(e) - 1)); }

Expr mersenne_poly(const Polynomial& p, const Expr& v)
{
    Expr acc = Expr::zero();
    Expr power = Expr::one();
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        if (p.coeffs[i] != 0) {
            Expr term = p.coeffs[i] == 1 ? power : mersenne_product(power, mersenne_const(p.coeffs[i]));
            acc = acc.op() == Op::Zero ? term : mersenne_sum(acc, term);
        }
        if (i + 1 < p.coeffs.size())
            power = i == 0 ? v : mersenne_product(power, v);
    }
    return acc;
}

// (x, 2^X, 2^n) -> (2^n, M(L), M(R+2), M(R+2+L), lambda, rbar_1, rbar_2, lbar)
// with M(e) = 2^e - 1, L the pair count of the machine input and R the
// runtime bound.
Expr pipeline_front(const Polynomial& modulus, const Polynomial& runtime)
{
    // (x, 2^n, M(m), M(P), M(L), M(R+2), M(R+2+L))
    Expr m_n = mersenne_of_power(x(2));
    Expr m_mod = mersenne_poly(modulus, m_n);
    Expr m_p = mersenne_sum(m_mod, mersenne_of_power(x(1)));
    Expr m_l = mersenne_sum(m_p, mersenne_const(2));
    // one step beyond the runtime bound; the run is idle on its first iteration
    Expr m_r = mersenne_sum(mersenne_poly(runtime, m_l), mersenne_const(2));
    Expr sizes = Expr::tuple({x(0), x(2), m_mod, m_p, m_l, m_r, mersenne_sum(m_r, m_l)});

    // -> (2^n, M(L), M(R+2), M(R+2+L), y, S, top) with y = 2^m x + 2^P, S = 2^(P+1)
    static const Expr shift_up = Expr::lode(x(0), f(0));
    Expr y = Expr::comp(shift_up, {x(2), x(0)}) + affine(1, {{1, x(3)}});
    Expr scale = affine(2, {{2, x(3)}});
    Expr top = affine(Rational(1, 2), {{Rational(1, 2), x(4)}});
    Expr biased = Expr::tuple({x(1), x(4), x(5), x(6), y, scale, top});

    // -> (2^n, M(L), M(R+2), M(R+2+L), lambda, rbar_1, rbar_2, lbar)
    Expr k1 = Expr::comp(build_sigma(1), {x(5), x(4)});
    Expr k2 = Expr::comp(build_sigma(2), {x(5), x(4)});
    Expr lam = Expr::comp(build_lambda(), {x(5), x(4)});
    // left tape: the pairs of 2^n read from the head outward, 1^(2n) 3 1
    static const Expr sixteenth_power = Expr::lode(Expr::one(), scaled(Rational(-15, 16), f(0)));
    Expr left = affine(Rational(1, 3), {{Rational(23, 3), Expr::comp(sixteenth_power, {x(0)})}});
    Expr decoded = Expr::tuple({x(0), x(1), x(2), x(3), lam, Expr::comp(build_decode_pairs(), {x(1), k1, x(6)}),
                                Expr::comp(build_decode_pairs(), {x(1), k2, x(6)}), left});

    return Expr::comp(decoded, {Expr::comp(biased, {Expr::comp(sizes, {x(0), x(1), x(2)})})});
}

// (2^n, lambda) -> (lambda 2^-n, (1 - lambda) 2^-n)
Expr weights_fn()
{
    static const Expr e = [] {
        Expr halving = Expr::lode(x(0), scaled(Rational(-1, 2), f(0)));
        return Expr::tuple({scaled(2, Expr::comp(halving, {x(0), x(1)})),
                            scaled(2, Expr::comp(halving, {x(0), affine(1, {{-1, x(1)}})}))});
    }();
    return e;
}

// (q, l, r, w) -> (encoded output word, w if positive, w if negative)
Expr readout_fn(const TuringMachine& m)
{
    std::vector<std::pair<Integer, Rational>> odd, neg;
    for (int q = 0; q < m.states(); ++q) {
        bool accepting = m.accept().count(q) > 0;
        odd.emplace_back(q, accepting && m.delta(q, 0).move == Move::Left ? 1 : 0);
        neg.emplace_back(q, m.negative().count(q) ? 1 : 0);
    }
    // -> (q, l, r, w, phase, sign, digit left of the head)
    Expr flags = pass_through(
        4, {Expr::comp(build_send(odd), {x(0)}), Expr::comp(build_send(neg), {x(0)}), read_digit(x(1))});
    // in the odd phase the output starts one cell left of the head
    Expr word = gate(affine(1, {{-1, x(4)}}), x(2)) +
                gate(x(4), affine(0, {{Rational(1, 4), x(6)}, {Rational(1, 4), x(2)}}));
    Expr out = Expr::tuple({word, gate(affine(1, {{-1, x(5)}}), x(3)), gate(x(5), x(3))});
    return Expr::comp(out, {Expr::comp(flags, {x(0), x(1), x(2), x(3)})});
}

}  // namespace

Expr build_pipeline_weights(const Polynomial& modulus)
{
    Expr front = pipeline_front(modulus, Polynomial{{0}});
    Expr w = Expr::comp(weights_fn(), {x(0), x(4)});
    return Expr::comp(w, {front});
}

Expr build_approx_pipeline(const TuringMachine& m, const Polynomial& modulus, const Polynomial& runtime)
{
    Expr exec = build_exec(m);
    Expr readout = readout_fn(m);
    Expr em = build_encodemul();
    Expr signed_em = Expr::comp(em, {x(0), x(1), x(2)}) - Expr::comp(em, {x(0), x(1), x(3)});

    // (2^n, M(L), M(R+2), M(R+2+L), lambda, rbar_1, rbar_2, lbar) -> value
    Expr w = Expr::comp(weights_fn(), {x(0), x(4)});
    Expr start = constant(m.init());
    auto branch = [&](int rbar, int weight) {
        Expr run = Expr::comp(exec, {x(2), start, x(7), x(rbar)});
        Expr out = Expr::comp(readout, {run, pick(weight, 2, w)});
        return Expr::comp(signed_em, {x(3), out});
    };
    Expr back = branch(5, 0) + branch(6, 1);
    return Expr::comp(back, {pipeline_front(modulus, runtime)});
}

Rational approx_eval(const Expr& pipeline, const Rational& x_val, unsigned long big_x, unsigned long n,
                     const EvalOptions& opts)
{
    Rational bound(pow2(big_x));
    if (abs(x_val) > bound)
        throw std::domain_error("|x| = " + to_string(abs(x_val)) + " exceeds 2^" + std::to_string(big_x));
    return eval(pipeline, {x_val, bound, Rational(pow2(n))}, opts).at(0);
}

}  // namespace ldl
