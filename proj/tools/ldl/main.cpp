// Command-line front end: expression evaluation, machine simulation and
// compilation, the approximation pipeline, network extraction, figure data
// and the self-test suite.
//
// Exit codes: 0 success, 1 domain or contract error, 2 usage error.

#include "ldl/machines.hpp"
#include "ldl/neural_extract.hpp"
#include "ldl/special_functions.hpp"
#include "selftest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

using namespace ldl;

namespace {

// Malformed flag values; reported like CLI11 parse errors.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Globals {
    std::optional<unsigned> decimals;
    std::optional<std::size_t> guard_bits;
    std::uint64_t seed = 0;

    EvalOptions eval_options() const
    {
        EvalOptions o;
        if (guard_bits)
            o.guard_bits = *guard_bits;
        return o;
    }

    std::string render(const Rational& r) const { return decimals ? to_decimal(r, *decimals) : to_string(r); }

    std::string render(const Vec& v) const
    {
        std::string out;
        for (const auto& x : v)
            out += (out.empty() ? "" : " ") + render(x);
        return out;
    }
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "-" writes to standard output.
void write_file(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!(out << text))
        throw std::runtime_error("cannot write " + path);
}

Rational rational_flag(const std::string& flag, const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const std::exception& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        parts.push_back(cur);
    return parts;
}

Vec rational_list(const std::string& flag, const std::string& text)
{
    Vec out;
    if (text.empty())
        return out;
    for (const auto& p : split(text, ','))
        out.push_back(rational_flag(flag, p));
    return out;
}

Polynomial polynomial_flag(const std::string& flag, const std::string& text)
{
    try {
        return Polynomial::parse(text);
    } catch (const std::exception& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

std::map<int, Rational> fix_list(const std::string& text)
{
    std::map<int, Rational> out;
    if (text.empty())
        return out;
    for (const auto& p : split(text, ',')) {
        auto eq = p.find('=');
        if (eq == std::string::npos)
            throw UsageError("--fix: expected i=p/q, got '" + p + "'");
        int index = 0;
        try {
            std::size_t used = 0;
            index = std::stoi(p.substr(0, eq), &used);
            if (used != eq || index < 0)
                throw std::invalid_argument("index");
        } catch (const std::exception&) {
            throw UsageError("--fix: bad input index in '" + p + "'");
        }
        out[index] = rational_flag("--fix", p.substr(eq + 1));
    }
    return out;
}

std::string word_text(const CantorWord& w)
{
    std::string s = w.str();
    while (!s.empty() && s.back() == '0')
        s.pop_back();
    return s.empty() ? "-" : s;
}

void print_config(const Configuration& c)
{
    std::cout << "state " << c.q << "\nleft " << word_text(c.l) << "\nright " << word_text(c.r) << '\n';
}

const std::map<std::string, std::function<PipelineMachine()>>& pipeline_machines()
{
    static const std::map<std::string, std::function<PipelineMachine()>> table{
        {"doubling_pipeline", doubling_pipeline_machine},
        {"constant_pipeline", constant_pipeline_machine},
    };
    return table;
}

const std::map<std::string, std::function<TuringMachine()>>& plain_machines()
{
    static const std::map<std::string, std::function<TuringMachine()>> table{
        {"unary_eraser", unary_eraser},       {"binary_increment", binary_increment},
        {"binary_doubler", binary_doubler},   {"palindrome_checker", palindrome_checker},
        {"busy_loop", busy_loop},
    };
    return table;
}

std::string builtin_text(const std::string& name)
{
    if (auto it = plain_machines().find(name); it != plain_machines().end())
        return "# " + name + "\n" + it->second().str();
    if (auto it = pipeline_machines().find(name); it != pipeline_machines().end()) {
        PipelineMachine pm = it->second();
        return "# " + name + "\n# approx build --modulus " + pm.modulus.str() + " --runtime " + pm.runtime.str() +
               "\n" + pm.machine.str();
    }
    std::string known;
    for (const auto& [k, v] : plain_machines())
        known += " " + k;
    for (const auto& [k, v] : pipeline_machines())
        known += " " + k;
    throw UsageError("unknown machine '" + name + "'; known:" + known);
}

// x-values for `plot`: `samples` evenly spaced points of [a, b], ends included.
Vec sample_points(const std::string& range, std::size_t samples)
{
    auto colon = range.find(':', 1);
    if (colon == std::string::npos)
        throw UsageError("--range: expected a:b, got '" + range + "'");
    Rational a = rational_flag("--range", range.substr(0, colon));
    Rational b = rational_flag("--range", range.substr(colon + 1));
    if (b < a)
        throw UsageError("--range: empty interval " + range);
    if (samples == 0)
        throw UsageError("--samples must be positive");
    Vec xs;
    for (std::size_t i = 0; i < samples; ++i)
        xs.push_back(samples == 1 ? a : Rational(a + (b - a) * Rational(Integer(i)) / Rational(Integer(samples - 1))));
    return xs;
}

int run(int argc, char** argv)
{
    Globals g;
    CLI::App app{"Exact evaluator and compiler for the discrete-ODE function algebra"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--decimals", g.decimals, "Render numbers as decimals rounded half-to-even to k digits");
    app.add_option("--guard-bits", g.guard_bits, "Bit-size limit on intermediate values (0 disables)");
    app.add_option("--seed", g.seed, "Seed base for the randomized self-test suites");

    std::function<void()> action;

    // eval
    std::string expr_path, args_text;
    bool polynomial = false;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate an expression file");
    eval_cmd->add_option("expr", expr_path, "Expression file")->required();
    eval_cmd->add_option("--args", args_text, "Arguments p/q,p/q,...");
    eval_cmd->add_flag("--polynomial", polynomial, "Accept multiplication outside lode bodies");
    eval_cmd->callback([&] {
        action = [&] {
            ParseOptions po;
            po.polynomial = polynomial;
            Expr e = parse(read_file(expr_path), po);
            std::cout << g.render(eval(e, rational_list("--args", args_text), g.eval_options())) << '\n';
        };
    });

    // tm
    auto* tm_cmd = app.add_subcommand("tm", "Turing machines");
    tm_cmd->require_subcommand(1);
    std::string machine_path, input_word, out_path = "-", builtin_name;
    std::size_t steps = 0;
    bool compiled = false, step_only = false;

    auto* tm_run_cmd = tm_cmd->add_subcommand("run", "Run a machine from its initial state");
    tm_run_cmd->add_option("machine", machine_path, "Machine file")->required();
    tm_run_cmd->add_option("--input", input_word, "Initial right tape over {0,1,3}");
    tm_run_cmd->add_option("--steps", steps, "Number of steps")->required();
    tm_run_cmd->add_flag("--compiled", compiled, "Run through the compiled lode instead of the simulator");
    tm_run_cmd->callback([&] {
        action = [&] {
            TuringMachine m = TuringMachine::parse(read_file(machine_path));
            CantorWord input;
            try {
                input = CantorWord::parse(input_word);
            } catch (const std::exception& e) {
                throw UsageError(std::string("--input: ") + e.what());
            }
            Configuration c0{m.init(), CantorWord(), input};
            if (!compiled) {
                print_config(tm_run(m, c0, steps));
                return;
            }
            RealConfig rc = config_encode(c0);
            Vec out = eval(build_exec(m), {Rational(pow2(steps)), rc.q, rc.l, rc.r}, g.eval_options());
            print_config(config_decode({out[0], out[1], out[2]}, input.size() + steps + 1));
        };
    });

    auto* tm_compile_cmd = tm_cmd->add_subcommand("compile", "Compile a machine to an expression");
    tm_compile_cmd->add_option("machine", machine_path, "Machine file")->required();
    tm_compile_cmd->add_option("-o", out_path, "Output expression file (- for stdout)");
    tm_compile_cmd->add_flag("--step", step_only, "Emit the single-step function instead of the run lode");
    tm_compile_cmd->callback([&] {
        action = [&] {
            TuringMachine m = TuringMachine::parse(read_file(machine_path));
            write_file(out_path, serialize(step_only ? build_next(m) : build_exec(m)) + "\n");
        };
    });

    auto* tm_builtin_cmd = tm_cmd->add_subcommand("builtin", "Print a shipped machine in the machine file format");
    tm_builtin_cmd->add_option("name", builtin_name, "Machine name")->required();
    tm_builtin_cmd->callback([&] { action = [&] { std::cout << builtin_text(builtin_name); }; });

    // approx
    auto* approx_cmd = app.add_subcommand("approx", "Barycentric approximation pipeline");
    approx_cmd->require_subcommand(1);
    std::string modulus_text, runtime_text, x_text;
    unsigned long big_x = 0, n = 0;

    auto* approx_build_cmd = approx_cmd->add_subcommand("build", "Build the pipeline expression for a machine");
    approx_build_cmd->add_option("machine", machine_path, "Machine file")->required();
    approx_build_cmd->add_option("--modulus", modulus_text, "Modulus polynomial coefficients c0,c1,...")->required();
    approx_build_cmd->add_option("--runtime", runtime_text, "Runtime polynomial coefficients c0,c1,...")->required();
    approx_build_cmd->add_option("-o", out_path, "Output expression file (- for stdout)");
    approx_build_cmd->callback([&] {
        action = [&] {
            TuringMachine m = TuringMachine::parse(read_file(machine_path));
            Expr p = build_approx_pipeline(m, polynomial_flag("--modulus", modulus_text),
                                           polynomial_flag("--runtime", runtime_text));
            write_file(out_path, serialize(p) + "\n");
        };
    });

    auto* approx_eval_cmd = approx_cmd->add_subcommand("eval", "Evaluate a pipeline at (x, 2^X, 2^n)");
    approx_eval_cmd->add_option("expr", expr_path, "Pipeline expression file")->required();
    approx_eval_cmd->add_option("--x", x_text, "Point p/q")->required();
    approx_eval_cmd->add_option("--X", big_x, "Domain bound exponent, |x| <= 2^X")->required();
    approx_eval_cmd->add_option("--n", n, "Precision exponent, error <= 2^-n")->required();
    approx_eval_cmd->callback([&] {
        action = [&] {
            Expr p = parse(read_file(expr_path));
            std::cout << g.render(approx_eval(p, rational_flag("--x", x_text), big_x, n, g.eval_options())) << '\n';
        };
    });

    // nn
    auto* nn_cmd = app.add_subcommand("nn", "Sign-bar networks");
    nn_cmd->require_subcommand(1);
    std::string budget_text, fix_text, net_path;

    auto* nn_extract_cmd = nn_cmd->add_subcommand("extract", "Extract a network from an expression");
    nn_extract_cmd->add_option("expr", expr_path, "Expression file")->required();
    nn_extract_cmd->add_option("--budget", budget_text, "Iteration counts k1,k2,... for non-constant lodes");
    nn_extract_cmd->add_option("--fix", fix_text, "Inputs fixed to constants, i=p/q,...");
    nn_extract_cmd->add_option("-o", out_path, "Output network file (- for stdout)");
    nn_extract_cmd->callback([&] {
        action = [&] {
            ExtractOptions opts;
            if (!budget_text.empty())
                for (const auto& k : split(budget_text, ',')) {
                    try {
                        std::size_t used = 0;
                        opts.budget.push_back(std::stoul(k, &used));
                        if (used != k.size() || k.front() == '-')
                            throw std::invalid_argument(k);
                    } catch (const std::exception&) {
                        throw UsageError("--budget: bad count '" + k + "'");
                    }
                }
            opts.fixed = fix_list(fix_text);
            Extraction ex = extract(parse(read_file(expr_path)), opts);
            write_file(out_path, net_serialize(ex.network));
            std::ostream& report = out_path == "-" ? std::cerr : std::cout;
            report << "inputs";
            for (int i : ex.free_inputs)
                report << " x" << i;
            report << "\nlayers " << ex.network.layers().size() << " depth " << ex.network.depth() << " neurons "
                   << ex.network.neurons() << " budget_used " << ex.budget_used << '\n';
        };
    });

    auto* nn_eval_cmd = nn_cmd->add_subcommand("eval", "Evaluate a network file");
    nn_eval_cmd->add_option("net", net_path, "Network file")->required();
    nn_eval_cmd->add_option("--x", x_text, "Inputs p/q,p/q,...")->required();
    nn_eval_cmd->callback([&] {
        action = [&] {
            Network net = net_deserialize(read_file(net_path));
            std::cout << g.render(net_eval(net, rational_list("--x", x_text))) << '\n';
        };
    });

    // plot
    std::string function_name, range_text = "-2:2";
    unsigned long plot_n = 2;
    std::size_t samples = 64;
    auto* plot_cmd = app.add_subcommand("plot", "Sample a function as CSV x,value rows");
    plot_cmd->add_option("function", function_name,
                         "xi1, xi2, sigma1, sigma2, lambda, mod2, div2, or an expression file of arity <= 2")
        ->required();
    plot_cmd->add_option("--n", plot_n, "Scale exponent; two-argument functions receive 2^n first");
    plot_cmd->add_option("--range", range_text, "Interval a:b (write --range=-2:2 for a negative start)");
    plot_cmd->add_option("--samples", samples, "Number of evenly spaced samples, ends included");
    plot_cmd->callback([&] {
        action = [&] {
            Vec xs = sample_points(range_text, samples);
            Rational scale(pow2(plot_n));
            std::function<Rational(const Rational&)> f;
            std::optional<Expr> file_expr;
            std::optional<Special> special;
            try {
                special = special_from_name(function_name);
            } catch (const std::invalid_argument&) {
                file_expr = parse(read_file(function_name));
                if (file_expr->arity() > 2 || file_expr->dim() != 1)
                    throw std::invalid_argument(function_name + " is not a scalar function of at most two arguments");
            }
            std::ostringstream out;
            out << "x,value\n";
            for (const auto& x : xs) {
                Rational v = special ? apply_special(*special, scale, x)
                             : file_expr->arity() == 2
                                 ? eval(*file_expr, {scale, x}, g.eval_options())[0]
                                 : eval(*file_expr, {x}, g.eval_options())[0];
                out << g.render(x) << ',' << g.render(v) << '\n';
            }
            std::cout << out.str();
        };
    });

    // selftest
    std::string filter;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the invariant and property suites");
    selftest_cmd->add_option("--filter", filter, "Only test cases matching this doctest pattern");
    int selftest_status = 0;
    selftest_cmd->callback([&] { action = [&] { selftest_status = run_selftest(g.seed, filter); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        action();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return selftest_status == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
