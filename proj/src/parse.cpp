#include "expr_internal.hpp"

#include <cctype>
#include <charconv>

namespace ldl {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::invalid_argument(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column)
{
}

namespace {

struct Token {
    enum Kind { Open, Close, Symbol, End } kind;
    std::string text;
    std::size_t line, column;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : src_(s) {}

    Token next()
    {
        skip();
        Token t{Token::End, "", line_, col_};
        if (pos_ >= src_.size())
            return t;
        char c = src_[pos_];
        if (c == '(' || c == ')') {
            advance();
            t.kind = c == '(' ? Token::Open : Token::Close;
            t.text = std::string(1, c);
            return t;
        }
        t.kind = Token::Symbol;
        while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '(' &&
               src_[pos_] != ')' && src_[pos_] != ';') {
            t.text.push_back(src_[pos_]);
            advance();
        }
        return t;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;

    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ';') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
};

class Parser {
public:
    explicit Parser(std::string_view s) : lex_(s) { tok_ = lex_.next(); }

    Expr top()
    {
        Expr e = expr();
        if (tok_.kind != Token::End)
            fail("trailing input '" + tok_.text + "'");
        return e;
    }

private:
    Lexer lex_;
    Token tok_;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, tok_.line, tok_.column); }

    Token take()
    {
        Token t = tok_;
        tok_ = lex_.next();
        return t;
    }

    static std::optional<Expr> atom(const std::string& s)
    {
        if (s == "zero")
            return Expr::zero();
        if (s == "one")
            return Expr::one();
        if (s == "len")
            return Expr::len();
        return std::nullopt;
    }

    int integer()
    {
        if (tok_.kind != Token::Symbol)
            fail("expected an integer");
        int v = 0;
        const auto& s = tok_.text;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || v < 0)
            fail("expected a non-negative integer, got '" + s + "'");
        take();
        return v;
    }

    Expr expr()
    {
        if (tok_.kind == Token::Symbol) {
            if (auto a = atom(tok_.text)) {
                take();
                return *a;
            }
            fail("unknown atom '" + tok_.text + "'");
        }
        if (tok_.kind != Token::Open)
            fail(tok_.kind == Token::End ? "unexpected end of input" : "unexpected ')'");
        take();
        if (tok_.kind != Token::Symbol)
            fail("expected an operator name");
        Token head = take();
        try {
            Expr e = form(head);
            if (tok_.kind != Token::Close)
                fail("expected ')' to close '" + head.text + "'");
            take();
            return e;
        } catch (const SortError& err) {
            throw SortError(std::to_string(head.line) + ":" + std::to_string(head.column) + ": in (" + head.text +
                            " ...): " + err.what());
        } catch (const LinearityError& err) {
            throw LinearityError(std::to_string(head.line) + ":" + std::to_string(head.column) + ": in (" +
                                 head.text + " ...): " + err.what());
        }
    }

    std::vector<Expr> rest()
    {
        std::vector<Expr> es;
        while (tok_.kind != Token::Close && tok_.kind != Token::End)
            es.push_back(expr());
        return es;
    }

    Expr form(const Token& head)
    {
        const std::string& h = head.text;
        if (auto a = atom(h))
            return *a;
        if (h == "proj") {
            int i = integer();
            int k = integer();
            return Expr::proj(i, k);
        }
        if (h == "var") {
            if (tok_.kind != Token::Symbol || tok_.text.size() < 2 || (tok_.text[0] != 'x' && tok_.text[0] != 'f'))
                fail("expected a variable name xN or fN");
            std::string name = take().text;
            int v = 0;
            auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), v);
            if (ec != std::errc() || p != name.data() + name.size())
                fail("malformed variable name '" + name + "'");
            return name[0] == 'x' ? Expr::x(v) : Expr::f(v);
        }
        std::vector<Expr> args = rest();
        auto need = [&](std::size_t n) {
            if (args.size() != n)
                fail("'" + h + "' takes " + std::to_string(n) + " operand(s), got " + std::to_string(args.size()));
        };
        if (h == "add" || h == "sub" || h == "mul") {
            need(2);
            if (h == "add")
                return Expr::add(args[0], args[1]);
            if (h == "sub")
                return Expr::sub(args[0], args[1]);
            return Expr::mul(args[0], args[1]);
        }
        if (h == "sgnb" || h == "half" || h == "third") {
            need(1);
            if (h == "sgnb")
                return Expr::sgnb(args[0]);
            if (h == "half")
                return Expr::half(args[0]);
            return Expr::third(args[0]);
        }
        if (h == "vec") {
            if (args.empty())
                fail("'vec' needs at least one operand");
            return Expr::tuple(std::move(args));
        }
        if (h == "comp") {
            if (args.empty())
                fail("'comp' needs a function");
            Expr fn = args.front();
            args.erase(args.begin());
            return Expr::comp(std::move(fn), std::move(args));
        }
        if (h == "lode") {
            need(2);
            return Expr::lode(args[0], args[1]);
        }
        throw ParseError("unknown operator '" + h + "'", head.line, head.column);
    }
};

void write(const Expr& e, std::string& out)
{
    switch (e.op()) {
    case Op::Zero:
    case Op::One:
    case Op::Len:
        out += "(";
        out += op_name(e.op());
        out += ")";
        return;
    case Op::Proj:
        out += "(proj " + std::to_string(e.index()) + " " + std::to_string(e.count()) + ")";
        return;
    case Op::XVar:
        out += "(var x" + std::to_string(e.index()) + ")";
        return;
    case Op::FVar:
        out += "(var f" + std::to_string(e.index()) + ")";
        return;
    default:
        out += "(";
        out += op_name(e.op());
        for (const auto& k : e.kids()) {
            out += " ";
            write(k, out);
        }
        out += ")";
    }
}

}  // namespace

Expr parse(std::string_view text, const ParseOptions& opts)
{
    Expr e = Parser(text).top();
    if (!opts.polynomial)
        validate(e);
    return e;
}

std::string serialize(const Expr& e)
{
    std::string out;
    write(e, out);
    return out;
}

}  // namespace ldl
