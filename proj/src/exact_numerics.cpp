#include "ldl/exact_numerics.hpp"

#include <algorithm>
#include <cctype>

namespace ldl {

std::size_t bit_length(const Integer& n)
{
    if (sgn(n) < 0)
        throw std::domain_error("bit_length of a negative integer");
    if (sgn(n) == 0)
        return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

Integer pow2(std::size_t e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

Rational pow2q(long e)
{
    if (e >= 0)
        return Rational(pow2(static_cast<std::size_t>(e)));
    return Rational(Integer(1), pow2(static_cast<std::size_t>(-e)));
}

Rational ratio(const Integer& num, const Integer& den)
{
    if (den == 0)
        throw std::domain_error("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

bool is_natural(const Rational& r) { return is_integer(r) && sgn(r) >= 0; }

Integer floor_of(const Rational& r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

std::string to_string(const Rational& r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

Integer parse_integer(std::string_view s, std::string_view whole)
{
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    return Integer(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view s = text;
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational r;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer den = parse_integer(s.substr(slash + 1), text);
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        r = Rational(parse_integer(s.substr(0, slash), text), den);
        r.canonicalize();
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        Integer whole = ip.empty() ? Integer(0) : parse_integer(ip, text);
        Integer frac = fp.empty() ? Integer(0) : parse_integer(fp, text);
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        r = Rational(whole * scale + frac, scale);
        r.canonicalize();
    } else {
        r = Rational(parse_integer(s, text));
    }
    return neg ? Rational(-r) : r;
}

std::string to_decimal(const Rational& r, unsigned digits)
{
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Rational scaled = abs(r) * scale;
    Integer q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    // compare 2*rem with den for half-to-even
    int c = cmp(Integer(2 * rem), scaled.get_den());
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t())))
        q += 1;
    std::string s = q.get_str();
    if (digits > 0) {
        if (s.size() <= digits)
            s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
    }
    if (sgn(r) < 0 && q != 0)
        s.insert(0, "-");
    return s;
}

CantorWord::CantorWord(std::vector<std::uint8_t> digits) : digits_(std::move(digits))
{
    for (auto d : digits_)
        if (d != 0 && d != 1 && d != 3)
            throw EncodingError("word digit " + std::to_string(d) + " is not in {0,1,3}");
}

CantorWord CantorWord::parse(std::string_view text)
{
    std::vector<std::uint8_t> ds;
    ds.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1' && c != '3')
            throw EncodingError(std::string("word character '") + c + "' is not in {0,1,3}");
        ds.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return CantorWord(std::move(ds));
}

bool CantorWord::in_cantor_set() const
{
    return std::all_of(digits_.begin(), digits_.end(), [](auto d) { return d == 1 || d == 3; });
}

CantorWord CantorWord::trimmed() const
{
    auto ds = digits_;
    while (!ds.empty() && ds.back() == 0)
        ds.pop_back();
    return CantorWord(std::move(ds));
}

std::string CantorWord::str() const
{
    std::string s;
    s.reserve(digits_.size());
    for (auto d : digits_)
        s.push_back(static_cast<char>('0' + d));
    return s;
}

Rational gamma_encode(const CantorWord& w)
{
    // Horner from the least significant digit: v = (d + v) / 4
    Integer num = 0;
    for (auto d : w.digits())
        num = num * 4 + d;
    Rational r(num, pow2(2 * w.size()));
    r.canonicalize();
    return r;
}

CantorWord gamma_decode(const Rational& r, std::size_t k)
{
    if (sgn(r) < 0 || r >= 1)
        throw EncodingError("encoded value " + to_string(r) + " is outside [0,1)");
    std::vector<std::uint8_t> ds;
    ds.reserve(k);
    Rational rest = r;
    for (std::size_t i = 0; i < k; ++i) {
        rest *= 4;
        Integer d = floor_of(rest);
        rest -= d;
        if (d == 2)
            throw EncodingError("digit 2 at position " + std::to_string(i) + " of " + to_string(r));
        ds.push_back(static_cast<std::uint8_t>(d.get_ui()));
    }
    return CantorWord(std::move(ds));
}

Rational Dyadic::value() const
{
    Rational r(mantissa, pow2(precision));
    r.canonicalize();
    return r;
}

std::string Dyadic::str() const { return mantissa.get_str() + "*2^-" + std::to_string(precision); }

Dyadic Dyadic::parse(std::string_view text)
{
    auto star = text.find("*2^-");
    if (star == std::string_view::npos)
        return Dyadic{parse_integer(text, text), 0};
    std::string_view m = text.substr(0, star);
    bool neg = !m.empty() && m.front() == '-';
    if (neg)
        m.remove_prefix(1);
    Integer mant = parse_integer(m, text);
    Integer prec = parse_integer(text.substr(star + 4), text);
    return Dyadic{neg ? Integer(-mant) : mant, prec.get_ui()};
}

CantorWord binary_to_cantor(const Dyadic& d)
{
    if (sgn(d.mantissa) < 0)
        throw std::domain_error("binary_to_cantor needs a non-negative dyadic");
    std::string bits = d.mantissa.get_str(2);
    if (bits.size() < d.precision + 1)
        bits.insert(0, d.precision + 1 - bits.size(), '0');
    std::size_t int_digits = bits.size() - d.precision;
    std::vector<std::uint8_t> ds;
    ds.reserve(2 * bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        ds.push_back(i < int_digits ? 1 : 3);
        ds.push_back(bits[i] == '1' ? 3 : 1);
    }
    return CantorWord(std::move(ds));
}

}  // namespace ldl
