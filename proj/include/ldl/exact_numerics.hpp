#pragma once

// Exact rationals, bit lengths, dyadics and radix-4 words over {0,1,3}.
//
// Rational is GMP's mpq_class: every arithmetic result is canonicalized
// (lowest terms, positive denominator), so equality is structural.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ldl {

using Integer = mpz_class;
using Rational = mpq_class;
using Vec = std::vector<Rational>;

class EncodingError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Number of binary digits of n; bit_length(0) == 0. Requires n >= 0.
std::size_t bit_length(const Integer& n);

Integer pow2(std::size_t e);
Rational pow2q(long e);  // 2^e for any sign of e

// num/den in lowest terms; throws std::domain_error on a zero denominator.
Rational ratio(const Integer& num, const Integer& den);

bool is_integer(const Rational& r);
bool is_natural(const Rational& r);
// Floor of a rational, as an integer.
Integer floor_of(const Rational& r);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);
// Accepts "p", "p/q", "-p/q" and plain decimals such as "-2.375".
Rational parse_rational(std::string_view text);
// Rounds half-to-even to `digits` fractional decimal digits.
std::string to_decimal(const Rational& r, unsigned digits);

// A finite word over {0,1,3}; digits[0] is adjacent to the head.
class CantorWord {
public:
    CantorWord() = default;
    explicit CantorWord(std::vector<std::uint8_t> digits);
    static CantorWord parse(std::string_view text);

    const std::vector<std::uint8_t>& digits() const { return digits_; }
    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    std::uint8_t operator[](std::size_t i) const { return digits_[i]; }
    // Digit at i, or the blank 0 past the end.
    std::uint8_t at_or_blank(std::size_t i) const { return i < digits_.size() ? digits_[i] : 0; }

    // True when every digit is 1 or 3.
    bool in_cantor_set() const;
    // Copy with trailing blanks removed.
    CantorWord trimmed() const;
    std::string str() const;

    friend bool operator==(const CantorWord&, const CantorWord&) = default;

private:
    std::vector<std::uint8_t> digits_;
};

// sum_n w_n 4^-(n+1)
Rational gamma_encode(const CantorWord& w);
// First k radix-4 digits of r in [0,1). Throws EncodingError on a digit 2
// or when r is outside [0,1).
CantorWord gamma_decode(const Rational& r, std::size_t k);

// mantissa * 2^-precision; the precision is kept as declared.
struct Dyadic {
    Integer mantissa;
    std::size_t precision = 0;

    Rational value() const;
    std::string str() const;  // "m*2^-n"
    static Dyadic parse(std::string_view text);
};

// Integer digits map to pairs 11/13, fractional digits to 31/33, most
// significant first. The integer part always contributes at least one pair.
CantorWord binary_to_cantor(const Dyadic& d);

}  // namespace ldl
