#include "tadet/rational.hpp"

#include "tadet/errors.hpp"

#include <charconv>

namespace tadet {

std::string to_string(const Rational& r)
{
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_integer(std::string_view s, const std::string& whole)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ParseError("not a rational number: '" + whole + "'");
    return v;
}

}  // namespace

Rational parse_rational(const std::string& text)
{
    std::string_view s = text;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
        return Rational(parse_integer(s.substr(0, slash), text), den);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        bool negative = !s.empty() && s.front() == '-';
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if (frac.size() > 15) throw ParseError("too many decimals in '" + text + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_integer(whole, text);
        std::int64_t f = frac.empty() ? 0 : parse_integer(frac, text);
        Rational r(w);
        Rational part(f, scale);
        return negative ? r - part : r + part;
    }
    return Rational(parse_integer(s, text));
}

}  // namespace tadet
