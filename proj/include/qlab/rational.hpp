#pragma once

#include "qlab/errors.hpp"

#include <boost/rational.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace qlab {

using Rational = boost::rational<std::int64_t>;

inline std::string format_rational(const Rational& r)
{
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Accepts "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view s)
{
    auto parse_int = [&](std::string_view t) {
        std::int64_t v = 0;
        if (!t.empty() && t.front() == '+')
            t.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
            throw Error(ErrorKind::ParseError, "not a rational number: '" + std::string(s) + "'");
        return v;
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(s));
    std::int64_t den = parse_int(s.substr(slash + 1));
    if (den == 0)
        throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(s) + "'");
    return Rational(parse_int(s.substr(0, slash)), den);
}

} // namespace qlab
