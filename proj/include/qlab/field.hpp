#pragma once

#include "qlab/errors.hpp"
#include "qlab/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qlab {

/// Prime field F_P, P small.
template <std::uint32_t P>
class Zp {
    static_assert(P >= 2 && P <= 251, "small prime fields only");

public:
    constexpr Zp() = default;
    constexpr Zp(std::int64_t x) : v_(static_cast<std::uint32_t>(((x % static_cast<std::int64_t>(P)) + P) % P)) {}

    constexpr std::uint32_t value() const noexcept { return v_; }

    friend constexpr Zp operator+(Zp a, Zp b) { return Zp(static_cast<std::int64_t>(a.v_ + b.v_)); }
    friend constexpr Zp operator-(Zp a, Zp b) { return Zp(static_cast<std::int64_t>(a.v_) - b.v_); }
    friend constexpr Zp operator*(Zp a, Zp b) { return Zp(static_cast<std::int64_t>(a.v_) * b.v_); }
    friend constexpr Zp operator/(Zp a, Zp b) { return a * b.inverse(); }
    constexpr Zp operator-() const { return Zp(-static_cast<std::int64_t>(v_)); }
    constexpr Zp& operator+=(Zp b) { return *this = *this + b; }
    constexpr Zp& operator-=(Zp b) { return *this = *this - b; }
    constexpr Zp& operator*=(Zp b) { return *this = *this * b; }

    constexpr Zp inverse() const
    {
        if (v_ == 0)
            throw Error(ErrorKind::InvalidArgument, "division by zero in F_p");
        Zp r(1), base = *this;
        for (std::uint32_t e = P - 2; e; e >>= 1, base = base * base)
            if (e & 1)
                r = r * base;
        return r;
    }

    friend constexpr bool operator==(Zp, Zp) = default;

private:
    std::uint32_t v_ = 0;
};

template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static constexpr bool finite = false;
    static std::string name() { return "Q"; }
    static std::string format(const Rational& x) { return format_rational(x); }
    static std::vector<Rational> elements() { throw Error(ErrorKind::FieldNotFinite, "Q is infinite"); }
    static void encode(const Rational& x, std::vector<std::int64_t>& out)
    {
        out.push_back(x.numerator());
        out.push_back(x.denominator());
    }
};

template <std::uint32_t P>
struct FieldTraits<Zp<P>> {
    static constexpr bool finite = true;
    static constexpr std::uint32_t order = P;
    static std::string name() { return "F" + std::to_string(P); }
    static std::string format(const Zp<P>& x) { return std::to_string(x.value()); }
    static std::vector<Zp<P>> elements()
    {
        std::vector<Zp<P>> out;
        for (std::uint32_t k = 0; k < P; ++k)
            out.emplace_back(static_cast<std::int64_t>(k));
        return out;
    }
    static void encode(const Zp<P>& x, std::vector<std::int64_t>& out) { out.push_back(x.value()); }
};

using F2 = Zp<2>;
using F3 = Zp<3>;
using F5 = Zp<5>;
using F7 = Zp<7>;

} // namespace qlab
