#pragma once

#include "qlab/cartan.hpp"
#include "qlab/errors.hpp"
#include "qlab/lattice.hpp"

#include <cstdint>
#include <ostream>
#include <sstream>
#include <vector>

namespace qlab {

/// Product of Y_{i,q^a}^{e} over finitely many (i, a). Multiplication adds
/// exponents; the empty monomial is the unit.
class LaurentMonomial {
public:
    LaurentMonomial() = default;
    explicit LaurentMonomial(LatticeVector exps) : exps_(std::move(exps)) {}

    static LaurentMonomial y(int node, int param, std::int64_t exp = 1)
    {
        return LaurentMonomial(LatticeVector::unit({node, param}, exp));
    }

    const LatticeVector& exponents() const noexcept { return exps_; }
    std::int64_t exponent(int node, int param) const { return exps_[{node, param}]; }
    bool is_unit() const noexcept { return exps_.empty(); }

    LaurentMonomial& operator*=(const LaurentMonomial& o)
    {
        exps_ += o.exps_;
        return *this;
    }
    friend LaurentMonomial operator*(LaurentMonomial a, const LaurentMonomial& b) { return a *= b; }

    LaurentMonomial pow(std::int64_t k) const { return LaurentMonomial(k * exps_); }
    LaurentMonomial inverse() const { return pow(-1); }

    friend bool operator==(const LaurentMonomial&, const LaurentMonomial&) = default;
    friend bool operator<(const LaurentMonomial& a, const LaurentMonomial& b) { return a.exps_ < b.exps_; }

private:
    LatticeVector exps_;
};

inline std::ostream& operator<<(std::ostream& os, const LaurentMonomial& m)
{
    if (m.is_unit())
        return os << "1";
    bool first = true;
    for (auto& e : m.exponents()) {
        if (!first)
            os << ' ';
        first = false;
        os << "Y" << e.at.node << ',' << e.at.param;
        if (e.value != 1)
            os << '^' << e.value;
    }
    return os;
}

/// psi * prod_{i,a} A_{i,q^a}^{-v_i^a} with psi = Y_{anchor,q^0}. Entries of v
/// may be negative; cone membership is exactly "v >= 0".
struct AMonomialVector {
    int anchor = 1;
    LatticeVector v;

    std::int64_t height() const { return v.total(); }

    friend bool operator==(const AMonomialVector&, const AMonomialVector&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const AMonomialVector& x)
{
    return os << "psi=Y" << x.anchor << ",0 v=" << x.v;
}

/// Integer coefficients over the fundamental weights.
using ClassicalWeight = std::vector<std::int64_t>;

/// A_{i,q^a}^{-1} as a Y-monomial: Y_{i,a+d_i}^{-1} Y_{i,a-d_i}^{-1} and, for
/// each j != i, Y_{j,a+s} for s = c_ji+1, c_ji+3, ..., -c_ji-1. The j-content
/// uses c_ji (not c_ij), which makes the classical weight exactly -alpha_i in
/// every finite type.
inline LaurentMonomial a_monomial_inverse(const CartanDatum& cd, int i, int a)
{
    LatticeVector e;
    e.add({i, a + cd.di(i)}, -1);
    e.add({i, a - cd.di(i)}, -1);
    for (int j = 1; j <= cd.rank(); ++j) {
        if (j == i)
            continue;
        for (int s = cd.c(j, i) + 1; s <= -cd.c(j, i) - 1; s += 2)
            e.add({j, a + s}, 1);
    }
    return LaurentMonomial(std::move(e));
}

inline LaurentMonomial expand_to_y(const CartanDatum& cd, const AMonomialVector& x)
{
    LaurentMonomial m = LaurentMonomial::y(x.anchor, 0);
    for (auto& e : x.v)
        m *= a_monomial_inverse(cd, e.at.node, e.at.param).pow(e.value);
    return m;
}

/// Inverse of expand_to_y for a fixed anchor.
///
/// A_{i,a}^{-1} has a unique entry of maximal parameter, Y_{i,a+d_i}^{-1}, so the
/// linear system is triangular when parameters are processed from the top
/// down. The solve is restricted to the input window padded by
/// R = (1 + max|c_ij|) max d_i, doubled once before giving up.
inline AMonomialVector factor_to_a(const CartanDatum& cd, int anchor, const LaurentMonomial& m)
{
    const LaurentMonomial residual0 = m * LaurentMonomial::y(anchor, 0).inverse();
    AMonomialVector out{anchor, {}};
    if (residual0.is_unit())
        return out;

    int lo = residual0.exponents().begin()->at.param;
    for (auto& e : residual0.exponents())
        lo = std::min(lo, e.at.param);
    const int pad = (1 + cd.max_abs_c()) * cd.max_di();

    for (int attempt = 1; attempt <= 2; ++attempt) {
        const int window_lo = lo - attempt * pad;
        LaurentMonomial residual = residual0;
        LatticeVector v;
        bool ok = true;
        while (!residual.is_unit()) {
            int top = residual.exponents().begin()->at.param;
            for (auto& e : residual.exponents())
                top = std::max(top, e.at.param);
            LaurentMonomial peel;
            for (auto& e : residual.exponents()) {
                if (e.at.param != top)
                    continue;
                const int base = top - cd.di(e.at.node);
                if (base - cd.max_di() < window_lo) {
                    ok = false;
                    break;
                }
                // exponent e at the top of A^{-1}_{i,base} means v = -e there
                v.add({e.at.node, base}, -e.value);
                peel *= a_monomial_inverse(cd, e.at.node, base).pow(-e.value);
            }
            if (!ok)
                break;
            residual *= peel.inverse();
        }
        if (ok) {
            out.v = std::move(v);
            return out;
        }
    }
    std::ostringstream msg;
    msg << "monomial " << m << " is not psi times a product of A-monomials (anchor " << anchor << ")";
    throw Error(ErrorKind::NotFactorable, msg.str());
}

inline ClassicalWeight classical_weight(const CartanDatum& cd, const LaurentMonomial& m)
{
    ClassicalWeight w(static_cast<std::size_t>(cd.rank()), 0);
    for (auto& e : m.exponents())
        w.at(static_cast<std::size_t>(e.at.node - 1)) += e.value;
    return w;
}

/// alpha_i = sum_j c_ji omega_j.
inline ClassicalWeight simple_root_weight(const CartanDatum& cd, int i)
{
    ClassicalWeight w(static_cast<std::size_t>(cd.rank()), 0);
    for (int j = 1; j <= cd.rank(); ++j)
        w[j - 1] = cd.c(j, i);
    return w;
}

} // namespace qlab
