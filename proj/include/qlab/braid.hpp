#pragma once

#include "qlab/cartan.hpp"
#include "qlab/errors.hpp"
#include "qlab/lattice.hpp"
#include "qlab/lweights.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace qlab {

/*
  Braid group operators S_i on Laurent monomials in Y_{j,q^a}.

  The action is defined only through the generator rule

      S_i(Y_{j,x}) = Y_{j,x} * A_{i, x q_i^{-1}}^{-delta_ij}

  extended multiplicatively. Its consequences on A-monomials,
  S_i(A_{i,x}^{-1}) = A_{i,x q_i^{-2}} and the formula for j != i, are checked
  in the tests rather than used here.
*/

/// Node indices in product order: {i_t, ..., i_1} stands for s_{i_t} ... s_{i_1},
/// so the last letter acts first.
using BraidWord = std::vector<int>;

inline BraidWord parse_braid_word(std::string_view text)
{
    BraidWord word;
    std::string token;
    auto flush = [&] {
        if (token.empty())
            return;
        try {
            std::size_t used = 0;
            int i = std::stoi(token, &used);
            if (used != token.size())
                throw std::invalid_argument(token);
            word.push_back(i);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "bad node index '" + token + "' in word");
        }
        token.clear();
    };
    for (char ch : text) {
        if (ch == ',' || ch == ' ')
            flush();
        else if (ch != '[' && ch != ']')
            token.push_back(ch);
    }
    flush();
    return word;
}

inline void check_word(const CartanDatum& cd, const BraidWord& word)
{
    for (int i : word)
        if (i < 1 || i > cd.rank())
            throw Error(ErrorKind::InvalidArgument,
                        "node " + std::to_string(i) + " out of range for " + cd.label());
}

namespace detail {

inline LaurentMonomial shifted_a_factor(const CartanDatum& cd, int i, const LaurentMonomial& m, int shift)
{
    LaurentMonomial f;
    for (auto& e : m.exponents())
        if (e.at.node == i)
            f *= a_monomial_inverse(cd, i, e.at.param + shift).pow(e.value);
    return f;
}

} // namespace detail

inline LaurentMonomial apply_s(const CartanDatum& cd, int i, const LaurentMonomial& m)
{
    return m * detail::shifted_a_factor(cd, i, m, -cd.di(i));
}

/// Two-sided inverse of apply_s: Y_{j,x} -> Y_{j,x} A_{i, x q_i}^{-delta_ij}.
inline LaurentMonomial apply_s_inverse(const CartanDatum& cd, int i, const LaurentMonomial& m)
{
    return m * detail::shifted_a_factor(cd, i, m, cd.di(i));
}

/// S_w = S_{i_t} o ... o S_{i_1}.
inline LaurentMonomial apply_s_word(const CartanDatum& cd, const BraidWord& word, LaurentMonomial m)
{
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        m = apply_s(cd, *it, m);
    return m;
}

/// S_w^{-1} = S_{i_1}^{-1} o ... o S_{i_t}^{-1}.
inline LaurentMonomial apply_s_inverse_word(const CartanDatum& cd, const BraidWord& word, LaurentMonomial m)
{
    for (int i : word)
        m = apply_s_inverse(cd, i, m);
    return m;
}

/// Induced action on dimension vectors with framing w:
///
///   vbar_j^a = v_j^a                                              (j != i)
///   vbar_i^a = w_i^{a+d_i} - v_i^{a+d_ii}
///              + sum_{j != i} sum_{t=1}^{-c_ij} v_j^{a + d_ij + t d_ii}
inline LatticeVector apply_s_on_v(const CartanDatum& cd, int i, const LatticeVector& v, const LatticeVector& w)
{
    const int di = cd.di(i);
    const int dii = cd.d(i, i);
    std::set<int> params;
    for (auto& e : w)
        if (e.at.node == i)
            params.insert(e.at.param - di);
    for (auto& e : v) {
        const int j = e.at.node;
        if (j == i) {
            params.insert(e.at.param - dii);
        } else {
            for (int t = 1; t <= -cd.c(i, j); ++t)
                params.insert(e.at.param - cd.d(i, j) - t * dii);
        }
    }

    LatticeVector out;
    for (auto& e : v)
        if (e.at.node != i)
            out.add(e.at, e.value);
    for (int a : params) {
        std::int64_t x = w[{i, a + di}] - v[{i, a + dii}];
        for (int j = 1; j <= cd.rank(); ++j) {
            if (j == i)
                continue;
            for (int t = 1; t <= -cd.c(i, j); ++t)
                x += v[{j, a + cd.d(i, j) + t * dii}];
        }
        out.add({i, a}, x);
    }
    return out;
}

inline AMonomialVector apply_s_on_v(const CartanDatum& cd, int i, const AMonomialVector& x)
{
    return AMonomialVector{x.anchor, apply_s_on_v(cd, i, x.v, LatticeVector::unit({x.anchor, 0}))};
}

/// Sequential apply_s_on_v along a word (last letter first).
inline LatticeVector apply_s_word_on_v(const CartanDatum& cd, const BraidWord& word, LatticeVector v,
                                       const LatticeVector& w)
{
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        v = apply_s_on_v(cd, *it, v, w);
    return v;
}

/// Random monomial with `entries` factors Y_{j,a}^{e}, a in [-span, span],
/// e in [-max_exp, max_exp] \ {0}.
template <class Rng>
LaurentMonomial random_monomial(const CartanDatum& cd, Rng& rng, int entries = 4, int span = 6, int max_exp = 2)
{
    std::uniform_int_distribution<int> node(1, cd.rank());
    std::uniform_int_distribution<int> param(-span, span);
    std::uniform_int_distribution<int> exp(1, max_exp);
    std::bernoulli_distribution sign(0.5);
    LatticeVector e;
    for (int k = 0; k < entries; ++k) {
        int x = exp(rng);
        e.add({node(rng), param(rng)}, sign(rng) ? x : -x);
    }
    return LaurentMonomial(std::move(e));
}

/// Alternating word i j i ... of length n, product order.
inline BraidWord alternating_word(int i, int j, int n)
{
    BraidWord w;
    for (int k = 0; k < n; ++k)
        w.push_back(k % 2 == 0 ? i : j);
    return w;
}

/// True iff (S_i S_j ...)_{m_ij} = (S_j S_i ...)_{m_ij} on `samples` random monomials.
inline bool braid_relation_check(const CartanDatum& cd, int i, int j, int samples, std::uint64_t seed = 1)
{
    if (i == j)
        throw Error(ErrorKind::InvalidArgument, "braid relation needs distinct nodes");
    const int mij = cd.m(i, j);
    const BraidWord left = alternating_word(i, j, mij);
    const BraidWord right = alternating_word(j, i, mij);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < samples; ++k) {
        LaurentMonomial m = random_monomial(cd, rng);
        if (apply_s_word(cd, left, m) != apply_s_word(cd, right, m))
            return false;
    }
    return true;
}

} // namespace qlab
