#pragma once

#include "qlab/cartan.hpp"
#include "qlab/errors.hpp"
#include "qlab/lattice.hpp"
#include "qlab/lweights.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace qlab {

/// True iff every Y_{i,*} exponent of m is >= 0.
inline bool is_i_dominant(const LaurentMonomial& m, int i)
{
    for (auto& e : m.exponents())
        if (e.at.node == i && e.value < 0)
            return false;
    return true;
}

/// One monomial of a rank-1 character, relative to its top term: the
/// A_{i,*}^{-1} exponents keyed by spectral parameter.
struct Sl2Term {
    std::map<int, std::int64_t> a_exps;
    std::int64_t mult = 1;

    friend bool operator==(const Sl2Term&, const Sl2Term&) = default;
};

/// Rank-1 character of the simple module with highest monomial
/// prod_b Y_b^{params[b]}, spacing q_i^2 = q^{2 d_i}.
///
/// The multiset is split greedily (smallest parameter first) into maximal
/// strings {b, b+2d, ..., b+2(l-1)d}. A string of length l contributes the l+1
/// monomials m_r = m_0 prod_{t=1}^{r} A_{b+2(l-t)d+d}^{-1}; strings multiply.
inline std::vector<Sl2Term> sl2_expansion(int di, std::map<int, std::int64_t> params)
{
    std::map<std::map<int, std::int64_t>, std::int64_t> acc;
    acc[{}] = 1;
    for (;;) {
        auto first = std::find_if(params.begin(), params.end(), [](auto& p) { return p.second > 0; });
        if (first == params.end())
            break;
        const int b = first->first;
        int len = 0;
        for (int x = b;; x += 2 * di) {
            auto it = params.find(x);
            if (it == params.end() || it->second == 0)
                break;
            --it->second;
            ++len;
        }
        std::vector<std::map<int, std::int64_t>> string_terms(1);
        for (int t = 1; t <= len; ++t) {
            auto next = string_terms.back();
            next[b + 2 * (len - t) * di + di] += 1;
            string_terms.push_back(std::move(next));
        }
        std::map<std::map<int, std::int64_t>, std::int64_t> product;
        for (auto& [lhs, mult] : acc)
            for (auto& rhs : string_terms) {
                auto key = lhs;
                for (auto& [p, n] : rhs)
                    key[p] += n;
                product[key] += mult;
            }
        acc = std::move(product);
    }
    std::vector<Sl2Term> out;
    for (auto& [k, n] : acc)
        out.push_back(Sl2Term{k, n});
    return out;
}

struct QCharEntry {
    LatticeVector v;
    std::int64_t mu = 0;

    std::int64_t height() const { return v.total(); }
};

/// q-character of L(Y_{anchor,q^0}): entries v with multiplicity, sorted by
/// height then lexicographically. Entry 0 is psi itself.
struct QChar {
    std::string type;
    int anchor = 1;
    std::vector<QCharEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }

    std::int64_t multiplicity(const LatticeVector& v) const
    {
        for (auto& e : entries)
            if (e.v == v)
                return e.mu;
        return 0;
    }

    /// Sum of multiplicities, i.e. the dimension of the module.
    std::int64_t total_multiplicity() const
    {
        std::int64_t s = 0;
        for (auto& e : entries)
            s += e.mu;
        return s;
    }

    std::int64_t max_height() const
    {
        std::int64_t h = 0;
        for (auto& e : entries)
            h = std::max(h, e.height());
        return h;
    }
};

struct FmCaps {
    std::size_t max_monomials = 200000;
    std::int64_t max_height = 64;
};

namespace detail {

inline bool height_lex_less(const LatticeVector& a, const LatticeVector& b)
{
    auto ha = a.total(), hb = b.total();
    if (ha != hb)
        return ha < hb;
    return a < b;
}

} // namespace detail

/// Frenkel-Mukhin closure for the fundamental module of node k.
///
/// Monomials are processed by increasing height. Each monomial carries, per
/// direction i, the count c_i of it already covered by i-strings from above.
/// Its multiplicity is c_i for any i in which it is not i-dominant. An
/// i-dominant monomial starts mu - c_i new i-strings: its rank-1 expansion
/// adds (mu - c_i) * mult to the direction-i count of every lower term. All
/// contributions go strictly upward in height, so a height class is complete
/// when it is reached. `shuffle_seed` permutes the processing order inside each
/// height class (the result must not change).
inline QChar fm_qchar(const CartanDatum& cd, int k, FmCaps caps = {},
                      std::optional<std::uint64_t> shuffle_seed = std::nullopt)
{
    if (k < 1 || k > cd.rank())
        throw Error(ErrorKind::InvalidArgument, "node " + std::to_string(k) + " out of range for " + cd.label());
    const int n = cd.rank();

    struct Node {
        LatticeVector v;
        LaurentMonomial y;
        std::vector<std::int64_t> counts;
        std::int64_t mu = 0;
    };
    std::vector<Node> nodes;
    std::unordered_map<LatticeVector, std::size_t, LatticeVectorHash> index;
    std::map<std::int64_t, std::vector<std::size_t>> buckets;

    auto intern = [&](const LatticeVector& v) -> std::size_t {
        auto it = index.find(v);
        if (it != index.end())
            return it->second;
        const std::int64_t h = v.total();
        if (h > caps.max_height)
            throw Error(ErrorKind::CapExceeded, "height cap " + std::to_string(caps.max_height) + " exceeded for " +
                                                    cd.label() + " node " + std::to_string(k) + " after " +
                                                    std::to_string(nodes.size()) + " monomials");
        if (nodes.size() >= caps.max_monomials)
            throw Error(ErrorKind::CapExceeded, "monomial cap " + std::to_string(caps.max_monomials) +
                                                    " exceeded for " + cd.label() + " node " + std::to_string(k) +
                                                    " at height " + std::to_string(h));
        nodes.push_back(Node{v, expand_to_y(cd, AMonomialVector{k, v}), std::vector<std::int64_t>(n, 0), 0});
        index.emplace(v, nodes.size() - 1);
        buckets[h].push_back(nodes.size() - 1);
        return nodes.size() - 1;
    };

    auto inconsistent = [&](std::size_t id, int i) {
        std::ostringstream msg;
        msg << "FM closure inconsistent at " << nodes[id].y << " direction " << i << " (count "
            << nodes[id].counts[i - 1] << ", multiplicity " << nodes[id].mu << ")";
        throw Error(ErrorKind::AlgorithmFailure, msg.str());
    };

    intern(LatticeVector{});
    nodes[0].mu = 1;

    std::mt19937_64 rng(shuffle_seed.value_or(0));
    for (auto bucket_it = buckets.begin(); bucket_it != buckets.end(); ++bucket_it) {
        std::vector<std::size_t> order = bucket_it->second;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return nodes[a].v < nodes[b].v; });
        if (shuffle_seed)
            std::shuffle(order.begin(), order.end(), rng);

        for (std::size_t id : order) {
            if (id != 0) {
                std::int64_t mu = -1;
                for (int i = 1; i <= n; ++i) {
                    if (is_i_dominant(nodes[id].y, i))
                        continue;
                    const std::int64_t c = nodes[id].counts[i - 1];
                    if (mu >= 0 && c != mu)
                        inconsistent(id, i);
                    mu = c;
                }
                if (mu < 0) {
                    std::ostringstream msg;
                    msg << "second dominant monomial " << nodes[id].y << " in " << cd.label() << " node " << k;
                    throw Error(ErrorKind::AlgorithmFailure, msg.str());
                }
                nodes[id].mu = mu;
            }
            for (int i = 1; i <= n; ++i) {
                if (!is_i_dominant(nodes[id].y, i))
                    continue;
                const std::int64_t fresh = nodes[id].mu - nodes[id].counts[i - 1];
                if (fresh < 0)
                    inconsistent(id, i);
                if (fresh == 0)
                    continue;
                std::map<int, std::int64_t> params;
                for (auto& e : nodes[id].y.exponents())
                    if (e.at.node == i)
                        params[e.at.param] = e.value;
                for (auto& term : sl2_expansion(cd.di(i), std::move(params))) {
                    if (term.a_exps.empty())
                        continue;
                    LatticeVector next = nodes[id].v;
                    for (auto& [p, x] : term.a_exps)
                        next.add({i, p}, x);
                    const std::size_t target = intern(next);
                    nodes[target].counts[i - 1] += fresh * term.mult;
                }
            }
        }
    }

    QChar out{cd.label(), k, {}};
    out.entries.reserve(nodes.size());
    for (auto& node : nodes)
        out.entries.push_back(QCharEntry{node.v, node.mu});
    std::sort(out.entries.begin(), out.entries.end(),
              [](const QCharEntry& a, const QCharEntry& b) { return detail::height_lex_less(a.v, b.v); });
    return out;
}

/// Restriction to U_q(g): sum of mu(m) e^{weight(m)}.
inline std::map<ClassicalWeight, std::int64_t> classical_character(const CartanDatum& cd, const QChar& chi)
{
    std::map<ClassicalWeight, std::int64_t> out;
    for (auto& e : chi.entries)
        out[classical_weight(cd, expand_to_y(cd, AMonomialVector{chi.anchor, e.v}))] += e.mu;
    return out;
}

/// True iff every simple reflection permutes the classical character.
inline bool is_weyl_invariant(const CartanDatum& cd, const std::map<ClassicalWeight, std::int64_t>& ch)
{
    for (int i = 1; i <= cd.rank(); ++i)
        for (auto& [wt, mult] : ch) {
            auto it = ch.find(reflect_coeffs(cd, i, wt));
            if (it == ch.end() || it->second != mult)
                return false;
        }
    return true;
}

} // namespace qlab
