#pragma once

#include "qlab/errors.hpp"
#include "qlab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qlab {

/*
  Finite-type symmetrized Cartan data.

  Nodes are numbered 1..n. d(i,j) = (alpha_i, alpha_j) with short roots
  normalized to (alpha, alpha) = 2, c(i,j) = 2 d(i,j) / d(i,i) and
  d_i = d(i,i) / 2. With this normalization every spectral shift that shows
  up in q-characters is an integer.

  Numbering:
    A_n, D_n, E_n, F_4   Bourbaki
    B_n                  chain 1-2-...-n, double bond 1=2, node 1 short
    C_n                  chain 1-2-...-n, double bond 1=2, node 1 long
    G_2                  node 1 short
*/
class CartanDatum {
public:
    CartanDatum() = default;

    CartanDatum(std::string label, std::vector<int> sym, int rank)
        : label_(std::move(label)), rank_(rank), sym_(std::move(sym))
    {
        cartan_.resize(sym_.size());
        for (int i = 1; i <= rank_; ++i)
            for (int j = 1; j <= rank_; ++j)
                cartan_[idx(i, j)] = 2 * d(i, j) / d(i, i);
    }

    const std::string& label() const noexcept { return label_; }
    int rank() const noexcept { return rank_; }

    /// Symmetrized entry d_ij = (alpha_i, alpha_j).
    int d(int i, int j) const { return sym_[idx(i, j)]; }
    /// Cartan entry c_ij = 2 d_ij / d_ii.
    int c(int i, int j) const { return cartan_[idx(i, j)]; }
    /// d_i = d_ii / 2.
    int di(int i) const { return d(i, i) / 2; }

    /// Order of s_i s_j.
    int m(int i, int j) const
    {
        if (i == j)
            return 1;
        switch (c(i, j) * c(j, i)) {
        case 0: return 2;
        case 1: return 3;
        case 2: return 4;
        case 3: return 6;
        }
        throw Error(ErrorKind::AlgorithmFailure, "non-finite bond in " + label_);
    }

    bool adjacent(int i, int j) const { return i != j && d(i, j) != 0; }

    int max_di() const
    {
        int r = 1;
        for (int i = 1; i <= rank_; ++i)
            r = std::max(r, di(i));
        return r;
    }

    int max_abs_c() const
    {
        int r = 0;
        for (int v : cartan_)
            r = std::max(r, v < 0 ? -v : v);
        return r;
    }

    bool simply_laced() const
    {
        for (int i = 1; i <= rank_; ++i)
            if (d(i, i) != 2)
                return false;
        return true;
    }

    std::vector<std::vector<int>> sym_matrix() const { return as_rows(sym_); }
    std::vector<std::vector<int>> cartan_matrix() const { return as_rows(cartan_); }

    friend bool operator==(const CartanDatum& a, const CartanDatum& b)
    {
        return a.label_ == b.label_ && a.sym_ == b.sym_;
    }

private:
    std::size_t idx(int i, int j) const
    {
        if (i < 1 || i > rank_ || j < 1 || j > rank_)
            throw Error(ErrorKind::InvalidArgument, "node index out of range for " + label_);
        return static_cast<std::size_t>((i - 1) * rank_ + (j - 1));
    }

    std::vector<std::vector<int>> as_rows(const std::vector<int>& flat) const
    {
        std::vector<std::vector<int>> rows(rank_, std::vector<int>(rank_));
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j)
                rows[i][j] = flat[i * rank_ + j];
        return rows;
    }

    std::string label_;
    int rank_ = 0;
    std::vector<int> sym_;
    std::vector<int> cartan_;
};

namespace detail {

inline CartanDatum from_dynkin(std::string label, const std::vector<int>& lengths,
                               const std::vector<std::pair<int, int>>& edges)
{
    const int n = static_cast<int>(lengths.size());
    std::vector<int> sym(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i)
        sym[i * n + i] = 2 * lengths[i];
    for (auto [a, b] : edges) {
        int v = -std::max(lengths[a - 1], lengths[b - 1]);
        sym[(a - 1) * n + (b - 1)] = v;
        sym[(b - 1) * n + (a - 1)] = v;
    }
    return CartanDatum(std::move(label), std::move(sym), n);
}

inline std::vector<std::pair<int, int>> chain(int n)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < n; ++i)
        e.emplace_back(i, i + 1);
    return e;
}

} // namespace detail

/// Parses "A3", "A_3", "g2", ... into (series letter, rank).
inline std::pair<char, int> parse_type_label(std::string_view label)
{
    std::string s;
    for (char ch : label)
        if (ch != '_' && !std::isspace(static_cast<unsigned char>(ch)))
            s.push_back(ch);
    if (s.size() < 2 || !std::isalpha(static_cast<unsigned char>(s[0])))
        throw Error(ErrorKind::UnsupportedType, "unrecognized type label '" + std::string(label) + "'");
    char series = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    int rank = 0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(s[k])))
            throw Error(ErrorKind::UnsupportedType, "unrecognized type label '" + std::string(label) + "'");
        rank = rank * 10 + (s[k] - '0');
        if (rank > 99)
            break;
    }
    return {series, rank};
}

inline CartanDatum build_cartan(std::string_view label)
{
    auto [series, n] = parse_type_label(label);
    auto unsupported = [&] {
        return Error(ErrorKind::UnsupportedType, "unsupported type '" + std::string(label) + "'");
    };
    const std::string name = std::string(1, series) + std::to_string(n);
    if (n < 1 || n > 8)
        throw unsupported();

    switch (series) {
    case 'A':
        return detail::from_dynkin(name, std::vector<int>(n, 1), detail::chain(n));
    case 'B': {
        if (n < 2)
            throw unsupported();
        std::vector<int> len(n, 2);
        len[0] = 1;
        return detail::from_dynkin(name, len, detail::chain(n));
    }
    case 'C': {
        if (n < 2)
            throw unsupported();
        std::vector<int> len(n, 1);
        len[0] = 2;
        return detail::from_dynkin(name, len, detail::chain(n));
    }
    case 'D': {
        if (n < 4)
            throw unsupported();
        auto e = detail::chain(n - 1);
        e.emplace_back(n - 2, n);
        return detail::from_dynkin(name, std::vector<int>(n, 1), e);
    }
    case 'E': {
        if (n < 6)
            throw unsupported();
        std::vector<std::pair<int, int>> e = {{1, 3}, {3, 4}, {4, 5}, {2, 4}};
        for (int i = 5; i < n; ++i)
            e.emplace_back(i, i + 1);
        return detail::from_dynkin(name, std::vector<int>(n, 1), e);
    }
    case 'F':
        if (n != 4)
            throw unsupported();
        return detail::from_dynkin(name, {2, 2, 1, 1}, detail::chain(4));
    case 'G':
        if (n != 2)
            throw unsupported();
        return detail::from_dynkin(name, {1, 3}, {{1, 2}});
    default:
        throw unsupported();
    }
}

// ---------------------------------------------------------------------------
// Roots and the Weyl group, in simple-root coordinates.

using RootVector = std::vector<int>;

/// Integer matrix acting on simple-root coordinates (row-major, rank x rank).
struct IntMatrix {
    int n = 0;
    std::vector<int> a;

    static IntMatrix identity(int n)
    {
        IntMatrix m{n, std::vector<int>(static_cast<std::size_t>(n * n), 0)};
        for (int i = 0; i < n; ++i)
            m.a[i * n + i] = 1;
        return m;
    }

    int operator()(int r, int c) const { return a[r * n + c]; }

    friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y)
    {
        IntMatrix z{x.n, std::vector<int>(x.a.size(), 0)};
        for (int i = 0; i < x.n; ++i)
            for (int k = 0; k < x.n; ++k) {
                int xik = x(i, k);
                if (xik == 0)
                    continue;
                for (int j = 0; j < x.n; ++j)
                    z.a[i * x.n + j] += xik * y(k, j);
            }
        return z;
    }

    RootVector apply(const RootVector& v) const
    {
        RootVector r(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r[i] += a[i * n + j] * v[j];
        return r;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
    friend bool operator<(const IntMatrix& x, const IntMatrix& y) { return x.a < y.a; }
};

/// s_i on root coordinates: s_i(alpha_j) = alpha_j - c_ij alpha_i.
inline IntMatrix simple_reflection_matrix(const CartanDatum& cd, int i)
{
    IntMatrix m = IntMatrix::identity(cd.rank());
    for (int j = 1; j <= cd.rank(); ++j)
        m.a[(i - 1) * cd.rank() + (j - 1)] -= cd.c(i, j);
    return m;
}

inline bool is_positive_root(const RootVector& r)
{
    bool any = false;
    for (int x : r) {
        if (x < 0)
            return false;
        any = any || x > 0;
    }
    return any;
}

/// All positive roots, sorted by height then lexicographically.
inline std::vector<RootVector> positive_roots(const CartanDatum& cd)
{
    const int n = cd.rank();
    std::vector<IntMatrix> gens;
    for (int i = 1; i <= n; ++i)
        gens.push_back(simple_reflection_matrix(cd, i));
    std::map<RootVector, bool> seen;
    std::deque<RootVector> queue;
    for (int i = 0; i < n; ++i) {
        RootVector e(n, 0);
        e[i] = 1;
        seen[e] = true;
        queue.push_back(e);
    }
    while (!queue.empty()) {
        RootVector r = queue.front();
        queue.pop_front();
        for (auto& g : gens) {
            RootVector s = g.apply(r);
            if (is_positive_root(s) && !seen.count(s)) {
                seen[s] = true;
                queue.push_back(s);
            }
        }
    }
    std::vector<RootVector> out;
    for (auto& [r, _] : seen)
        out.push_back(r);
    std::stable_sort(out.begin(), out.end(), [](const RootVector& x, const RootVector& y) {
        int hx = 0, hy = 0;
        for (int v : x)
            hx += v;
        for (int v : y)
            hy += v;
        return hx < hy;
    });
    return out;
}

/// A Weyl group element with one reduced word. The word is written in product
/// order: word = {i_t, ..., i_1} means w = s_{i_t} ... s_{i_1}, so the last
/// letter acts first.
struct WeylElement {
    std::vector<int> word;
    IntMatrix matrix;

    std::size_t length() const noexcept { return word.size(); }
};

/// Breadth-first enumeration of W by left multiplication with generators in
/// increasing order. Identity first; each word is a BFS-depth (hence reduced)
/// word. Throws CapExceeded if |W| > cap.
class WeylGroup {
public:
    explicit WeylGroup(const CartanDatum& cd, std::size_t cap = 2000) : rank_(cd.rank())
    {
        for (int i = 1; i <= rank_; ++i)
            gens_.push_back(simple_reflection_matrix(cd, i));
        add(WeylElement{{}, IntMatrix::identity(rank_)});
        for (std::size_t head = 0; head < elements_.size(); ++head) {
            for (int i = 1; i <= rank_; ++i) {
                IntMatrix m = gens_[i - 1] * elements_[head].matrix;
                if (index_.count(m))
                    continue;
                std::vector<int> word{i};
                word.insert(word.end(), elements_[head].word.begin(), elements_[head].word.end());
                add(WeylElement{std::move(word), std::move(m)});
                if (elements_.size() > cap)
                    throw Error(ErrorKind::CapExceeded,
                                "|W| exceeds cap " + std::to_string(cap) + " for " + cd.label());
            }
        }
    }

    const std::vector<WeylElement>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const WeylElement& operator[](std::size_t k) const { return elements_[k]; }

    std::size_t index_of(const IntMatrix& m) const
    {
        auto it = index_.find(m);
        if (it == index_.end())
            throw Error(ErrorKind::InvalidArgument, "matrix is not a Weyl group element");
        return it->second;
    }

    const IntMatrix& generator(int i) const { return gens_[i - 1]; }

    /// The longest element.
    const WeylElement& longest() const { return elements_.back(); }

    /// A reduced word for element k that starts with a different letter than the
    /// stored one, when w has more than one left descent. Empty optional-like
    /// result (empty vector) when none exists.
    std::vector<int> alternative_reduced_word(std::size_t k) const
    {
        const WeylElement& w = elements_[k];
        if (w.word.empty())
            return {};
        for (int j = 1; j <= rank_; ++j) {
            if (j == w.word.front())
                continue;
            std::size_t sj = index_of(gens_[j - 1] * w.matrix);
            if (elements_[sj].length() + 1 == w.length()) {
                std::vector<int> word{j};
                word.insert(word.end(), elements_[sj].word.begin(), elements_[sj].word.end());
                return word;
            }
        }
        return {};
    }

    /// Every reduced word of element k, lexicographically sorted.
    std::vector<std::vector<int>> reduced_words(std::size_t k) const
    {
        std::vector<std::vector<int>> out;
        const WeylElement& w = elements_[k];
        if (w.word.empty())
            return {{}};
        for (int j = 1; j <= rank_; ++j) {
            std::size_t sj = index_of(gens_[j - 1] * w.matrix);
            if (elements_[sj].length() + 1 != w.length())
                continue;
            for (auto& tail : reduced_words(sj)) {
                std::vector<int> word{j};
                word.insert(word.end(), tail.begin(), tail.end());
                out.push_back(std::move(word));
            }
        }
        return out;
    }

    /// Product of simple reflection matrices of a word (product order).
    IntMatrix matrix_of_word(const std::vector<int>& word) const
    {
        IntMatrix m = IntMatrix::identity(rank_);
        for (int i : word)
            m = m * gens_.at(static_cast<std::size_t>(i - 1));
        return m;
    }

private:
    void add(WeylElement e)
    {
        index_.emplace(e.matrix, elements_.size());
        elements_.push_back(std::move(e));
    }

    int rank_;
    std::vector<IntMatrix> gens_;
    std::vector<WeylElement> elements_;
    std::map<IntMatrix, std::size_t> index_;
};

inline std::vector<WeylElement> weyl_elements(const CartanDatum& cd, std::size_t cap = 2000)
{
    return WeylGroup(cd, cap).elements();
}

/// Number of positive roots sent to negative roots by m.
inline int inversion_count(const CartanDatum& cd, const IntMatrix& m)
{
    int k = 0;
    for (auto& r : positive_roots(cd))
        if (!is_positive_root(m.apply(r)))
            ++k;
    return k;
}

// ---------------------------------------------------------------------------
// Weights in the fundamental-weight basis.

/// theta = sum_i theta_i omega_i with exact rational coefficients.
struct WeightVector {
    std::vector<Rational> coeffs;

    Rational operator[](int i) const { return coeffs.at(static_cast<std::size_t>(i - 1)); }
    Rational& operator[](int i) { return coeffs.at(static_cast<std::size_t>(i - 1)); }
    int rank() const { return static_cast<int>(coeffs.size()); }

    static WeightVector constant(int rank, Rational value)
    {
        return WeightVector{std::vector<Rational>(static_cast<std::size_t>(rank), value)};
    }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

/// s_i(theta): theta_j -> theta_j - theta_i c_ji.
template <class T>
std::vector<T> reflect_coeffs(const CartanDatum& cd, int i, std::vector<T> theta)
{
    const T ti = theta.at(static_cast<std::size_t>(i - 1));
    for (int j = 1; j <= cd.rank(); ++j)
        theta[j - 1] -= ti * T(cd.c(j, i));
    return theta;
}

inline WeightVector reflect_weight(const CartanDatum& cd, int i, const WeightVector& theta)
{
    if (theta.rank() != cd.rank())
        throw Error(ErrorKind::ShapeMismatch, "weight has wrong rank");
    return WeightVector{reflect_coeffs(cd, i, theta.coeffs)};
}

/// w(theta) for a word in product order (last letter acts first).
inline WeightVector act_on_weight(const CartanDatum& cd, const std::vector<int>& word, WeightVector theta)
{
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        theta = reflect_weight(cd, *it, theta);
    return theta;
}

/// (theta, u) = sum_i d_i theta_i u_i for u in root (or dimension) coordinates.
template <class Int>
Rational pair_with_root(const CartanDatum& cd, const WeightVector& theta, const std::vector<Int>& u)
{
    Rational s = 0;
    for (int i = 1; i <= cd.rank(); ++i)
        s += Rational(cd.di(i)) * theta[i] * Rational(static_cast<std::int64_t>(u[i - 1]));
    return s;
}

/// True iff theta lies on no root hyperplane.
inline bool is_generic(const CartanDatum& cd, const WeightVector& theta)
{
    if (theta.rank() != cd.rank())
        throw Error(ErrorKind::ShapeMismatch, "weight has wrong rank");
    for (auto& r : positive_roots(cd))
        if (pair_with_root(cd, theta, r) == Rational(0))
            return false;
    return true;
}

} // namespace qlab
