#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

namespace qlab {

/// A vertex (i, a) of I x Z: node i (1-based) and integer spectral parameter a.
struct Vertex {
    int node = 0;
    int param = 0;

    friend constexpr bool operator==(Vertex, Vertex) = default;
    friend constexpr auto operator<=>(Vertex, Vertex) = default;
};

inline std::ostream& operator<<(std::ostream& os, Vertex x)
{
    return os << '(' << x.node << ',' << x.param << ')';
}

/// Finitely supported integer function on I x Z, stored as a flat vector of
/// (vertex, value) pairs sorted lexicographically by (node, param). Zero values
/// are never stored, so equality of the storage is equality of functions.
class LatticeVector {
public:
    struct Entry {
        Vertex at;
        std::int64_t value;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    LatticeVector() = default;

    LatticeVector(std::initializer_list<std::pair<Vertex, std::int64_t>> init)
    {
        for (auto& [x, n] : init)
            add(x, n);
    }

    static LatticeVector unit(Vertex x, std::int64_t n = 1)
    {
        LatticeVector r;
        r.add(x, n);
        return r;
    }

    std::int64_t operator[](Vertex x) const
    {
        auto it = find(x);
        return (it != entries_.end() && it->at == x) ? it->value : 0;
    }

    void add(Vertex x, std::int64_t delta)
    {
        if (delta == 0)
            return;
        auto it = find(x);
        if (it != entries_.end() && it->at == x) {
            it->value += delta;
            if (it->value == 0)
                entries_.erase(it);
        } else {
            entries_.insert(it, Entry{x, delta});
        }
    }

    void set(Vertex x, std::int64_t value) { add(x, value - (*this)[x]); }

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    /// Sum of all values.
    std::int64_t total() const
    {
        std::int64_t s = 0;
        for (auto& e : entries_)
            s += e.value;
        return s;
    }

    /// Sum of the values at one node.
    std::int64_t node_total(int node) const
    {
        std::int64_t s = 0;
        for (auto& e : entries_)
            if (e.at.node == node)
                s += e.value;
        return s;
    }

    bool nonnegative() const
    {
        return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.value >= 0; });
    }

    LatticeVector& operator+=(const LatticeVector& o) { return merge(o, 1); }
    LatticeVector& operator-=(const LatticeVector& o) { return merge(o, -1); }

    friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
    friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }

    friend LatticeVector operator*(std::int64_t k, const LatticeVector& a)
    {
        if (k == 0)
            return {};
        LatticeVector r = a;
        for (auto& e : r.entries_)
            e.value *= k;
        return r;
    }

    LatticeVector operator-() const { return -1 * *this; }

    /// Same values, every parameter moved by `shift`.
    LatticeVector translated(int shift) const
    {
        LatticeVector r = *this;
        for (auto& e : r.entries_)
            e.at.param += shift;
        return r;
    }

    /// Restriction to one node.
    LatticeVector restricted(int node) const
    {
        LatticeVector r;
        for (auto& e : entries_)
            if (e.at.node == node)
                r.entries_.push_back(e);
        return r;
    }

    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;

    friend bool operator<(const LatticeVector& a, const LatticeVector& b)
    {
        return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                                            b.entries_.end(), [](const Entry& x, const Entry& y) {
                                                if (x.at != y.at)
                                                    return x.at < y.at;
                                                return x.value < y.value;
                                            });
    }

    std::size_t hash() const noexcept
    {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (auto& e : entries_) {
            auto mix = [&h](std::uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
            mix(static_cast<std::uint64_t>(e.at.node));
            mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(e.at.param)));
            mix(static_cast<std::uint64_t>(e.value));
        }
        return h;
    }

private:
    std::vector<Entry>::iterator find(Vertex x)
    {
        return std::lower_bound(entries_.begin(), entries_.end(), x,
                                [](const Entry& e, Vertex v) { return e.at < v; });
    }
    std::vector<Entry>::const_iterator find(Vertex x) const
    {
        return std::lower_bound(entries_.begin(), entries_.end(), x,
                                [](const Entry& e, Vertex v) { return e.at < v; });
    }

    LatticeVector& merge(const LatticeVector& o, std::int64_t sign)
    {
        std::vector<Entry> out;
        out.reserve(entries_.size() + o.entries_.size());
        auto a = entries_.begin();
        auto b = o.entries_.begin();
        while (a != entries_.end() || b != o.entries_.end()) {
            if (b == o.entries_.end() || (a != entries_.end() && a->at < b->at)) {
                out.push_back(*a++);
            } else if (a == entries_.end() || b->at < a->at) {
                out.push_back(Entry{b->at, sign * b->value});
                ++b;
            } else {
                std::int64_t s = a->value + sign * b->value;
                if (s != 0)
                    out.push_back(Entry{a->at, s});
                ++a;
                ++b;
            }
        }
        entries_ = std::move(out);
        return *this;
    }

    std::vector<Entry> entries_;
};

inline std::ostream& operator<<(std::ostream& os, const LatticeVector& v)
{
    os << '{';
    bool first = true;
    for (auto& e : v) {
        if (!first)
            os << ", ";
        first = false;
        os << e.at << ':' << e.value;
    }
    return os << '}';
}

struct LatticeVectorHash {
    std::size_t operator()(const LatticeVector& v) const noexcept { return v.hash(); }
};

} // namespace qlab
