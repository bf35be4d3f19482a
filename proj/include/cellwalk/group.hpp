#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cellwalk/types.hpp"

namespace cellwalk {

/// The acting group: trivial, or free abelian of rank >= 1.
struct Group {
    enum class Kind { trivial, free_abelian };

    Kind kind = Kind::trivial;
    int rank = 0;

    static Group trivial() { return Group{Kind::trivial, 0}; }

    static Group free_abelian(int rank);

    bool is_trivial() const { return kind == Kind::trivial; }

    bool operator==(const Group&) const = default;

    std::string describe() const;
};

/// Element of the group, written additively: coordinates in Z^rank.
/// The trivial group has rank 0 and a single element.
class GroupElement {
public:
    static constexpr int kMaxRank = 8;

    GroupElement() = default;

    static GroupElement identity(const Group& g) {
        GroupElement e;
        e.rank_ = static_cast<std::uint8_t>(g.rank);
        return e;
    }

    static GroupElement of(std::span<const std::int32_t> coords) {
        if (coords.size() > kMaxRank)
            throw DimensionError("group rank exceeds supported maximum of 8");
        GroupElement e;
        e.rank_ = static_cast<std::uint8_t>(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) e.c_[i] = coords[i];
        return e;
    }

    static GroupElement of(std::initializer_list<std::int32_t> coords) {
        return of(std::span<const std::int32_t>(coords.begin(), coords.size()));
    }

    int rank() const { return rank_; }

    std::int32_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

    bool is_identity() const {
        for (int i = 0; i < rank_; ++i)
            if (c_[static_cast<std::size_t>(i)] != 0) return false;
        return true;
    }

    GroupElement operator+(const GroupElement& other) const {
        GroupElement r;
        r.rank_ = rank_;
        for (int i = 0; i < rank_; ++i)
            r.c_[static_cast<std::size_t>(i)] =
                c_[static_cast<std::size_t>(i)] + other.c_[static_cast<std::size_t>(i)];
        return r;
    }

    GroupElement operator-() const {
        GroupElement r;
        r.rank_ = rank_;
        for (int i = 0; i < rank_; ++i)
            r.c_[static_cast<std::size_t>(i)] = -c_[static_cast<std::size_t>(i)];
        return r;
    }

    GroupElement operator-(const GroupElement& other) const { return *this + (-other); }

    auto operator<=>(const GroupElement& other) const {
        if (auto c = rank_ <=> other.rank_; c != 0) return c;
        for (int i = 0; i < rank_; ++i) {
            if (auto c = c_[static_cast<std::size_t>(i)] <=> other.c_[static_cast<std::size_t>(i)];
                c != 0)
                return c;
        }
        return std::strong_ordering::equal;
    }

    bool operator==(const GroupElement& other) const {
        return (*this <=> other) == std::strong_ordering::equal;
    }

    std::vector<std::int32_t> coords() const {
        return std::vector<std::int32_t>(c_.begin(), c_.begin() + rank_);
    }

    std::string describe() const;

private:
    std::array<std::int32_t, kMaxRank> c_{};
    std::uint8_t rank_ = 0;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (int i = 0; i < g.rank(); ++i) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(g[i]));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

inline Group Group::free_abelian(int rank) {
    if (rank < 1) throw DimensionError("free abelian group requires rank >= 1");
    if (rank > GroupElement::kMaxRank)
        throw DimensionError("group rank exceeds supported maximum of 8");
    return Group{Kind::free_abelian, rank};
}

inline std::string Group::describe() const {
    if (is_trivial()) return "trivial";
    return "Z^" + std::to_string(rank);
}

inline std::string GroupElement::describe() const {
    if (rank_ == 0) return "e";
    std::string s = "(";
    for (int i = 0; i < rank_; ++i) {
        if (i) s += ",";
        s += std::to_string(c_[static_cast<std::size_t>(i)]);
    }
    return s + ")";
}

}  // namespace cellwalk
