#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "cellwalk/group.hpp"
#include "cellwalk/types.hpp"

namespace cellwalk {

/// Finitely supported formal sum over the group with coefficients in S
/// (S = Rational for the exact mode, double for the float mode).
/// Invariant: no zero coefficients are stored, so equality is structural.
template <class S>
class GroupRingElement {
public:
    using Terms = std::map<GroupElement, S>;

    GroupRingElement() = default;

    explicit GroupRingElement(Group g) : group_(g) {}

    static GroupRingElement zero(Group g) { return GroupRingElement(g); }

    static GroupRingElement one(Group g) {
        return monomial(g, GroupElement::identity(g), S(1));
    }

    static GroupRingElement monomial(Group g, const GroupElement& e, S coeff) {
        GroupRingElement r(g);
        r.add_term(e, std::move(coeff));
        return r;
    }

    const Group& group() const { return group_; }
    const Terms& terms() const { return terms_; }
    std::size_t support_size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    S coefficient(const GroupElement& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? ScalarTraits<S>::zero() : it->second;
    }

    S identity_coefficient() const {
        return coefficient(GroupElement::identity(group_));
    }

    /// Accumulate, dropping the term if the sum cancels exactly.
    void add_term(const GroupElement& e, S coeff) {
        if (ScalarTraits<S>::is_zero(coeff)) return;
        auto [it, inserted] = terms_.try_emplace(e, std::move(coeff));
        if (!inserted) {
            it->second += coeff;
            if (ScalarTraits<S>::is_zero(it->second)) terms_.erase(it);
        }
    }

    GroupRingElement operator+(const GroupRingElement& other) const {
        require_same_group(other);
        GroupRingElement r = *this;
        for (const auto& [e, c] : other.terms_) r.add_term(e, c);
        return r;
    }

    GroupRingElement operator-(const GroupRingElement& other) const {
        require_same_group(other);
        GroupRingElement r = *this;
        for (const auto& [e, c] : other.terms_) r.add_term(e, -c);
        return r;
    }

    GroupRingElement operator-() const {
        GroupRingElement r(group_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    /// Convolution product: (ab)(g) = sum_h a(h) b(h^{-1} g).
    GroupRingElement operator*(const GroupRingElement& other) const {
        require_same_group(other);
        GroupRingElement r(group_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : other.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }

    GroupRingElement operator*(const S& scalar) const {
        GroupRingElement r(group_);
        if (ScalarTraits<S>::is_zero(scalar)) return r;
        for (const auto& [e, c] : terms_) r.add_term(e, c * scalar);
        return r;
    }

    /// Star involution a*(g) = conj(a(g^{-1})); coefficients are real here.
    GroupRingElement involution() const {
        GroupRingElement r(group_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(-e, c);
        return r;
    }

    /// Sum of all coefficients (the augmentation g -> 1).
    S augmentation() const {
        S s = ScalarTraits<S>::zero();
        for (const auto& [e, c] : terms_) s += c;
        return s;
    }

    bool operator==(const GroupRingElement& other) const {
        return group_ == other.group_ && terms_ == other.terms_;
    }

private:
    void require_same_group(const GroupRingElement& other) const {
        if (!(group_ == other.group_))
            throw DimensionError("group ring operation on mismatched groups");
    }

    Group group_;
    Terms terms_;
};

template <class S>
GroupRingElement<S> operator*(const S& scalar, const GroupRingElement<S>& a) {
    return a * scalar;
}

/// Dense matrix over the group ring, indexed by cell-orbit ranges.
template <class S>
class GroupRingMatrix {
public:
    GroupRingMatrix() = default;

    GroupRingMatrix(Group g, int rows, int cols)
        : group_(g), rows_(rows), cols_(cols),
          entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                   GroupRingElement<S>(g)) {}

    static GroupRingMatrix identity(Group g, int n) {
        GroupRingMatrix m(g, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = GroupRingElement<S>::one(g);
        return m;
    }

    const Group& group() const { return group_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    GroupRingElement<S>& at(int i, int j) {
        return entries_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                        static_cast<std::size_t>(j)];
    }
    const GroupRingElement<S>& at(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                        static_cast<std::size_t>(j)];
    }

    std::size_t total_support() const {
        std::size_t n = 0;
        for (const auto& e : entries_) n += e.support_size();
        return n;
    }

    GroupRingMatrix operator+(const GroupRingMatrix& other) const {
        require_shape(other, rows_, cols_);
        GroupRingMatrix r = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            r.entries_[i] = r.entries_[i] + other.entries_[i];
        return r;
    }

    GroupRingMatrix operator-(const GroupRingMatrix& other) const {
        require_shape(other, rows_, cols_);
        GroupRingMatrix r = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            r.entries_[i] = r.entries_[i] - other.entries_[i];
        return r;
    }

    GroupRingMatrix operator*(const GroupRingMatrix& other) const {
        if (cols_ != other.rows_)
            throw DimensionError("matrix product dimension mismatch");
        GroupRingMatrix r(group_, rows_, other.cols_);
        std::size_t produced = 0;
        const std::size_t cap = support_cap().load();
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < other.cols_; ++j) {
                GroupRingElement<S> acc(group_);
                for (int k = 0; k < cols_; ++k) {
                    const auto& a = at(i, k);
                    const auto& b = other.at(k, j);
                    if (a.is_zero() || b.is_zero()) continue;
                    for (const auto& [ea, ca] : a.terms())
                        for (const auto& [eb, cb] : b.terms()) acc.add_term(ea + eb, ca * cb);
                }
                produced += acc.support_size();
                if (produced > cap)
                    throw SupportCapError("matrix product exceeded the support cap of " +
                                          std::to_string(cap) + " terms");
                r.at(i, j) = std::move(acc);
            }
        }
        return r;
    }

    GroupRingMatrix operator*(const S& scalar) const {
        GroupRingMatrix r(group_, rows_, cols_);
        for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i] * scalar;
        return r;
    }

    /// Power by iterated multiplication; n = 0 yields the identity.
    GroupRingMatrix power(int n) const {
        if (rows_ != cols_) throw DimensionError("matrix power requires a square matrix");
        if (n < 0) throw DimensionError("matrix power requires n >= 0");
        GroupRingMatrix r = identity(group_, rows_);
        for (int i = 0; i < n; ++i) r = r * (*this);
        return r;
    }

    /// Adjoint: transpose with entrywise involution.
    GroupRingMatrix adjoint() const {
        GroupRingMatrix r(group_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j).involution();
        return r;
    }

    /// Von Neumann trace: identity coefficients summed over the diagonal.
    S identity_trace() const {
        if (rows_ != cols_) throw DimensionError("identity trace requires a square matrix");
        S s = ScalarTraits<S>::zero();
        for (int i = 0; i < rows_; ++i) s += at(i, i).identity_coefficient();
        return s;
    }

    /// Per-column sums of augmentations (used for stochasticity checks).
    std::vector<S> augmentation_column_sums() const {
        std::vector<S> sums(static_cast<std::size_t>(cols_), ScalarTraits<S>::zero());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                sums[static_cast<std::size_t>(j)] += at(i, j).augmentation();
        return sums;
    }

    bool operator==(const GroupRingMatrix& other) const {
        return group_ == other.group_ && rows_ == other.rows_ && cols_ == other.cols_ &&
               entries_ == other.entries_;
    }

    /// Largest absolute coefficient of the matrix, as a double.
    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& e : entries_)
            for (const auto& [g, c] : e.terms())
                m = std::max(m, std::abs(ScalarTraits<S>::to_double(c)));
        return m;
    }

private:
    void require_shape(const GroupRingMatrix& other, int r, int c) const {
        if (other.rows_ != r || other.cols_ != c || !(group_ == other.group_))
            throw DimensionError("matrix shape or group mismatch");
    }

    Group group_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<GroupRingElement<S>> entries_;
};

inline GroupRingElement<double> to_float(const GroupRingElement<Rational>& a) {
    GroupRingElement<double> r(a.group());
    for (const auto& [e, c] : a.terms()) r.add_term(e, c.get_d());
    return r;
}

inline GroupRingMatrix<double> to_float(const GroupRingMatrix<Rational>& m) {
    GroupRingMatrix<double> r(m.group(), m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = to_float(m.at(i, j));
    return r;
}

}  // namespace cellwalk
