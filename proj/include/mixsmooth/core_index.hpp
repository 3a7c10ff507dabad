#pragma once

// Multi-index arithmetic, integer index boxes, binary masks and dyadic
// geometry shared by every other module.
//
// Axes are 0-based in code. Anything printed for a human (reports, error
// messages) uses 1-based axis numbers.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mixsmooth {

using Point = std::vector<double>;

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t d, int value = 0) : v_(d, value) {}
    MultiIndex(std::initializer_list<int> values) : v_(values) {}
    explicit MultiIndex(std::vector<int> values) : v_(std::move(values)) {}

    std::size_t size() const { return v_.size(); }
    int operator[](std::size_t j) const { return v_[j]; }
    int& operator[](std::size_t j) { return v_[j]; }
    const std::vector<int>& values() const { return v_; }
    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

    // Componentwise partial order.
    bool leq(const MultiIndex& o) const;
    bool less(const MultiIndex& o) const;

    MultiIndex operator+(const MultiIndex& o) const;
    MultiIndex operator-(const MultiIndex& o) const;
    MultiIndex operator*(int s) const;
    MultiIndex plus_part() const;

    int sum() const;
    int max() const;
    int min() const;
    bool all_nonnegative() const;
    std::string str() const;

private:
    std::vector<int> v_;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& m);

// Lexicographic order so MultiIndex can key ordered maps.
struct MultiIndexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return a.values() < b.values(); }
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& m) const;
};

// 2^k componentwise, as integers.
MultiIndex pow2(const MultiIndex& k);

// s(x) = {j : x_j != 0}, 0-based.
std::vector<std::size_t> support_set(const MultiIndex& x);

// chi_J: 1 on J, 0 elsewhere. Throws std::out_of_range if some j >= d.
MultiIndex indicator_vector(std::span<const std::size_t> J, std::size_t d);

double min_coord(std::span<const double> y);

// Element of {0,1}^d.
class BinaryMask {
public:
    explicit BinaryMask(MultiIndex bits);
    static BinaryMask from_bits(unsigned bits, std::size_t d);

    const MultiIndex& index() const { return bits_; }
    std::size_t size() const { return bits_.size(); }
    bool test(std::size_t j) const { return bits_[j] != 0; }
    int weight() const { return bits_.sum(); }
    // (-e)^eps
    int sign() const { return (weight() % 2 == 0) ? 1 : -1; }
    // s(eps) contained in s(other)
    bool subset_of(const MultiIndex& other) const;

private:
    MultiIndex bits_;
};

// All masks eps in {0,1}^d with s(eps) contained in s(kappa).
std::vector<BinaryMask> masks_within(const MultiIndex& kappa);

// The set {nu : lo <= nu <= hi}; empty if lo_j > hi_j for some j.
class IntBox {
public:
    IntBox(MultiIndex lo, MultiIndex hi);

    const MultiIndex& lo() const { return lo_; }
    const MultiIndex& hi() const { return hi_; }
    std::size_t dim() const { return lo_.size(); }
    bool empty() const;
    std::size_t count() const;
    bool contains(const MultiIndex& nu) const;
    // Row-major position of nu (first axis slowest).
    std::size_t linear_index(const MultiIndex& nu) const;

    void for_each(const std::function<void(const MultiIndex&)>& fn) const;
    std::vector<MultiIndex> members() const;

private:
    MultiIndex lo_, hi_;
};

// N^d_{lo,hi}
IntBox index_range(const MultiIndex& lo, const MultiIndex& hi);

// Axis-aligned box corner + edge * I^d.
class Box {
public:
    Box() = default;
    Box(Point corner, Point edge);

    static Box unit(std::size_t d);

    std::size_t dim() const { return corner_.size(); }
    const Point& corner() const { return corner_; }
    const Point& edge() const { return edge_; }
    double lo(std::size_t j) const { return corner_[j]; }
    double hi(std::size_t j) const { return corner_[j] + edge_[j]; }
    double volume() const;

    // [corner, corner + edge)
    bool contains_half_open(std::span<const double> x) const;
    // [corner, corner + edge]
    bool contains_closed(std::span<const double> x) const;
    // (corner, corner + edge) with a relative slack, for geometry assertions.
    bool contains_box(const Box& inner, double tol = 1e-12) const;
    bool intersects_open(const Box& other) const;

    // corner + edge * u
    Point map_from_unit(std::span<const double> u) const;

    friend bool operator==(const Box&, const Box&) = default;

private:
    Point corner_, edge_;
};

// Q_{kappa,nu} = 2^{-kappa} nu + 2^{-kappa} I^d
Box dyadic_cell(const MultiIndex& kappa, const MultiIndex& nu);

// Subsets of {0..d-1} as bit patterns, nonempty ones only when requested.
std::vector<std::vector<std::size_t>> all_subsets(std::size_t d, bool include_empty);

// "{1,3}" style 1-based rendering of an axis set.
std::string axis_set_label(std::span<const std::size_t> J);

}  // namespace mixsmooth
