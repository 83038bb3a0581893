#pragma once

// Square-class group K^x/(K^x)^2 as the F2-vector space F2^3.
//
// A class is stored as a 3-bit exponent vector relative to the basis
// (-1, 2, g), where g = 5 for Case A and g = c for Case B. Bit 0 is the
// exponent of -1, bit 1 of 2, bit 2 of g. Sets of classes are 8-bit masks
// indexed by that exponent vector.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "normcomb/error.hpp"

namespace normcomb {

enum class Basis : std::uint8_t { CaseA, CaseB };

class ClassGroup {
public:
  explicit constexpr ClassGroup(Basis basis) : basis_(basis) {}

  static constexpr ClassGroup case_a() { return ClassGroup(Basis::CaseA); }
  static constexpr ClassGroup case_b() { return ClassGroup(Basis::CaseB); }

  constexpr Basis basis() const { return basis_; }
  constexpr int order() const { return 8; }

  /// Generator labels in basis order.
  std::array<std::string_view, 3> basis_labels() const;
  /// Canonical label of the class with the given exponent vector.
  std::string_view label(std::uint8_t bits) const;

  friend constexpr bool operator==(ClassGroup, ClassGroup) = default;

private:
  Basis basis_;
};

class SquareClass {
public:
  constexpr SquareClass() = default;
  constexpr SquareClass(Basis basis, std::uint8_t bits)
      : basis_(basis), bits_(static_cast<std::uint8_t>(bits & 7u)) {}

  static constexpr SquareClass one(Basis basis) { return {basis, 0}; }
  static constexpr SquareClass minus_one(Basis basis) { return {basis, 1}; }
  static constexpr SquareClass two(Basis basis) { return {basis, 2}; }
  static constexpr SquareClass generator(Basis basis) { return {basis, 4}; }

  constexpr Basis basis() const { return basis_; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool is_one() const { return bits_ == 0; }
  constexpr bool exponent(int i) const { return (bits_ >> i) & 1u; }

  ClassGroup group() const { return ClassGroup(basis_); }
  std::string label() const;

  friend constexpr bool operator==(SquareClass, SquareClass) = default;

private:
  Basis basis_ = Basis::CaseA;
  std::uint8_t bits_ = 0;
};

/// Group law; throws MixedGroups when the operands use different bases.
SquareClass class_mul(SquareClass a, SquareClass b);
inline SquareClass operator*(SquareClass a, SquareClass b) {
  return class_mul(a, b);
}

SquareClass parse_class(std::string_view label, ClassGroup group);
std::string format_class(SquareClass c);

class ClassSet {
public:
  constexpr ClassSet() = default;
  constexpr ClassSet(Basis basis, std::uint8_t mask)
      : basis_(basis), mask_(mask) {}
  ClassSet(Basis basis, std::initializer_list<SquareClass> members);

  static constexpr ClassSet empty(Basis basis) { return {basis, 0}; }
  static constexpr ClassSet full(Basis basis) { return {basis, 0xFF}; }
  static constexpr ClassSet single(SquareClass c) {
    return {c.basis(), static_cast<std::uint8_t>(1u << c.bits())};
  }

  constexpr Basis basis() const { return basis_; }
  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool is_empty() const { return mask_ == 0; }
  constexpr bool is_full() const { return mask_ == 0xFF; }
  int size() const;
  constexpr bool contains(SquareClass c) const {
    return basis_ == c.basis() && ((mask_ >> c.bits()) & 1u);
  }
  bool subset_of(const ClassSet &other) const;
  std::vector<SquareClass> members() const;

  ClassSet with(SquareClass c) const;
  ClassSet without(SquareClass c) const;
  ClassSet complement() const { return {basis_, static_cast<std::uint8_t>(~mask_)}; }

  /// Sorted canonical labels (exponent-vector order).
  std::vector<std::string> labels() const;
  /// "{1, -5}" style rendering.
  std::string str() const;

  friend constexpr bool operator==(const ClassSet &, const ClassSet &) = default;

private:
  Basis basis_ = Basis::CaseA;
  std::uint8_t mask_ = 0;
};

ClassSet set_intersect(const std::vector<ClassSet> &sets);
ClassSet set_union(const ClassSet &a, const ClassSet &b);
ClassSet coset(SquareClass a, const ClassSet &s);
/// {a*b : a in s, b in t}
ClassSet product_set(const ClassSet &s, const ClassSet &t);
ClassSet parse_class_set(const std::vector<std::string> &labels,
                         ClassGroup group);

// Mask-level helpers shared by the derivation tables.
std::uint8_t mask_coset(std::uint8_t bits, std::uint8_t mask);
std::uint8_t mask_product(std::uint8_t s, std::uint8_t t);

} // namespace normcomb
