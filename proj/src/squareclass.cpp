#include "normcomb/squareclass.hpp"

#include <bit>
#include <sstream>

namespace normcomb {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::MixedGroups: return "MixedGroups";
  case ErrorKind::UnknownLabel: return "UnknownLabel";
  case ErrorKind::ZeroScalar: return "ZeroScalar";
  case ErrorKind::ContradictionFound: return "ContradictionFound";
  case ErrorKind::InconsistentHypotheses: return "InconsistentHypotheses";
  case ErrorKind::UnknownTheorem: return "UnknownTheorem";
  case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
  case ErrorKind::DivisionByZero: return "DivisionByZero";
  case ErrorKind::OracleMismatch: return "OracleMismatch";
  case ErrorKind::TrivialClass: return "TrivialClass";
  case ErrorKind::MissingFact: return "MissingFact";
  case ErrorKind::Overflow: return "Overflow";
  case ErrorKind::Parse: return "Parse";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

namespace {

constexpr std::array<std::string_view, 8> kLabelsA = {
    "1", "-1", "2", "-2", "5", "-5", "10", "-10"};
constexpr std::array<std::string_view, 8> kLabelsB = {
    "1", "-1", "2", "-2", "c", "-c", "2c", "-2c"};

const std::array<std::string_view, 8> &labels_for(Basis basis) {
  return basis == Basis::CaseA ? kLabelsA : kLabelsB;
}

void require_same(Basis a, Basis b) {
  if (a != b)
    throw Error(ErrorKind::MixedGroups,
                "square classes from different basis groups");
}

// Accept the unicode minus sign as well as ASCII '-'.
std::string normalize_label(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 3, "\xE2\x88\x92") == 0) {
      out.push_back('-');
      i += 2;
    } else if (text[i] != ' ') {
      out.push_back(text[i]);
    }
  }
  if (!out.empty() && out[0] == '+')
    out.erase(0, 1);
  return out;
}

} // namespace

std::array<std::string_view, 3> ClassGroup::basis_labels() const {
  if (basis_ == Basis::CaseA)
    return {"-1", "2", "5"};
  return {"-1", "2", "c"};
}

std::string_view ClassGroup::label(std::uint8_t bits) const {
  return labels_for(basis_)[bits & 7u];
}

std::string SquareClass::label() const {
  return std::string(labels_for(basis_)[bits_]);
}

SquareClass class_mul(SquareClass a, SquareClass b) {
  require_same(a.basis(), b.basis());
  return {a.basis(), static_cast<std::uint8_t>(a.bits() ^ b.bits())};
}

SquareClass parse_class(std::string_view label, ClassGroup group) {
  const std::string norm = normalize_label(label);
  const auto &labels = labels_for(group.basis());
  for (std::uint8_t i = 0; i < 8; ++i)
    if (labels[i] == norm)
      return {group.basis(), i};
  throw Error(ErrorKind::UnknownLabel,
              "'" + std::string(label) + "' is not a canonical class label");
}

std::string format_class(SquareClass c) { return c.label(); }

ClassSet::ClassSet(Basis basis, std::initializer_list<SquareClass> members)
    : basis_(basis) {
  for (auto c : members) {
    require_same(basis, c.basis());
    mask_ |= static_cast<std::uint8_t>(1u << c.bits());
  }
}

int ClassSet::size() const { return std::popcount(mask_); }

bool ClassSet::subset_of(const ClassSet &other) const {
  require_same(basis_, other.basis_);
  return (mask_ & ~other.mask_) == 0;
}

std::vector<SquareClass> ClassSet::members() const {
  std::vector<SquareClass> out;
  for (std::uint8_t i = 0; i < 8; ++i)
    if ((mask_ >> i) & 1u)
      out.emplace_back(basis_, i);
  return out;
}

ClassSet ClassSet::with(SquareClass c) const {
  require_same(basis_, c.basis());
  return {basis_, static_cast<std::uint8_t>(mask_ | (1u << c.bits()))};
}

ClassSet ClassSet::without(SquareClass c) const {
  require_same(basis_, c.basis());
  return {basis_, static_cast<std::uint8_t>(mask_ & ~(1u << c.bits()))};
}

std::vector<std::string> ClassSet::labels() const {
  std::vector<std::string> out;
  for (auto c : members())
    out.push_back(c.label());
  return out;
}

std::string ClassSet::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto &l : labels()) {
    if (!first)
      os << ", ";
    os << l;
    first = false;
  }
  os << '}';
  return os.str();
}

ClassSet set_intersect(const std::vector<ClassSet> &sets) {
  if (sets.empty())
    throw Error(ErrorKind::InvalidArgument, "intersection of no sets");
  ClassSet acc = sets.front();
  for (const auto &s : sets) {
    require_same(acc.basis(), s.basis());
    acc = ClassSet(acc.basis(), acc.mask() & s.mask());
  }
  return acc;
}

ClassSet set_union(const ClassSet &a, const ClassSet &b) {
  require_same(a.basis(), b.basis());
  return {a.basis(), static_cast<std::uint8_t>(a.mask() | b.mask())};
}

std::uint8_t mask_coset(std::uint8_t bits, std::uint8_t mask) {
  std::uint8_t out = 0;
  for (unsigned i = 0; i < 8; ++i)
    if ((mask >> i) & 1u)
      out |= static_cast<std::uint8_t>(1u << (i ^ bits));
  return out;
}

std::uint8_t mask_product(std::uint8_t s, std::uint8_t t) {
  std::uint8_t out = 0;
  for (unsigned i = 0; i < 8; ++i)
    if ((s >> i) & 1u)
      out |= mask_coset(static_cast<std::uint8_t>(i), t);
  return out;
}

ClassSet coset(SquareClass a, const ClassSet &s) {
  require_same(a.basis(), s.basis());
  return {s.basis(), mask_coset(a.bits(), s.mask())};
}

ClassSet product_set(const ClassSet &s, const ClassSet &t) {
  require_same(s.basis(), t.basis());
  return {s.basis(), mask_product(s.mask(), t.mask())};
}

ClassSet parse_class_set(const std::vector<std::string> &labels,
                         ClassGroup group) {
  ClassSet out = ClassSet::empty(group.basis());
  for (const auto &l : labels)
    out = out.with(parse_class(l, group));
  return out;
}

} // namespace normcomb
