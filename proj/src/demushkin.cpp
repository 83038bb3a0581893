#include "normcomb/demushkin.hpp"

#include <numeric>

#include "normcomb/error.hpp"

namespace normcomb {

namespace {

bool is_prime(int p) {
  if (p < 2)
    return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0)
      return false;
  return true;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > INT64_MAX / b)
      throw Error(ErrorKind::Overflow, "p^s does not fit in 64 bits");
    r *= b;
  }
  return r;
}

void validate(const DemushkinPresentation &pres) {
  if (!is_prime(pres.p))
    throw Error(ErrorKind::InvalidArgument, "p must be prime");
  if (pres.n < 1)
    throw Error(ErrorKind::InvalidArgument, "degree must be at least 1");
  if (pres.s && *pres.s < 1)
    throw Error(ErrorKind::InvalidArgument, "s must be at least 1");
}

} // namespace

std::vector<std::int64_t> relation_exponents(const DemushkinPresentation &pres) {
  validate(pres);
  std::vector<std::int64_t> row(pres.rank(), 0);
  if (!pres.s)
    return row;
  const std::int64_t q = ipow(pres.p, *pres.s);
  row[0] = q;
  if (q == 2)
    row[1] = 4;
  return row;
}

Abelianization abelianization(const DemushkinPresentation &pres) {
  const auto row = relation_exponents(pres);
  // Smith normal form of a single row: (gcd, 0, ..., 0).
  std::int64_t g = 0;
  for (auto e : row)
    g = std::gcd(g, e);
  Abelianization ab;
  if (g == 0) {
    ab.free_rank = pres.rank();
  } else {
    ab.torsion = g;
    ab.free_rank = pres.rank() - 1;
  }
  return ab;
}

int square_class_rank(int n, int p) {
  if (n < 1)
    throw Error(ErrorKind::InvalidArgument, "degree must be at least 1");
  if (!is_prime(p))
    throw Error(ErrorKind::InvalidArgument, "p must be prime");
  return n + 2;
}

nlohmann::json to_json(const DemushkinPresentation &pres, const Abelianization &ab) {
  nlohmann::json j = {{"p", pres.p},
                      {"n", pres.n},
                      {"generators", pres.rank()},
                      {"relation_exponents", relation_exponents(pres)},
                      {"torsion", ab.torsion},
                      {"free_rank", ab.free_rank}};
  j["s"] = pres.s ? nlohmann::json(*pres.s) : nlohmann::json("inf");
  j["abelianization"] = (ab.torsion > 1 ? "Z/" + std::to_string(ab.torsion) + " x " : std::string()) +
                        "Z_" + std::to_string(pres.p) + "^" + std::to_string(ab.free_rank);
  if (pres.p == 2)
    j["square_class_rank"] = square_class_rank(pres.n, pres.p);
  return j;
}

} // namespace normcomb
