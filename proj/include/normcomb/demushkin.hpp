#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

namespace normcomb {

struct DemushkinPresentation {
  int p = 2;
  /// Degree [F:Q_p].
  int n = 1;
  /// nullopt means s is infinite.
  std::optional<int> s = 1;

  int rank() const { return n + 2; }
};

struct Abelianization {
  /// Order of the cyclic torsion part (1 when trivial).
  std::int64_t torsion = 1;
  int free_rank = 0;
};

/// Exponent vector of the relation in the abelianization. Throws
/// InvalidArgument for p not prime, n < 1 or s < 1.
std::vector<std::int64_t> relation_exponents(const DemushkinPresentation &pres);
Abelianization abelianization(const DemushkinPresentation &pres);
int square_class_rank(int n, int p);

nlohmann::json to_json(const DemushkinPresentation &pres, const Abelianization &ab);

} // namespace normcomb
