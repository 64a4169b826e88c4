#pragma once

#include "packlab/core.hpp"
#include "packlab/io.hpp"

#include <string>
#include <utility>
#include <vector>

namespace packlab {

/// A function constant on each cell of a finite partition. Cell ids made of
/// '0'/'1' only are read as cylinders of the Cantor set (a prefix contains
/// its extensions); any other ids are opaque labels.
struct SimpleFunction {
  std::vector<std::string> cells;
  std::vector<double> values;

  // Throws InvalidInput on size mismatch, repeated or overlapping cells,
  // non-finite values, or a cylinder family that does not cover the space.
  void validate() const;
  bool cantor() const;
};

/// v -> 2k with 2k - 1 <= v < 2k + 1, cell by cell.
SimpleFunction round_even(const SimpleFunction& f);
double round_even_value(double v);

/// Rounding of a cell-wise representative of a function with oscillation
/// `osc` on each cell; the bound is 1 + osc.
std::pair<SimpleFunction, double> round_even_zero_dim(const SimpleFunction& f, double osc);

/// sup |f - g| over the common refinement.
double sup_distance(const SimpleFunction& f, const SimpleFunction& g);

/// sup |g1 - g2| for even-integer-valued functions; throws
/// VerificationFailure if distinct functions come closer than 2.
double check_even_separation(const SimpleFunction& g1, const SimpleFunction& g2);

Json simple_function_to_json(const SimpleFunction& f);
SimpleFunction simple_function_from_json(const Json& j);

}  // namespace packlab
