#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace geograph {

// Exact rational scalar. mpq_class keeps denominator > 0 and
// gcd(|num|, den) = 1 after every arithmetic operation.
using Rat = mpq_class;

/// Parse an exact rational from a string like "3", "-7/2".
/// Rejects zero denominators and anything that is not integer/integer.
inline Rat rat_parse(const std::string& s) {
  Rat r;
  try {
    r = Rat(s);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational: \"" + s + "\"");
  }
  if (r.get_den() == 0)
    throw std::invalid_argument("zero denominator in rational: \"" + s + "\"");
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline double rat_double(const Rat& r) { return r.get_d(); }

inline bool rat_is_zero(const Rat& r) { return r == 0; }

}  // namespace geograph
