#pragma once

// Shared helpers for the JSON front doors.  Kept out of the public headers so
// nlohmann/json stays an implementation detail of the library.

#include <string>

#include "coneray/error.hpp"
#include "coneray/hompoly.hpp"
#include "coneray/rational.hpp"
#include "json.hpp"

namespace coneray::detail {

using ojson = nlohmann::ordered_json;

// Exact values print as "p" or "p/q" strings; numeric-mode values as doubles.
inline ojson scalar_json(const Rational& v, Mode mode) {
  if (mode == Mode::Exact) return format_rational(v);
  return to_double(v);
}

// Accepts either representation; reports whether a float was seen so callers
// can taint the containing object.
inline Rational scalar_from_json(const ojson& j, bool* saw_float) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) {
    *saw_float = true;
    return Rational(j.get<double>());
  }
  fail(Errc::InputError, "expected a number or \"p/q\" string, got " + j.dump());
}

inline ojson parse_text(const std::string& text) {
  ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::InputError, "malformed JSON input");
  return j;
}

inline const ojson& field(const ojson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    fail(Errc::InputError, std::string("missing JSON field \"") + key + "\"");
  }
  return *it;
}

inline int int_field(const ojson& j, const char* key) {
  const ojson& v = field(j, key);
  if (!v.is_number_integer()) {
    fail(Errc::InputError, std::string("JSON field \"") + key + "\" must be an integer");
  }
  return v.get<int>();
}

ojson poly_json(const HomPoly& p);
HomPoly poly_from(const ojson& j);

}  // namespace coneray::detail
