#include "coneray/poly_json.hpp"

#include <algorithm>

#include "coneray/error.hpp"
#include "json_detail.hpp"

namespace coneray {

using detail::ojson;

namespace detail {

ojson poly_json(const HomPoly& p) {
  ojson j;
  j["nvars"] = p.nvars();
  j["degree"] = p.degree();
  ojson terms = ojson::array();
  for (const auto& [e, c] : p.terms()) {
    ojson t;
    t["exp"] = e;
    t["coeff"] = scalar_json(c, p.mode());
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

HomPoly poly_from(const ojson& j) {
  int nvars = int_field(j, "nvars");
  int degree = int_field(j, "degree");
  if (nvars < 1 || degree < 0) {
    fail(Errc::InputError, "polynomial nvars/degree out of range");
  }
  const ojson& terms = field(j, "terms");
  if (!terms.is_array()) fail(Errc::InputError, "\"terms\" must be an array");
  HomPoly p = HomPoly::zero(nvars, degree);
  bool saw_float = false;
  for (const ojson& t : terms) {
    const ojson& ej = field(t, "exp");
    if (!ej.is_array()) fail(Errc::InputError, "term \"exp\" must be an array");
    Exps e;
    for (const ojson& x : ej) {
      if (!x.is_number_integer()) {
        fail(Errc::InputError, "term exponents must be integers");
      }
      e.push_back(x.get<int>());
    }
    p.add_term(e, scalar_from_json(field(t, "coeff"), &saw_float));
  }
  if (saw_float) p.taint_numeric();
  return p;
}

}  // namespace detail

std::string poly_to_json(const HomPoly& p) { return detail::poly_json(p).dump(2); }

HomPoly poly_from_json(const std::string& text) {
  return detail::poly_from(detail::parse_text(text));
}

std::string tensor_to_json(const ElastTensor& c) {
  ojson j;
  const int d = c.dim();
  j["d"] = d;
  ojson entries = ojson::array();
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          auto orb = ElastTensor::orbit(i, jj, k, l);
          // canonical orbit member only
          if (std::array<int, 4>{i, jj, k, l} !=
              *std::min_element(orb.begin(), orb.end()))
            continue;
          const Rational& v = c.at(i, jj, k, l);
          if (v == 0) continue;
          ojson e;
          e["i"] = i + 1;
          e["j"] = jj + 1;
          e["k"] = k + 1;
          e["l"] = l + 1;
          e["value"] = detail::scalar_json(v, c.mode());
          entries.push_back(std::move(e));
        }
  j["entries"] = std::move(entries);
  j["strict"] = false;
  return j.dump(2);
}

ElastTensor tensor_from_json(const std::string& text) {
  ojson j = detail::parse_text(text);
  int d = detail::int_field(j, "d");
  const ojson& entries = detail::field(j, "entries");
  if (!entries.is_array()) fail(Errc::InputError, "\"entries\" must be an array");
  bool strict = false;
  if (auto it = j.find("strict"); it != j.end()) {
    if (!it->is_boolean()) fail(Errc::InputError, "\"strict\" must be a boolean");
    strict = it->get<bool>();
  }
  std::vector<TensorEntry> raw;
  bool saw_float = false;
  for (const ojson& e : entries) {
    TensorEntry te;
    te.i = detail::int_field(e, "i") - 1;
    te.j = detail::int_field(e, "j") - 1;
    te.k = detail::int_field(e, "k") - 1;
    te.l = detail::int_field(e, "l") - 1;
    if (te.i < 0 || te.i >= d || te.j < 0 || te.j >= d || te.k < 0 ||
        te.k >= d || te.l < 0 || te.l >= d) {
      fail(Errc::InputError, "tensor entry index out of range 1.." + std::to_string(d));
    }
    te.value = detail::scalar_from_json(detail::field(e, "value"), &saw_float);
    raw.push_back(std::move(te));
  }
  ElastTensor c = ElastTensor::from_entries(d, raw, strict);
  if (saw_float) c.taint_numeric();
  return c;
}

}  // namespace coneray
