#include "coneray/report_json.hpp"

#include <cmath>

#include "coneray/rational.hpp"
#include "json_detail.hpp"

namespace coneray {

namespace {

using detail::ojson;

ojson finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

ojson vec_json(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(x);
  return a;
}

ojson cert_json(const SosCertificate& cert) {
  ojson j;
  j["dx"] = cert.dx;
  j["dy"] = cert.dy;
  j["route"] = cert.route;
  j["exact"] = cert.exact;
  j["residual"] = cert.residual;
  j["minor_coeffs"] = vec_json(cert.minor_coeffs);
  ojson squares = ojson::array();
  for (const auto& sq : cert.squares) {
    ojson rows = ojson::array();
    for (const auto& row : sq.matrix) rows.push_back(vec_json(row));
    ojson s;
    s["matrix"] = std::move(rows);
    squares.push_back(std::move(s));
  }
  j["squares"] = std::move(squares);
  if (cert.exact) {
    ojson ex = ojson::array();
    for (const auto& [w, row] : cert.exact_squares) {
      ojson s;
      s["weight"] = format_rational(w);
      ojson r = ojson::array();
      for (const auto& v : row) r.push_back(format_rational(v));
      s["row"] = std::move(r);
      ex.push_back(std::move(s));
    }
    j["exact_squares"] = std::move(ex);
  }
  return j;
}

ojson qc_json(const QcVerdict& v) {
  ojson j;
  j["kind"] = qc_kind_name(v.kind);
  j["multiplier_level"] = v.multiplier_level;
  j["min_value"] = v.min_value;
  j["starts"] = v.starts;
  if (v.kind == QcKind::NotQuasiconvex) {
    j["x"] = vec_json(v.x);
    j["y"] = vec_json(v.y);
    if (v.witness_exact) j["exact_value"] = format_rational(v.exact_value);
  }
  if (!v.certification_note.empty()) j["certification"] = v.certification_note;
  return j;
}

ojson polyconvexity_json(const PolyconvexityResult& r) {
  ojson j;
  j["kind"] = polyconvexity_kind_name(r.kind);
  j["t_star"] = r.t_star;
  j["t_star_normalized"] = r.t_star_normalized;
  j["slice_status"] = slice_status_name(r.slice.status);
  j["iterations"] = r.slice.iterations;
  return j;
}

ojson extremality_json(const ExtremalityVerdict& v) {
  ojson j;
  j["kind"] = extremality_kind_name(v.kind);
  j["kernel_dim"] = v.kernel_dim;
  j["zero_count"] = v.zero_count;
  j["rows_value"] = v.rows_value;
  j["rows_gradient"] = v.rows_gradient;
  j["rows_hessian"] = v.rows_hessian;
  j["gap_ratio"] = finite_or_null(v.gap_ratio);
  j["membership_residual"] = v.membership_residual;
  j["singular_values"] = vec_json(v.singular_values);
  if (v.kind == ExtremalityKind::ExtremalByPerfectSquare)
    j["square_root"] = detail::poly_json(v.square_root);
  if (v.kind == ExtremalityKind::NotExtremal) {
    j["witness"] = detail::poly_json(v.witness);
    j["witness_scale"] = v.witness_scale;
  }
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

}  // namespace

std::string report_to_json(const ClassificationReport& rep) {
  ojson j;
  j["verdict"] = verdict_name(rep.verdict);

  ojson ds;
  ds["kind"] = det_status_name(rep.det_status.kind);
  if (rep.det_status.kind == DetStatus::Kind::Unknown)
    ds["det"] = nullptr;
  else
    ds["det"] = detail::poly_json(rep.det_status.det);
  if (rep.det_status.kind == DetStatus::Kind::PerfectSquare)
    ds["square_root"] = detail::poly_json(rep.det_status.square_root);
  if (rep.det_status.kind == DetStatus::Kind::NotExtremal)
    ds["witness"] = detail::poly_json(rep.det_status.witness);
  j["det_status"] = std::move(ds);

  j["quasiconvexity"] = qc_json(rep.quasiconvexity);
  j["certificate"] = rep.certificate ? cert_json(*rep.certificate) : ojson(nullptr);

  ojson ev;
  ev["seed"] = rep.seed;
  ev["input_digest"] = rep.input_digest;
  if (rep.verdict == Verdict::Inconclusive)
    ev["reason"] = inconclusive_reason_name(rep.reason);
  if (!rep.note.empty()) ev["note"] = rep.note;
  if (rep.polyconvexity) ev["polyconvexity"] = polyconvexity_json(*rep.polyconvexity);
  if (rep.extremality) ev["extremality"] = extremality_json(*rep.extremality);
  j["evidence"] = std::move(ev);

  return j.dump(2);
}

std::string certificate_to_json(const SosCertificate& cert) {
  return cert_json(cert).dump(2);
}

std::string quasiconvexity_to_json(const QcVerdict& v) { return qc_json(v).dump(2); }

std::string polyconvexity_to_json(const PolyconvexityResult& r) {
  ojson j = polyconvexity_json(r);
  if (r.kind == PolyconvexityResult::Kind::Polyconvex)
    j["certificate"] = cert_json(r.certificate);
  return j.dump(2);
}

std::string extremality_to_json(const ExtremalityVerdict& v) {
  return extremality_json(v).dump(2);
}

}  // namespace coneray
