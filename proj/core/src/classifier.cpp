#include "coneray/classifier.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coneray/biquadratic.hpp"
#include "coneray/error.hpp"
#include "coneray/poly_json.hpp"
#include "coneray/poly_matrix.hpp"
#include "coneray/quadform.hpp"
#include "coneray/structure.hpp"

namespace coneray {

namespace {

std::string fnv1a_hex(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string vec_str(const std::vector<double>& v) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ")";
  return out.str();
}

// Rebuilds the float view (weights folded into the rows) of a certificate
// whose exact_squares were just assembled.
void sync_float_view(SosCertificate& cert) {
  cert.squares.clear();
  for (const auto& [w, row] : cert.exact_squares) {
    SosSquare sq;
    sq.matrix.assign(cert.dx, std::vector<double>(cert.dy, 0.0));
    const double sw = std::sqrt(to_double(w));
    for (int i = 0; i < cert.dx; ++i)
      for (int j = 0; j < cert.dy; ++j)
        sq.matrix[i][j] = sw * to_double(row[i * cert.dy + j]);
    cert.squares.push_back(std::move(sq));
  }
  cert.exact = true;
  cert.residual = 0.0;
}

bool acoustic_match_exact(const PolyMatrix& t, const SosCertificate& cert) {
  BiquadraticForm b(cert.dx, cert.dy, Mode::Exact);
  for (const auto& [w, row] : cert.exact_squares) b.add_bilinear_square(w, row);
  return b.y_matrix() == t;
}

// Gram difference between the certificate's squares and the input, expressed
// in the minor-shift basis. Two Gram representatives of the same biquadratic
// differ exactly by such shifts, so this always resolves.
std::vector<double> implied_minor_coeffs(const BiquadraticForm& f,
                                         const SosCertificate& cert) {
  const int dx = f.dx(), dy = f.dy(), nb = dx * dy;
  std::vector<double> bg(static_cast<size_t>(nb) * nb, 0.0);
  for (const auto& sq : cert.squares)
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b)
        bg[static_cast<size_t>(a) * nb + b] +=
            sq.matrix[a / dy][a % dy] * sq.matrix[b / dy][b % dy];
  const auto& g = f.gram();
  std::vector<double> out;
  for (int i = 0; i < dx; ++i)
    for (int k = i + 1; k < dx; ++k)
      for (int j = 0; j < dy; ++j)
        for (int l = j + 1; l < dy; ++l) {
          const int a = i * dy + j, b = k * dy + l;
          out.push_back(2.0 * (bg[static_cast<size_t>(a) * nb + b] -
                               to_double(g[a * nb + b])));
        }
  return out;
}

bool float_residual_ok(const BiquadraticForm& f, SosCertificate& cert) {
  cert.exact = false;
  cert.exact_squares.clear();
  cert.residual = certificate_residual(f, cert);
  return cert.residual <= 1e-8 * std::max(1.0, f.max_abs_entry());
}

// A zero acoustic diagonal entry forces its whole row to vanish, which drops
// one x variable and leaves a 2 x 3 problem.
std::optional<SosCertificate> route_zero_diagonal(const BiquadraticForm& f,
                                                  const PolyMatrix& t,
                                                  uint64_t seed) {
  for (int p = 0; p < 3; ++p) {
    if (!t.at(p, p).is_zero()) continue;
    bool row_zero = true;
    for (int j = 0; j < 3; ++j) row_zero = row_zero && t.at(p, j).is_zero();
    if (!row_zero) continue;

    std::vector<int> keep;
    for (int j = 0; j < 3; ++j)
      if (j != p) keep.push_back(j);
    SosCertificate sub;
    try {
      sub = terpstra_sos_2xn(
          BiquadraticForm::from_poly_matrix(t.select(keep, keep)), seed);
    } catch (const Error&) {
      continue;
    }

    SosCertificate cert;
    cert.dx = 3;
    cert.dy = 3;
    cert.route = "zero-diagonal";
    if (sub.exact) {
      for (const auto& [w, row] : sub.exact_squares) {
        std::vector<Rational> big(9, Rational(0));
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 3; ++j) big[keep[i] * 3 + j] = row[i * 3 + j];
        cert.exact_squares.push_back({w, std::move(big)});
      }
      sync_float_view(cert);
      if (!acoustic_match_exact(t, cert)) continue;
    } else {
      for (const auto& sq : sub.squares) {
        SosSquare big;
        big.matrix.assign(3, std::vector<double>(3, 0.0));
        for (int i = 0; i < 2; ++i) big.matrix[keep[i]] = sq.matrix[i];
        cert.squares.push_back(std::move(big));
      }
      if (!float_residual_ok(f, cert)) continue;
    }
    cert.minor_coeffs = implied_minor_coeffs(f, cert);
    return cert;
  }
  return std::nullopt;
}

std::vector<Rational> linear_coeffs(const HomPoly& l) {
  std::vector<Rational> out(l.nvars(), Rational(0));
  for (int j = 0; j < l.nvars(); ++j) {
    Exps e(l.nvars(), 0);
    e[j] = 1;
    out[j] = l.coeff(e);
  }
  return out;
}

// Appends the squares of a diagonalized psd quadratic in y, each riding on
// the x slot `slot`. Returns false when the quadratic is not psd after all.
bool append_slot_squares(const HomPoly& r, int slot,
                         std::vector<std::pair<Rational, std::vector<Rational>>>& out) {
  QuadForm q(r);
  if (q.negative_index() > 0) return false;
  const QuadDiag& dg = q.diagonalization();
  for (size_t m = 0; m < dg.d.size(); ++m) {
    if (dg.d[m] == 0) continue;
    std::vector<Rational> row(9, Rational(0));
    for (int j = 0; j < 3; ++j) row[slot * 3 + j] = dg.forms[m].coeffs[j];
    out.push_back({dg.d[m], std::move(row)});
  }
  return true;
}

// Vanishing cofactor row: the acoustic matrix matches one of the two
// structured templates, whose summands are squares by inspection.
std::optional<SosCertificate> route_structured(const BiquadraticForm& f,
                                               const PolyMatrix& t) {
  for (int k = 2; k >= 0; --k) {
    bool row_vanishes = true;
    for (int j = 0; j < 3; ++j)
      row_vanishes = row_vanishes && t.cofactor(k, j).is_zero();
    if (!row_vanishes) continue;

    std::vector<int> idx = {0, 1, 2};
    std::swap(idx[k], idx[2]);
    StructuredForm sf;
    try {
      sf = structured_form_detect(t.select(idx, idx));
    } catch (const Error&) {
      continue;
    }
    if (sf.kind == StructuredForm::Kind::NotStructured) continue;

    // squares in the permuted slots (the distinguished variable sits last)
    std::vector<std::pair<Rational, std::vector<Rational>>> perm;
    bool ok = true;
    if (sf.kind == StructuredForm::Kind::Form36) {
      QuadForm pq(sf.p);
      ok = pq.negative_index() == 0;
      if (ok) {
        const QuadDiag& dg = pq.diagonalization();
        for (size_t m = 0; m < dg.d.size(); ++m) {
          if (dg.d[m] == 0) continue;
          const auto& lc = dg.forms[m].coeffs;
          std::vector<Rational> row(9, Rational(0));
          for (int j = 0; j < 3; ++j) {
            row[j] = lc[j];
            row[3 + j] = sf.alpha * lc[j];
            row[6 + j] = sf.beta * lc[j];
          }
          perm.push_back({dg.d[m], std::move(row)});
        }
        ok = append_slot_squares(sf.q - sf.p.scaled(sf.beta * sf.beta), 2, perm);
      }
    } else {
      std::vector<Rational> row(9, Rational(0));
      const auto c1 = linear_coeffs(sf.l1);
      const auto c2 = linear_coeffs(sf.l2);
      const auto c3 = linear_coeffs(sf.l3);
      for (int j = 0; j < 3; ++j) {
        row[j] = c1[j];
        row[3 + j] = c2[j];
        row[6 + j] = c3[j];
      }
      perm.push_back({Rational(1), std::move(row)});
      ok = append_slot_squares(sf.q - sf.l3 * sf.l3, 2, perm);
    }
    if (!ok) continue;

    SosCertificate cert;
    cert.dx = 3;
    cert.dy = 3;
    cert.route = sf.kind == StructuredForm::Kind::Form36 ? "structured-form36"
                                                         : "structured-form37";
    for (auto& [w, prow] : perm) {
      std::vector<Rational> big(9, Rational(0));
      for (int s = 0; s < 3; ++s)
        for (int j = 0; j < 3; ++j) big[idx[s] * 3 + j] = prow[s * 3 + j];
      cert.exact_squares.push_back({w, std::move(big)});
    }
    sync_float_view(cert);
    if (!acoustic_match_exact(t, cert)) continue;
    cert.minor_coeffs = implied_minor_coeffs(f, cert);
    return cert;
  }
  return std::nullopt;
}

// The pivot row is a combination of the other two, so substituting
// x_u + r x_p and x_v + q x_p reduces to the 2 x 3 block. Constant r, q lift
// any certificate; polynomial ones need the exact division to land.
std::optional<SosCertificate> route_row_combination(const BiquadraticForm& f,
                                                    const PolyMatrix& t,
                                                    uint64_t seed) {
  for (int p = 2; p >= 0; --p) {
    RowCombination rc;
    try {
      rc = row_combination_coeffs(t, p);
    } catch (const Error&) {
      continue;
    }
    SosCertificate sub;
    try {
      sub = terpstra_sos_2xn(
          BiquadraticForm::from_poly_matrix(t.select({rc.u, rc.v}, {rc.u, rc.v})),
          seed);
    } catch (const Error&) {
      continue;
    }

    // reduced fractions of two equal-degree cofactors: a degree-0 denominator
    // means the ratio itself is a rational constant
    const bool r_const = rc.r_num.is_zero() || rc.r_den.degree() == 0;
    const bool q_const = rc.q_num.is_zero() || rc.q_den.degree() == 0;

    SosCertificate cert;
    cert.dx = 3;
    cert.dy = 3;
    if (r_const && q_const) {
      const Exps e0(3, 0);
      const Rational a =
          rc.r_num.is_zero() ? Rational(0) : rc.r_num.coeff(e0) / rc.r_den.coeff(e0);
      const Rational b =
          rc.q_num.is_zero() ? Rational(0) : rc.q_num.coeff(e0) / rc.q_den.coeff(e0);
      cert.route = "case1-constant";
      if (sub.exact) {
        for (const auto& [w, row] : sub.exact_squares) {
          std::vector<Rational> big(9, Rational(0));
          for (int j = 0; j < 3; ++j) {
            big[rc.u * 3 + j] = row[j];
            big[rc.v * 3 + j] = row[3 + j];
            big[rc.pivot * 3 + j] = a * row[j] + b * row[3 + j];
          }
          cert.exact_squares.push_back({w, std::move(big)});
        }
        sync_float_view(cert);
        if (!acoustic_match_exact(t, cert)) continue;
      } else {
        const double ad = to_double(a), bd = to_double(b);
        for (const auto& sq : sub.squares) {
          SosSquare big;
          big.matrix.assign(3, std::vector<double>(3, 0.0));
          for (int j = 0; j < 3; ++j) {
            big.matrix[rc.u][j] = sq.matrix[0][j];
            big.matrix[rc.v][j] = sq.matrix[1][j];
            big.matrix[rc.pivot][j] = ad * sq.matrix[0][j] + bd * sq.matrix[1][j];
          }
          cert.squares.push_back(std::move(big));
        }
        if (!float_residual_ok(f, cert)) continue;
      }
    } else {
      if (!sub.exact) continue;
      cert.route = "case2-linear";
      const HomPoly g0 = poly_gcd(rc.r_den, rc.q_den);
      const auto ddq = poly_divide(rc.r_den * rc.q_den, g0);
      if (!ddq) continue;
      const HomPoly& dd = *ddq;
      auto numerator_over = [&](const HomPoly& num,
                                const HomPoly& den) -> std::optional<HomPoly> {
        if (num.is_zero()) return HomPoly::zero(3, dd.degree(), Mode::Exact);
        const auto q = poly_divide(dd, den);
        if (!q) return std::nullopt;
        return num * *q;
      };
      const auto n_r = numerator_over(rc.r_num, rc.r_den);
      const auto n_q = numerator_over(rc.q_num, rc.q_den);
      if (!n_r || !n_q) continue;

      bool lifted = true;
      for (const auto& [w, row] : sub.exact_squares) {
        HomPoly ak = HomPoly::zero(3, 1, Mode::Exact);
        HomPoly bk = HomPoly::zero(3, 1, Mode::Exact);
        for (int j = 0; j < 3; ++j) {
          Exps e(3, 0);
          e[j] = 1;
          if (row[j] != 0) ak.add_term(e, row[j]);
          if (row[3 + j] != 0) bk.add_term(e, row[3 + j]);
        }
        const auto hk = poly_divide(ak * *n_r + bk * *n_q, dd);
        if (!hk) {
          lifted = false;
          break;
        }
        std::vector<Rational> big(9, Rational(0));
        for (int j = 0; j < 3; ++j) {
          Exps e(3, 0);
          e[j] = 1;
          big[rc.u * 3 + j] = row[j];
          big[rc.v * 3 + j] = row[3 + j];
          big[rc.pivot * 3 + j] = hk->coeff(e);
        }
        cert.exact_squares.push_back({w, std::move(big)});
      }
      if (!lifted) continue;
      sync_float_view(cert);
      if (!acoustic_match_exact(t, cert)) continue;
    }
    cert.minor_coeffs = implied_minor_coeffs(f, cert);
    return cert;
  }
  return std::nullopt;
}

std::optional<SosCertificate> route_fallback(const ElastTensor& c, uint64_t seed) {
  const PolyconvexityResult pr = polyconvexity_test(c, seed);
  if (pr.kind != PolyconvexityResult::Kind::Polyconvex) return std::nullopt;
  SosCertificate cert = pr.certificate;
  cert.route = "sdp-fallback";
  return cert;
}

}  // namespace

SosCertificate zero_det_sos(const ElastTensor& c, uint64_t seed) {
  if (c.dim() != 3)
    fail(Errc::UnsupportedDimension, "zero_det_sos needs a dimension-3 tensor");
  const PolyMatrix t = c.acoustic_matrix();
  if (!t.det().is_zero())
    fail(Errc::PreconditionViolated,
         "acoustic determinant is not identically zero");
  const BiquadraticForm f = BiquadraticForm::from_tensor(c);

  if (auto cert = route_zero_diagonal(f, t, seed)) return *cert;
  if (auto cert = route_structured(f, t)) return *cert;
  if (auto cert = route_row_combination(f, t, seed)) return *cert;
  if (auto cert = route_fallback(c, seed)) return *cert;
  fail(Errc::CertificateNotFound,
       "no sum-of-squares certificate found for a form with identically zero "
       "acoustic determinant; every structured route and the Gram-solver "
       "fallback failed");
}

SosCertificate sos_certificate(const ElastTensor& c, uint64_t seed) {
  if (c.dim() == 3 && c.acoustic_matrix().det().is_zero())
    return zero_det_sos(c, seed);
  const PolyconvexityResult pr = polyconvexity_test(c, seed);
  if (pr.kind == PolyconvexityResult::Kind::Polyconvex) return pr.certificate;
  fail(Errc::CertificateNotFound,
       pr.kind == PolyconvexityResult::Kind::NotPolyconvex
           ? "no sum-of-squares certificate exists: the Gram slice is infeasible"
           : "the Gram solver stalled before producing a certificate");
}

ClassificationReport classify(const ElastTensor& c, const ClassifyOptions& opts) {
  if (c.dim() != 3)
    fail(Errc::UnsupportedDimension,
         "classification is only decided in dimension 3");

  ClassificationReport rep;
  rep.seed = opts.seed;
  rep.input_digest = fnv1a_hex(tensor_to_json(c));

  QcOptions qo = opts.qc;
  qo.seed = opts.seed;
  rep.quasiconvexity = quasiconvexity_test(c, qo);
  if (rep.quasiconvexity.kind == QcKind::NotQuasiconvex) {
    std::ostringstream msg;
    msg << "not in the cone: f(x ox y) = " << rep.quasiconvexity.min_value
        << " < 0 at x = " << vec_str(rep.quasiconvexity.x)
        << ", y = " << vec_str(rep.quasiconvexity.y);
    fail(Errc::NotInCone, msg.str());
  }
  if (rep.quasiconvexity.kind == QcKind::Inconclusive) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = InconclusiveReason::QuasiconvexityUndecided;
    rep.note = "the rank-one minimum search did not certify nonnegativity";
    return rep;
  }

  const PolyMatrix t = c.acoustic_matrix();
  rep.det_status.det = t.det();

  if (rep.det_status.det.is_zero()) {
    rep.det_status.kind = DetStatus::Kind::IdenticallyZero;
    rep.verdict = Verdict::Polyconvex;
    try {
      rep.certificate = zero_det_sos(c, opts.seed);
    } catch (const Error& e) {
      if (e.code() != Errc::CertificateNotFound) throw;
      rep.verdict = Verdict::Inconclusive;
      rep.reason = InconclusiveReason::InternalInconsistency;
      rep.note = e.what();
    }
    return rep;
  }

  if (auto root = perfect_square_test(rep.det_status.det)) {
    rep.det_status.kind = DetStatus::Kind::PerfectSquare;
    rep.det_status.square_root = *root;
    const PolyconvexityResult pr = polyconvexity_test(c, opts.seed);
    rep.polyconvexity = pr;
    switch (pr.kind) {
      case PolyconvexityResult::Kind::Polyconvex:
        rep.verdict = Verdict::Polyconvex;
        rep.certificate = pr.certificate;
        break;
      case PolyconvexityResult::Kind::NotPolyconvex:
        rep.verdict = Verdict::ExtremeRay;
        rep.note =
            "square determinant and no Gram representative is psd, which "
            "leaves only the extreme-ray alternative";
        break;
      case PolyconvexityResult::Kind::Inconclusive:
        rep.verdict = Verdict::Inconclusive;
        rep.reason = InconclusiveReason::SolverStalled;
        rep.note = "the Gram solver stalled on the square-determinant branch";
        break;
    }
    return rep;
  }

  ExtremalityVerdict ev;
  try {
    ev = extremality_test(rep.det_status.det, opts.seed);
  } catch (const Error& e) {
    if (e.code() != Errc::NotNonnegative) throw;
    rep.verdict = Verdict::Inconclusive;
    rep.reason = InconclusiveReason::ExtremalityUndecided;
    rep.note = e.what();
    return rep;
  }
  rep.extremality = ev;
  switch (ev.kind) {
    case ExtremalityKind::Extremal:
      rep.det_status.kind = DetStatus::Kind::ExtremalNonSquare;
      rep.verdict = Verdict::ExtremeRay;
      break;
    case ExtremalityKind::ExtremalByPerfectSquare:
      // contradicts the square test that routed us here
      rep.verdict = Verdict::Inconclusive;
      rep.reason = InconclusiveReason::InternalInconsistency;
      rep.note = "the extremality test factored a determinant the square test "
                 "had rejected";
      break;
    case ExtremalityKind::NotExtremal:
      rep.det_status.kind = DetStatus::Kind::NotExtremal;
      rep.det_status.witness = ev.witness;
      rep.verdict = Verdict::Inconclusive;
      rep.reason = InconclusiveReason::TheoremSilent;
      rep.note =
          "the determinant splits off an independent nonnegative summand; "
          "neither decision branch applies";
      break;
    case ExtremalityKind::Inconclusive:
      rep.verdict = Verdict::Inconclusive;
      rep.reason = InconclusiveReason::ExtremalityUndecided;
      rep.note = ev.note;
      break;
  }
  return rep;
}

const char* det_status_name(DetStatus::Kind k) {
  switch (k) {
    case DetStatus::Kind::IdenticallyZero: return "IdenticallyZero";
    case DetStatus::Kind::PerfectSquare: return "PerfectSquare";
    case DetStatus::Kind::ExtremalNonSquare: return "ExtremalNonSquare";
    case DetStatus::Kind::NotExtremal: return "NotExtremal";
    case DetStatus::Kind::Unknown: return "Unknown";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ExtremeRay: return "ExtremeRay";
    case Verdict::Polyconvex: return "Polyconvex";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* inconclusive_reason_name(InconclusiveReason r) {
  switch (r) {
    case InconclusiveReason::None: return "None";
    case InconclusiveReason::QuasiconvexityUndecided:
      return "QuasiconvexityUndecided";
    case InconclusiveReason::SolverStalled: return "SolverStalled";
    case InconclusiveReason::TheoremSilent: return "TheoremSilent";
    case InconclusiveReason::ExtremalityUndecided:
      return "ExtremalityUndecided";
    case InconclusiveReason::InternalInconsistency:
      return "InternalInconsistency";
  }
  return "?";
}

}  // namespace coneray
