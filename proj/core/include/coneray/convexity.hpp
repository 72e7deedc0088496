#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coneray/affine_psd.hpp"
#include "coneray/biquadratic.hpp"
#include "coneray/elast_tensor.hpp"

namespace coneray {

struct QcOptions {
  int starts = 64;
  int iters = 500;
  uint64_t seed = 0;
  double tol = 1e-7;             // relative to the tensor scale
  bool try_certification = true; // attempt the multiplier SOS route
};

enum class QcKind {
  CertifiedQuasiconvex,
  NumericQuasiconvex,
  NotQuasiconvex,
  Inconclusive
};

const char* qc_kind_name(QcKind k);

struct QcVerdict {
  QcKind kind = QcKind::Inconclusive;
  int multiplier_level = -1;  // r for CertifiedQuasiconvex
  double min_value = 0.0;     // smallest rank-one value seen (normalized scale)
  std::vector<double> x, y;   // unit witness pair for NotQuasiconvex
  Rational exact_value;       // exact re-evaluation at the rationalized witness
  bool witness_exact = false;
  int starts = 0;
  std::string certification_note;  // outcome of the r = 0, 1 attempts
};

// One square of a sum-of-squares decomposition: the bilinear form
// sum_ij matrix[i][j] x_i y_j (any weight is already folded in).
struct SosSquare {
  std::vector<std::vector<double>> matrix;  // dx rows, dy columns
};

struct SosCertificate {
  int dx = 0, dy = 0;
  std::vector<SosSquare> squares;
  std::vector<double> minor_coeffs;  // 2x2-minor shift, family order; may be empty
  double residual = 0.0;             // coefficientwise reconstruction defect
  bool exact = false;                // exact rational decomposition held below
  // weight d_k > 0 and flat dx*dy coefficient row; sum d_k (row.v)^2 == f
  std::vector<std::pair<Rational, std::vector<Rational>>> exact_squares;
  std::string route;  // which construction produced it
};

// Max abs coefficient of (sum of squares) - f compared through the acoustic
// matrix, which is blind to minor shifts; this is the defect the residual
// field reports.
double certificate_residual(const BiquadraticForm& f, const SosCertificate& cert);

QcVerdict quasiconvexity_test(const ElastTensor& c, const QcOptions& opts = {});

struct PolyconvexityResult {
  enum class Kind { Polyconvex, NotPolyconvex, Inconclusive };
  Kind kind = Kind::Inconclusive;
  double t_star = 0.0;             // on the original scale
  double t_star_normalized = 0.0;  // after dividing the Gram by its max entry
  SosCertificate certificate;      // filled when Polyconvex
  SliceResult slice;               // solver diagnostics
};

const char* polyconvexity_kind_name(PolyconvexityResult::Kind k);

// Terpstra search: is f a convex form plus a combination of 2x2 minors,
// i.e. does some Gram representative of f admit a PSD matrix?
PolyconvexityResult polyconvexity_test(const ElastTensor& c, uint64_t seed = 0);

// Sum-of-squares decomposition of a nonnegative 2 x n biquadratic (n <= 3).
// Always succeeds for genuinely nonnegative input; an Infeasible Gram slice
// raises NotNonnegative and a stalled solve CertificateNotFound.
SosCertificate terpstra_sos_2xn(const BiquadraticForm& g, uint64_t seed = 0);

// Certificate front door: polyconvex tensors via the minor-shift family,
// zero-determinant tensors via the structured decomposition pipeline.
// (Defined with the classifier, which owns the zero-determinant routes.)
SosCertificate sos_certificate(const ElastTensor& c, uint64_t seed = 0);

}  // namespace coneray
