#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "coneray/convexity.hpp"
#include "coneray/elast_tensor.hpp"
#include "coneray/extremality.hpp"
#include "coneray/hompoly.hpp"

namespace coneray {

// What the exact acoustic determinant turned out to be; the classification
// verdict hangs off this.
struct DetStatus {
  enum class Kind {
    IdenticallyZero,
    PerfectSquare,
    ExtremalNonSquare,
    NotExtremal,
    Unknown
  };
  Kind kind = Kind::Unknown;
  HomPoly det;
  HomPoly square_root;  // PerfectSquare: det = square_root^2
  HomPoly witness;      // NotExtremal: the splitting summand found
};

const char* det_status_name(DetStatus::Kind k);

enum class Verdict { ExtremeRay, Polyconvex, Inconclusive };
const char* verdict_name(Verdict v);

enum class InconclusiveReason {
  None,
  QuasiconvexityUndecided,
  SolverStalled,
  TheoremSilent,  // determinant is extremal-negative: no theorem applies
  ExtremalityUndecided,
  InternalInconsistency  // a guaranteed certificate construction failed
};
const char* inconclusive_reason_name(InconclusiveReason r);

struct ClassifyOptions {
  uint64_t seed = 0;
  QcOptions qc;  // qc.seed is overridden by the top-level seed
};

struct ClassificationReport {
  Verdict verdict = Verdict::Inconclusive;
  InconclusiveReason reason = InconclusiveReason::None;
  QcVerdict quasiconvexity;
  DetStatus det_status;
  std::optional<SosCertificate> certificate;
  std::optional<PolyconvexityResult> polyconvexity;  // perfect-square branch
  std::optional<ExtremalityVerdict> extremality;     // non-square branch
  uint64_t seed = 0;
  std::string input_digest;
  std::string note;
};

// Decision pipeline: quasiconvexity gate, exact determinant, then the
// determinant trichotomy (zero / perfect square / extremality test). Raises
// NotInCone when the input fails the quasiconvexity gate.
ClassificationReport classify(const ElastTensor& c, const ClassifyOptions& opts = {});

// Explicit sum-of-squares construction for quasiconvex tensors whose acoustic
// determinant vanishes identically. Routes, tried in order and each verified
// by exact reconstruction: a zero acoustic diagonal (2 x n reduction), the
// vanishing-cofactor-row templates, constant and polynomial row-combination
// coefficients, and finally the Gram-solver fallback. Raises
// CertificateNotFound when every route fails.
SosCertificate zero_det_sos(const ElastTensor& c, uint64_t seed = 0);

}  // namespace coneray
