#pragma once

// JSON emission for classification reports, certificates, and the individual
// test verdicts. Field names are stable; exact values print as "p/q" strings
// and float evidence as JSON numbers. Strings in and out, like poly_json.

#include <string>

#include "coneray/classifier.hpp"
#include "coneray/convexity.hpp"
#include "coneray/extremality.hpp"

namespace coneray {

// {"verdict", "det_status", "quasiconvexity", "certificate", "evidence"}
std::string report_to_json(const ClassificationReport& rep);

std::string certificate_to_json(const SosCertificate& cert);
std::string quasiconvexity_to_json(const QcVerdict& v);
std::string polyconvexity_to_json(const PolyconvexityResult& r);
std::string extremality_to_json(const ExtremalityVerdict& v);

}  // namespace coneray
