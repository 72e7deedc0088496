// Command-line front end: tensor and polynomial ingestion, the classification
// pipeline, certificate emission, corpus access, and randomized property
// suites. Exit codes: 0 success (property holds), 2 refuted (not in the
// queried cone / not nonnegative), 3 undecided, 4 input error, 5 internal
// inconsistency.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coneray/classifier.hpp"
#include "coneray/convexity.hpp"
#include "coneray/corpus.hpp"
#include "coneray/elast_tensor.hpp"
#include "coneray/error.hpp"
#include "coneray/extremality.hpp"
#include "coneray/hompoly.hpp"
#include "coneray/minor_sums.hpp"
#include "coneray/poly_json.hpp"
#include "coneray/poly_matrix.hpp"
#include "coneray/psd.hpp"
#include "coneray/report_json.hpp"
#include "coneray/sphere_opt.hpp"
#include "json.hpp"

namespace {

using namespace coneray;
using ojson = nlohmann::ordered_json;

struct Cfg {
  uint64_t seed = 0;
  std::string output = "human";
  double tolerance = -1.0;  // < 0 means no override
  bool json() const { return output == "json"; }
};

int errc_exit_code(Errc c) {
  switch (c) {
    case Errc::NotInCone:
    case Errc::NotNonnegative:
      return 2;
    case Errc::CertificateNotFound:
    case Errc::Internal:
      return 5;
    default:
      return 4;
  }
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) fail(Errc::InputError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inputs are @corpus-name, a file path, inline JSON, or "-" for stdin.
ElastTensor load_tensor(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return corpus(arg.substr(1));
  if (!arg.empty() && arg[0] == '{') return tensor_from_json(arg);
  return tensor_from_json(slurp(arg));
}

HomPoly load_poly(const std::string& arg) {
  if (!arg.empty() && arg[0] == '{') return poly_from_json(arg);
  return poly_from_json(slurp(arg));
}

std::vector<std::string> xy_names(int d) {
  std::vector<std::string> names;
  for (int i = 1; i <= d; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= d; ++i) names.push_back("y" + std::to_string(i));
  return names;
}

std::string report_human(const ClassificationReport& rep) {
  std::ostringstream out;
  out << "verdict: " << verdict_name(rep.verdict);
  if (rep.verdict == Verdict::Inconclusive)
    out << " (" << inconclusive_reason_name(rep.reason) << ")";
  out << "\n";
  const QcVerdict& qc = rep.quasiconvexity;
  out << "quasiconvexity: " << qc_kind_name(qc.kind) << " (min rank-one value "
      << qc.min_value;
  if (qc.multiplier_level >= 0) out << ", certified at r = " << qc.multiplier_level;
  out << ")\n";
  if (rep.det_status.kind != DetStatus::Kind::Unknown) {
    out << "det T = " << rep.det_status.det.str() << "\n";
    out << "det status: " << det_status_name(rep.det_status.kind) << "\n";
    if (rep.det_status.kind == DetStatus::Kind::PerfectSquare)
      out << "square root: " << rep.det_status.square_root.str() << "\n";
    if (rep.det_status.kind == DetStatus::Kind::NotExtremal)
      out << "splitting summand: " << rep.det_status.witness.str() << "\n";
  }
  if (rep.certificate) {
    const SosCertificate& ct = *rep.certificate;
    out << "certificate: " << ct.squares.size() << " squares via " << ct.route
        << (ct.exact ? ", exact" : "") << ", residual " << ct.residual << "\n";
  }
  if (rep.polyconvexity) {
    out << "gram slice: t* = " << rep.polyconvexity->t_star
        << " (normalized " << rep.polyconvexity->t_star_normalized << ")\n";
  }
  if (rep.extremality) {
    const ExtremalityVerdict& ev = *rep.extremality;
    out << "extremality: " << extremality_kind_name(ev.kind) << ", kernel dim "
        << ev.kernel_dim << ", " << ev.zero_count << " zeros, rows "
        << ev.rows_value << "/" << ev.rows_gradient << "/" << ev.rows_hessian
        << "\n";
  }
  if (!rep.note.empty()) out << "note: " << rep.note << "\n";
  out << "seed: " << rep.seed << "  digest: " << rep.input_digest;
  return out.str();
}

int cmd_classify(const Cfg& cfg, const std::string& input) {
  ElastTensor c = load_tensor(input);
  if (c.dim() != 3) {
    std::cerr << "classify: only dimension 3 is decidable (got d = " << c.dim()
              << "); the determinant criteria this pipeline rests on fail for "
                 "d >= 4\n";
    return 4;
  }
  ClassifyOptions opts;
  opts.seed = cfg.seed;
  if (cfg.tolerance > 0) opts.qc.tol = cfg.tolerance;
  ClassificationReport rep = classify(c, opts);
  std::cout << (cfg.json() ? report_to_json(rep) : report_human(rep)) << "\n";
  if (rep.verdict == Verdict::Inconclusive)
    return rep.reason == InconclusiveReason::InternalInconsistency ? 5 : 3;
  return 0;
}

int cmd_det(const Cfg& cfg, const std::string& input) {
  ElastTensor c = load_tensor(input);
  HomPoly det = c.acoustic_matrix().det();
  std::cout << (cfg.json() ? poly_to_json(det) : "det T = " + det.str()) << "\n";
  return 0;
}

int cmd_inspect(const Cfg& cfg, const std::string& input) {
  ElastTensor c = load_tensor(input);
  const int d = c.dim();
  HomPoly f = c.to_form();
  PolyMatrix t = c.acoustic_matrix();
  PolyMatrix cof = t.cofactor_matrix();
  if (cfg.json()) {
    ojson j;
    j["d"] = d;
    j["f"] = ojson::parse(poly_to_json(f));
    auto grid = [&](const PolyMatrix& m) {
      ojson rows = ojson::array();
      for (int i = 0; i < d; ++i) {
        ojson row = ojson::array();
        for (int k = 0; k < d; ++k)
          row.push_back(ojson::parse(poly_to_json(m.at(i, k))));
        rows.push_back(std::move(row));
      }
      return rows;
    };
    j["acoustic"] = grid(t);
    j["cofactor"] = grid(cof);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "f(x, y) = " << f.str(xy_names(d)) << "\n\nT(y):\n";
  for (int i = 0; i < d; ++i)
    for (int k = i; k < d; ++k)
      std::cout << "  [" << i + 1 << "," << k + 1 << "] " << t.at(i, k).str()
                << "\n";
  std::cout << "\ncof(T):\n";
  for (int i = 0; i < d; ++i)
    for (int k = i; k < d; ++k)
      std::cout << "  [" << i + 1 << "," << k + 1 << "] " << cof.at(i, k).str()
                << "\n";
  return 0;
}

int cmd_check_quasiconvex(const Cfg& cfg, const std::string& input) {
  ElastTensor c = load_tensor(input);
  QcOptions opts;
  opts.seed = cfg.seed;
  if (cfg.tolerance > 0) opts.tol = cfg.tolerance;
  QcVerdict v = quasiconvexity_test(c, opts);
  if (cfg.json()) {
    std::cout << quasiconvexity_to_json(v) << "\n";
  } else {
    std::cout << qc_kind_name(v.kind) << " (min rank-one value " << v.min_value
              << ")\n";
    if (!v.certification_note.empty())
      std::cout << "certification: " << v.certification_note << "\n";
  }
  if (v.kind == QcKind::NotQuasiconvex) return 2;
  if (v.kind == QcKind::Inconclusive) return 3;
  return 0;
}

int cmd_check_polyconvex(const Cfg& cfg, const std::string& input) {
  ElastTensor c = load_tensor(input);
  PolyconvexityResult r = polyconvexity_test(c, cfg.seed);
  if (cfg.json()) {
    std::cout << polyconvexity_to_json(r) << "\n";
  } else {
    std::cout << polyconvexity_kind_name(r.kind) << " (t* = " << r.t_star
              << ", normalized " << r.t_star_normalized << ")\n";
  }
  if (r.kind == PolyconvexityResult::Kind::NotPolyconvex) return 2;
  if (r.kind == PolyconvexityResult::Kind::Inconclusive) return 3;
  return 0;
}

int cmd_extremal(const Cfg& cfg, const std::string& input) {
  HomPoly p = load_poly(input);
  ExtremalityVerdict v = extremality_test(p, cfg.seed);
  if (cfg.json()) {
    std::cout << extremality_to_json(v) << "\n";
  } else {
    std::cout << extremality_kind_name(v.kind) << " (kernel dim "
              << v.kernel_dim << ", " << v.zero_count << " zeros)\n";
    if (v.kind == ExtremalityKind::NotExtremal)
      std::cout << "splitting summand: " << v.witness.str() << "\n";
    if (!v.note.empty()) std::cout << "note: " << v.note << "\n";
  }
  if (v.kind == ExtremalityKind::NotExtremal) return 2;
  if (v.kind == ExtremalityKind::Inconclusive) return 3;
  return 0;
}

int cmd_square(const Cfg& cfg, const std::string& input) {
  HomPoly p = load_poly(input);
  std::optional<HomPoly> root = perfect_square_test(p);
  if (cfg.json()) {
    ojson j;
    j["square"] = root.has_value();
    j["root"] = root ? ojson::parse(poly_to_json(*root)) : ojson(nullptr);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (root ? "square root: " + root->str() : "not a perfect square")
              << "\n";
  }
  return root ? 0 : 2;
}

int cmd_sos(const Cfg& cfg, const std::string& input) {
  ElastTensor c = load_tensor(input);
  if (c.dim() == 3 && c.acoustic_matrix().det().is_zero()) {
    SosCertificate cert = zero_det_sos(c, cfg.seed);  // failure exits 5
    std::cout << (cfg.json() ? certificate_to_json(cert)
                             : "certificate: " + std::to_string(cert.squares.size()) +
                                   " squares via " + cert.route)
              << "\n";
    return 0;
  }
  PolyconvexityResult r = polyconvexity_test(c, cfg.seed);
  if (r.kind == PolyconvexityResult::Kind::Polyconvex) {
    std::cout << (cfg.json() ? certificate_to_json(r.certificate)
                             : "certificate: " +
                                   std::to_string(r.certificate.squares.size()) +
                                   " squares via " + r.certificate.route)
              << "\n";
    return 0;
  }
  if (r.kind == PolyconvexityResult::Kind::NotPolyconvex) {
    std::cerr << "no certificate: the Gram slice is infeasible (t* = "
              << r.t_star_normalized << " normalized)\n";
    return 2;
  }
  std::cerr << "no certificate: the Gram solver stalled\n";
  return 3;
}

int cmd_corpus_list(const Cfg& cfg) {
  if (cfg.json()) {
    ojson j = ojson::array();
    for (const CorpusEntry& e : corpus_list()) {
      ojson it;
      it["name"] = e.name;
      it["description"] = e.description;
      j.push_back(std::move(it));
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (const CorpusEntry& e : corpus_list())
    std::cout << e.name << std::string(e.name.size() < 28 ? 28 - e.name.size() : 2, ' ')
              << e.description << "\n";
  return 0;
}

// Random trials for the averaged-minor chain: psd B and A with A - B psd.
bool lemma41_trial(Rng& rng, double tol) {
  auto rand_psd = [&rng](SymMatrix& g) {
    double m[3][3];
    for (auto& row : m)
      for (double& x : row) x = rng.gaussian();
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += m[k][i] * m[k][j];
        g.set(i, j, s);
      }
  };
  SymMatrix b(3), d(3), a(3);
  rand_psd(b);
  rand_psd(d);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) a.set(i, j, b.at(i, j) + d.at(i, j));
  return lemma41_check(a, b, tol).ok;
}

// Exact expansion of det(T - lambda*T1) against the four mixed coefficients.
bool mixed_det_trial(Rng& rng) {
  auto rand_sym = [&rng]() {
    PolyMatrix t(3, 3, 3, 2, Mode::Exact);
    const std::vector<Exps> basis = monomial_basis(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        HomPoly p = HomPoly::zero(3, 2, Mode::Exact);
        for (const Exps& e : basis) {
          long long c = static_cast<long long>(rng.raw() % 7) - 3;
          if (c != 0) p.add_term(e, Rational(c));
        }
        t.set(i, j, p);
        t.set(j, i, p);
      }
    return t;
  };
  PolyMatrix t = rand_sym(), t1 = rand_sym();
  const auto cs = mixed_det_expansion(t, t1);
  for (const Rational& lam : {Rational(1), Rational(-1), Rational(2)}) {
    PolyMatrix m(3, 3, 3, 2, Mode::Exact);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m.set(i, j, t.at(i, j) + t1.at(i, j).scaled(-lam));
    HomPoly rhs = cs[0] + cs[1].scaled(-lam) + cs[2].scaled(lam * lam) +
                  cs[3].scaled(-lam * lam * lam);
    if (!(m.det() == rhs)) return false;
  }
  return true;
}

// Exact LDL verdict vs the float eigenvalue verdict, plus witness validity.
bool psd_dual_trial(Rng& rng, int trial, double tol) {
  const int n = 3 + static_cast<int>(rng.raw() % 4);
  std::vector<long long> m(static_cast<size_t>(n) * n);
  for (auto& x : m) x = static_cast<long long>(rng.raw() % 9) - 4;
  std::vector<Rational> g(static_cast<size_t>(n) * n);
  SymMatrix s(n);
  long long shift = (trial % 2) ? 1 + static_cast<long long>(rng.raw() % 5) : 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      long long v = 0;
      for (int k = 0; k < n; ++k) v += m[k * n + i] * m[k * n + j];
      if (i == j) v -= shift;
      g[i * n + j] = g[j * n + i] = Rational(v);
      s.set(i, j, static_cast<double>(v));
    }
  const bool exact = rational_psd(g, n);
  const PsdVerdict f = psd_check(s, tol);
  const double scale = std::max(1.0, s.max_abs());
  if (!f.psd) {
    // the witness must actually realize a negative value
    double q = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q += f.witness[i] * s.at(i, j) * f.witness[j];
    if (!(q < tol * scale) || std::abs(q - f.lambda_min) > 1e-6 * scale)
      return false;
  }
  return exact == f.psd || std::abs(f.lambda_min) <= 10 * tol * scale;
}

int cmd_verify(const Cfg& cfg, const std::string& suite, int trials) {
  if (trials <= 0) fail(Errc::InputError, "--trials must be positive");
  const double tol = cfg.tolerance > 0 ? cfg.tolerance : 1e-7;
  Rng rng(cfg.seed);
  int passed = 0;
  std::vector<int> failed;
  for (int k = 0; k < trials; ++k) {
    bool ok;
    if (suite == "lemma41") {
      ok = lemma41_trial(rng, tol);
    } else if (suite == "mixed-det") {
      ok = mixed_det_trial(rng);
    } else {
      ok = psd_dual_trial(rng, k, tol);
    }
    if (ok)
      ++passed;
    else if (failed.size() < 10)
      failed.push_back(k);
  }
  std::cout << passed << "/" << trials << " passed\n";
  if (passed != trials) {
    std::cerr << "failing trials:";
    for (int k : failed) std::cerr << " " << k;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasiconvex quadratic forms: cone membership, certificates, "
               "and extreme-ray classification"};
  app.require_subcommand(1);

  Cfg cfg;
  app.add_option("--seed", cfg.seed, "random seed")->envname("CONERAY_SEED");
  app.add_option("--output", cfg.output, "output format")
      ->check(CLI::IsMember({"human", "json"}));
  app.add_option("--tolerance", cfg.tolerance,
                 "numeric tolerance override for the gated tests");

  std::string input, which, suite = "lemma41";
  int trials = 100;
  int rc = 0;

  auto* classify_cmd =
      app.add_subcommand("classify", "full decision pipeline on a tensor");
  classify_cmd->add_option("input", input, "tensor JSON file, inline JSON, or @corpus-name")
      ->required();
  classify_cmd->callback([&] { rc = cmd_classify(cfg, input); });

  auto* det_cmd = app.add_subcommand("det", "exact acoustic determinant");
  det_cmd->add_option("input", input, "tensor input")->required();
  det_cmd->callback([&] { rc = cmd_det(cfg, input); });

  auto* inspect_cmd =
      app.add_subcommand("inspect", "print f, T(y), and cof(T) for a tensor");
  inspect_cmd->add_option("input", input, "tensor input")->required();
  inspect_cmd->callback([&] { rc = cmd_inspect(cfg, input); });

  auto* check_cmd = app.add_subcommand(
      "check", "single-property test (exit 0 holds / 2 refuted / 3 undecided)");
  check_cmd->add_option("property", which, "quasiconvex or polyconvex")
      ->required()
      ->check(CLI::IsMember({"quasiconvex", "polyconvex"}));
  check_cmd->add_option("input", input, "tensor input")->required();
  check_cmd->callback([&] {
    rc = which == "quasiconvex" ? cmd_check_quasiconvex(cfg, input)
                                : cmd_check_polyconvex(cfg, input);
  });

  auto* extremal_cmd = app.add_subcommand(
      "extremal", "extremality of a nonnegative sextic in three variables");
  extremal_cmd->add_option("input", input, "polynomial JSON file or inline JSON")
      ->required();
  extremal_cmd->callback([&] { rc = cmd_extremal(cfg, input); });

  auto* square_cmd = app.add_subcommand("square", "perfect-square test");
  square_cmd->add_option("input", input, "polynomial input")->required();
  square_cmd->callback([&] { rc = cmd_square(cfg, input); });

  auto* sos_cmd =
      app.add_subcommand("sos", "sum-of-squares certificate for a tensor");
  sos_cmd->add_option("input", input, "tensor input")->required();
  sos_cmd->callback([&] { rc = cmd_sos(cfg, input); });

  auto* corpus_cmd = app.add_subcommand("corpus", "built-in example tensors");
  corpus_cmd->add_option("action", which, "list")
      ->required()
      ->check(CLI::IsMember({"list"}));
  corpus_cmd->callback([&] { rc = cmd_corpus_list(cfg); });

  auto* verify_cmd =
      app.add_subcommand("verify", "randomized property suites with pass counts");
  verify_cmd->add_option("suite", suite, "lemma41, mixed-det, or psd-dual")
      ->required()
      ->check(CLI::IsMember({"lemma41", "mixed-det", "psd-dual"}));
  verify_cmd->add_option("--trials", trials, "number of random trials");
  verify_cmd->callback([&] { rc = cmd_verify(cfg, suite, trials); });

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  } catch (const coneray::Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return errc_exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
