#include "coneray/gram_family.hpp"

#include <map>

#include "coneray/error.hpp"

namespace coneray {

GramFamily minor_shift_family(const BiquadraticForm& f) {
  const int dx = f.dx(), dy = f.dy();
  const int nb = dx * dy;
  GramFamily fam;
  fam.base = SymMatrix(nb);
  const auto& g = f.gram();
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b)
      fam.base.a[static_cast<size_t>(a) * nb + b] = to_double(g[a * nb + b]);

  for (int a = 0; a < nb; ++a) {
    Exps ex(dx, 0), ey(dy, 0);
    ex[a / dy] = 1;
    ey[a % dy] = 1;
    fam.basis_x.push_back(std::move(ex));
    fam.basis_y.push_back(std::move(ey));
  }

  for (int i = 0; i < dx; ++i)
    for (int k = i + 1; k < dx; ++k)
      for (int j = 0; j < dy; ++j)
        for (int l = j + 1; l < dy; ++l) {
          SymMatrix d(nb);
          d.set(i * dy + j, k * dy + l, 0.5);
          d.set(i * dy + l, k * dy + j, -0.5);
          fam.dirs.push_back(std::move(d));
        }
  return fam;
}

GramFamily multiplier_family(const BiquadraticForm& f, int r) {
  if (r < 0 || r > 2) fail(Errc::PreconditionViolated, "multiplier level r in 0..2");
  const int dx = f.dx(), dy = f.dy();

  // target polynomial f * (|x|^2 |y|^2)^r in dx + dy variables
  HomPoly target = f.to_poly();
  if (r > 0) {
    HomPoly sx = HomPoly::zero(dx + dy, 2, f.mode());
    for (int i = 0; i < dx; ++i) {
      Exps e(dx + dy, 0);
      e[i] = 2;
      sx.add_term(e, 1);
    }
    HomPoly sy = HomPoly::zero(dx + dy, 2, f.mode());
    for (int j = 0; j < dy; ++j) {
      Exps e(dx + dy, 0);
      e[dx + j] = 2;
      sy.add_term(e, 1);
    }
    for (int rep = 0; rep < r; ++rep) target = target * sx * sy;
  }

  GramFamily fam;
  std::vector<Exps> bx = monomial_basis(dx, 1 + r);
  std::vector<Exps> by = monomial_basis(dy, 1 + r);
  for (const Exps& a : bx)
    for (const Exps& b : by) {
      fam.basis_x.push_back(a);
      fam.basis_y.push_back(b);
    }
  const int nb = static_cast<int>(fam.basis_x.size());

  // group unordered basis pairs by their product monomial
  std::map<Exps, std::vector<std::pair<int, int>>> groups;
  for (int p = 0; p < nb; ++p)
    for (int q = p; q < nb; ++q) {
      Exps e(dx + dy, 0);
      for (int i = 0; i < dx; ++i) e[i] = fam.basis_x[p][i] + fam.basis_x[q][i];
      for (int j = 0; j < dy; ++j)
        e[dx + j] = fam.basis_y[p][j] + fam.basis_y[q][j];
      groups[e].push_back({p, q});
    }

  fam.base = SymMatrix(nb);
  auto put = [](SymMatrix& m, std::pair<int, int> pq, double w) {
    m.add(pq.first, pq.second, pq.first == pq.second ? w : w / 2);
  };

  for (const auto& [e, pairs] : groups) {
    double c = to_double(target.coeff(e));
    put(fam.base, pairs[0], c);
    for (size_t t = 1; t < pairs.size(); ++t) {
      SymMatrix d(nb);
      put(d, pairs[t], 1.0);
      put(d, pairs[0], -1.0);
      fam.dirs.push_back(std::move(d));
    }
  }
  return fam;
}

}  // namespace coneray
