#include "ddn/linsolve.hpp"

#include <algorithm>
#include <random>

namespace ddn {

namespace {

// Row echelon form; returns pivot column per row consumed.
std::vector<int> eliminate(RatMatrix& m) {
  std::vector<int> pivots;
  size_t row = 0;
  size_t cols = m.empty() ? 0 : m[0].size();
  for (size_t col = 0; col < cols && row < m.size(); ++col) {
    size_t pr = row;
    while (pr < m.size() && m[pr][col] == 0) ++pr;
    if (pr == m.size()) continue;
    std::swap(m[row], m[pr]);
    Rat inv = m[row][col];
    for (size_t j = col; j < cols; ++j) m[row][j] /= inv;
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rat f = m[i][col];
      for (size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  return pivots;
}

RatVec primitive_scale(RatVec v) {
  Int den_lcm(1), num_gcd(0);
  for (const auto& x : v) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), x.get_num().get_mpz_t());
  }
  if (num_gcd == 0) return v;
  Rat scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (scale < 0) scale = -scale;
  for (auto& x : v) x *= scale;
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

}  // namespace

int rank_of(RatMatrix m) { return static_cast<int>(eliminate(m).size()); }

std::vector<RatVec> nullspace(const RatMatrix& m) {
  if (m.empty()) return {};
  size_t cols = m[0].size();
  RatMatrix red = m;
  std::vector<int> pivots = eliminate(red);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<RatVec> basis;
  for (size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    RatVec v(cols, Rat(0));
    v[free_col] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -red[r][free_col];
    basis.push_back(primitive_scale(std::move(v)));
  }
  return basis;
}

std::optional<RatVec> solve_affine(RatMatrix m, RatVec b) {
  size_t cols = m.empty() ? 0 : m[0].size();
  for (size_t i = 0; i < m.size(); ++i) m[i].push_back(b[i]);
  RatMatrix red = m;
  std::vector<int> pivots = eliminate(red);
  // Inconsistent when a pivot lands in the augmented column.
  for (int p : pivots)
    if (p == static_cast<int>(cols)) return std::nullopt;
  RatVec x(cols, Rat(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = red[r][cols];
  return x;
}

SampledSystem sample_linear_system(const std::vector<ExprList>& columns,
                                   const ExprList* constant_column, const Signature& sig,
                                   const SampleConfig& cfg, std::uint64_t seed_offset) {
  SampledSystem out;
  if (columns.empty()) return out;
  const size_t ncomp = columns[0].size();
  for (const auto& col : columns)
    if (col.size() != ncomp) fail(ErrorKind::Internal, "ragged ansatz columns");
  if (constant_column && constant_column->size() != ncomp)
    fail(ErrorKind::Internal, "ragged constant column");

  // Jet variables and opaque atoms across every component.
  std::vector<JetVar> jets;
  std::vector<Expr> atoms;
  auto scan = [&](const Expr& e) {
    for (const auto& jv : collect_jet_vars(e)) jets.push_back(jv);
    walk(e, [&](const Expr& n) {
      if (n.kind() == Kind::Builtin && n.fn() != Fn::Alt && n.fn() != Fn::Floor)
        atoms.push_back(n);
      if (n.kind() == Kind::Power && n.args()[1].kind() != Kind::Integer) atoms.push_back(n);
    });
  };
  for (const auto& col : columns)
    for (const auto& e : col) scan(e);
  if (constant_column)
    for (const auto& e : *constant_column) scan(e);
  std::sort(jets.begin(), jets.end(),
            [](const JetVar& a, const JetVar& b) { return compare(a, b) < 0; });
  jets.erase(std::unique(jets.begin(), jets.end()), jets.end());
  std::sort(atoms.begin(), atoms.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  atoms.erase(std::unique(atoms.begin(), atoms.end(),
                          [](const Expr& a, const Expr& b) { return compare(a, b) == 0; }),
              atoms.end());

  std::mt19937_64 eng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0xabcdefULL + seed_offset);
  auto rnd_rat = [&]() {
    long num = 1 + static_cast<long>(eng() % static_cast<std::uint64_t>(cfg.magnitude));
    long den = 1 + static_cast<long>(eng() % static_cast<std::uint64_t>(cfg.magnitude));
    bool negative = (eng() & 1) != 0;
    return rat(negative ? -num : num, den);
  };

  for (int s = 0; s < cfg.samples; ++s) {
    for (int attempt = 0; attempt < cfg.retries; ++attempt) {
      Point pt;
      pt.xs.resize(sig.p());
      for (auto& x : pt.xs) x = rnd_rat();
      pt.params.resize(sig.parameters.size());
      for (auto& p : pt.params) p = rnd_rat();
      pt.ns.resize(sig.m());
      for (auto& n : pt.ns) n = static_cast<long>(eng() % (2 * cfg.window + 1)) - cfg.window;
      for (const auto& jv : jets) pt.jets.emplace(jv, rnd_rat());
      for (const auto& a : atoms) pt.atoms.emplace(a, rnd_rat());

      // Sweep n over the window for the first discrete direction.
      bool ok = true;
      std::vector<RatVec> rows;
      std::vector<Rat> consts;
      for (long n0 = -cfg.window; n0 <= cfg.window && ok; ++n0) {
        Point g = pt;
        if (sig.m() >= 1) g.ns[0] = n0;
        for (size_t c = 0; c < ncomp && ok; ++c) {
          RatVec row;
          row.reserve(columns.size());
          try {
            for (const auto& col : columns) {
              NumVal v = evaluate(col[c], sig, g, cfg.precision);
              row.push_back(std::get<Rat>(v));
            }
            Rat cst(0);
            if (constant_column)
              cst = std::get<Rat>(evaluate((*constant_column)[c], sig, g, cfg.precision));
            rows.push_back(std::move(row));
            consts.push_back(cst);
          } catch (const Error& err) {
            if (err.kind() == ErrorKind::DomainError) {
              ok = false;  // singular draw; retry the whole sample
            } else {
              throw;
            }
          } catch (const std::bad_variant_access&) {
            fail(ErrorKind::Internal, "non-rational value in exact sampling");
          }
        }
        if (sig.m() == 0) break;
      }
      if (ok) {
        for (auto& r : rows) out.rows.push_back(std::move(r));
        for (auto& c : consts) out.constants.push_back(std::move(c));
        break;
      }
      if (attempt + 1 == cfg.retries)
        fail(ErrorKind::SingularSample, "could not draw a regular sample point");
    }
  }
  return out;
}

}  // namespace ddn
