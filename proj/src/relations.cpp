// Copyright 2026 The pomest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pomest/relations.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>

#include "pomest/errors.hpp"

namespace pomest {

namespace {

struct IdName {
  RelationId id;
  const char* name;
};

constexpr IdName kIds[] = {
    {RelationId::varsum, "varsum"},
    {RelationId::geom, "geom"},
    {RelationId::accbound, "accbound"},
    {RelationId::ungen, "ungen"},
    {RelationId::uni, "uni"},
    {RelationId::unbest, "unbest"},
    {RelationId::accbest, "accbest"},
    {RelationId::fishbound, "fishbound"},
    {RelationId::tracefish, "tracefish"},
    {RelationId::trace_identity, "trace_identity"},
    {RelationId::mat, "mat"},
    {RelationId::cramer_rao, "cramer_rao"},
    {RelationId::uncanon, "uncanon"},
};

bool is_grid(const Pom& pom) { return pom.info().grid.has_value(); }

double slack_tol(const Pom& pom, const Tolerances& tol) {
  return is_grid(pom) ? tol.grid_slack : tol.exact_slack;
}

double sat_tol(const Pom& pom, const Tolerances& tol) {
  return is_grid(pom) ? tol.grid_saturation : tol.exact_saturation;
}

void require_same_pom(const Estimator& a, const Estimator& b) {
  const Pom& pa = a.pom();
  const Pom& pb = b.pom();
  if (&pa != &pb && (pa.id() != pb.id() || pa.size() != pb.size() || pa.dim() != pb.dim())) {
    throw InvalidPom("joint estimates must be read from the same POM");
  }
}

}  // namespace

const char* to_string(RelationId id) {
  for (const auto& e : kIds) {
    if (e.id == id) return e.name;
  }
  return "unknown";
}

RelationId relation_id_from_string(const std::string& s) {
  for (const auto& e : kIds) {
    if (s == e.name) return e.id;
  }
  throw ConfigError("unknown relation id '" + s + "'");
}

RelationReport make_report(RelationId id, RelationKind kind, double lhs, double rhs,
                           double tolerance, double saturation_tol, std::string digest,
                           std::string label) {
  RelationReport r;
  r.id = id;
  r.kind = kind;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.tolerance = tolerance;
  r.saturation_tol = saturation_tol;
  r.inputs_digest = std::move(digest);
  r.label = std::move(label);
  if (kind == RelationKind::bound) {
    r.passed = r.slack >= -tolerance;
    r.saturated = std::abs(r.slack) <= saturation_tol;
  } else {
    r.passed = std::abs(r.slack) <= tolerance;
    r.saturated = r.passed;
  }
  if (!std::isfinite(r.slack)) r.passed = false;
  return r;
}

std::string digest_of(const std::vector<const Matrix*>& mats, const std::vector<double>& nums,
                      const std::string& extra) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  for (const Matrix* m : mats) {
    Index dims[2] = {m->rows(), m->cols()};
    feed(dims, sizeof(dims));
    for (Index j = 0; j < m->cols(); ++j) {
      for (Index i = 0; i < m->rows(); ++i) {
        double re = (*m)(i, j).real() + 0.0;
        double im = (*m)(i, j).imag() + 0.0;
        feed(&re, sizeof re);
        feed(&im, sizeof im);
      }
    }
  }
  for (double x : nums) {
    double y = x + 0.0;
    feed(&y, sizeof y);
  }
  feed(extra.data(), extra.size());
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

RelationReport check_varsum(const HermitianOperator& a, const Estimator& est,
                            const DensityOperator& rho, const Tolerances& tol) {
  double v = variance(a, rho);
  double d = dispersion(est, rho);
  double e2 = statistical_deviation_squared(a, est, rho, tol);
  auto r = make_report(RelationId::varsum, RelationKind::equality, v, d * d + e2,
                       slack_tol(est.pom(), tol), sat_tol(est.pom(), tol),
                       digest_of({&a.matrix(), &rho.matrix()}, est.values(), est.pom().id()));
  r.details = {{"variance", v}, {"estimate_variance", d * d}, {"inaccuracy_squared", e2}};
  return r;
}

RelationReport check_geom(const HermitianOperator& a, const HermitianOperator& b,
                          const DensityOperator& rho, const Tolerances& tol) {
  double da = std::sqrt(variance(a, rho));
  double db = std::sqrt(variance(b, rho));
  double c = commutator_magnitude(a, b, rho) / 2;
  auto r = make_report(RelationId::geom, RelationKind::bound, da * db, c, tol.exact_slack,
                       tol.exact_saturation, digest_of({&a.matrix(), &b.matrix(), &rho.matrix()}));
  r.details = {{"delta_a", da}, {"delta_b", db}};
  return r;
}

RelationReport check_accbound(const HermitianOperator& a, PomPtr pom, const DensityOperator& rho,
                              const Tolerances& tol) {
  const Pom& p = *pom;
  Estimator est = optimal_estimate(a, pom, rho, tol);
  double e2 = statistical_deviation_squared(a, est, rho, tol);
  std::vector<Complex> z = p.traces(rho.matrix() * a.matrix());
  std::vector<Complex> q = p.traces(rho.matrix());
  double bound = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k].weight * q[k].real() < tol.zero_probability) continue;
    bound += p[k].weight * z[k].imag() * z[k].imag() / q[k].real();
  }
  auto r = make_report(RelationId::accbound, RelationKind::bound, e2, bound, slack_tol(p, tol),
                       sat_tol(p, tol), digest_of({&a.matrix(), &rho.matrix()}, {}, p.id()));
  r.details = {{"inaccuracy", std::sqrt(e2)}};
  return r;
}

RelationReport check_ungen(const HermitianOperator& a, const HermitianOperator& b,
                           const Estimator& fa, const Estimator& gb, const DensityOperator& rho,
                           const Tolerances& tol) {
  require_same_pom(fa, gb);
  double da = dispersion(fa, rho);
  double db = dispersion(gb, rho);
  double ea = statistical_deviation(a, fa, rho, tol);
  double eb = statistical_deviation(b, gb, rho, tol);
  double c = commutator_magnitude(a, b, rho) / 2;
  std::vector<double> nums = fa.values();
  nums.insert(nums.end(), gb.values().begin(), gb.values().end());
  auto r = make_report(RelationId::ungen, RelationKind::bound, da * eb + ea * db + ea * eb, c,
                       slack_tol(fa.pom(), tol), sat_tol(fa.pom(), tol),
                       digest_of({&a.matrix(), &b.matrix(), &rho.matrix()}, nums, fa.pom().id()));
  r.details = {{"dispersion_a", da}, {"dispersion_b", db}, {"inaccuracy_a", ea},
               {"inaccuracy_b", eb}};
  return r;
}

RelationReport check_uni(const HermitianOperator& a, const HermitianOperator& b,
                         const Estimator& fa, const Estimator& gb, const DensityOperator& rho,
                         const Tolerances& tol) {
  require_same_pom(fa, gb);
  for (const auto* e : {&fa, &gb}) {
    const HermitianOperator& obs = e == &fa ? a : b;
    double bias = bias_operator(*e, obs).cwiseAbs().maxCoeff();
    if (bias > tol.unbiasedness) {
      std::ostringstream s;
      s << "estimate is not universally unbiased: bias operator entries up to " << bias;
      throw UnbiasednessViolation(s.str());
    }
  }
  double ea = statistical_deviation(a, fa, rho, tol);
  double eb = statistical_deviation(b, gb, rho, tol);
  double c = commutator_magnitude(a, b, rho) / 2;
  std::vector<double> nums = fa.values();
  nums.insert(nums.end(), gb.values().begin(), gb.values().end());
  auto r = make_report(RelationId::uni, RelationKind::bound, ea * eb, c, slack_tol(fa.pom(), tol),
                       sat_tol(fa.pom(), tol),
                       digest_of({&a.matrix(), &b.matrix(), &rho.matrix()}, nums, fa.pom().id()));
  r.details = {{"inaccuracy_a", ea}, {"inaccuracy_b", eb}};
  return r;
}

}  // namespace pomest
