#include "qproj/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qproj/phi_alpha.hpp"

namespace qproj::scenarios {

std::string to_string(MapKind k) { return k == MapKind::Metaplectic ? "metaplectic" : "anti-metaplectic"; }

MapKind classify(const AffineSymplecticMap& map) {
  const double det = map.linear.determinant();
  if (std::abs(std::abs(det) - 1.0) > kDetTolerance)
    throw std::invalid_argument("classify: |det| differs from 1");
  return det > 0.0 ? MapKind::Metaplectic : MapKind::AntiMetaplectic;
}

AffineSymplecticMap make_map(const Eigen::Matrix2d& linear, const Eigen::Vector2d& offset) {
  AffineSymplecticMap m{linear, offset, MapKind::Metaplectic};
  m.kind = classify(m);
  return m;
}

AffineSymplecticMap compose(const AffineSymplecticMap& outer, const AffineSymplecticMap& inner) {
  return make_map(outer.linear * inner.linear, outer.linear * inner.offset + outer.offset);
}

AffineForm pullback(const AffineForm& f, const AffineSymplecticMap& map) {
  const Eigen::RowVector2d c(f.cx, f.cp);
  const Eigen::RowVector2d lin = c * map.linear;
  return {lin(0), lin(1), c.dot(map.offset.transpose()) + f.c0};
}

bool positively_proportional(const AffineForm& a, const AffineForm& b, double tol) {
  const Eigen::Vector3d u(a.cx, a.cp, a.c0);
  const Eigen::Vector3d v(b.cx, b.cp, b.c0);
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return nu == nv;
  return (u / nu - v / nv).norm() <= tol * 10.0;
}

namespace {

AffineSymplecticMap checked(double xx, double xp, double px, double pp, double x0, double p0) {
  Eigen::Matrix2d lin;
  lin << xx, xp, px, pp;
  return make_map(lin, Eigen::Vector2d(x0, p0));
}

// Image of a one-variable state set under the first map component.
bool image_interval(const StateSet& s, const AffineSymplecticMap& map, Interval& out, double tol) {
  const int keep = s.variable == Variable::X ? 0 : 1;
  const double other = map.linear(0, 1 - keep);
  const double slope = map.linear(0, keep);
  if (std::abs(other) > tol || slope == 0.0) return false;
  auto f = [&](double v) { return std::isinf(v) ? std::copysign(kInf, v * slope) : slope * v + map.offset(0); };
  const double a = f(s.range.lo);
  const double b = f(s.range.hi);
  out = {std::min(a, b), std::max(a, b)};
  return true;
}

bool same_endpoint(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

}  // namespace

std::vector<CatalogRow> table_catalog(const CatalogParams& p) {
  const double sM = std::sqrt(p.M / p.dT);  // sqrt(M / dT)
  const double sT = 1.0 / sM;               // sqrt(dT / M)
  const double v = p.dT / p.M;
  std::vector<CatalogRow> rows;

  rows.push_back({"standard problem",
                  {{1, 1, 0}, {0, 1, 0}},
                  {Variable::X, {-std::sqrt(p.alpha), 0.0}},
                  checked(1, 0, 0, 1, 0, 0),
                  Family::Standard,
                  p.alpha,
                  0.0});
  rows.push_back({"ultrafast projectile",
                  {{1, v, -p.a}, {0, v, -(p.a - p.L)}},
                  {Variable::X, {0.0, p.L}},
                  checked(sM, 0, 0, sT, -sM * p.L, -sM * (p.a - p.L)),
                  Family::Standard,
                  p.M * p.L * p.L / p.dT,
                  0.0});
  rows.push_back({"ultraslow projectile",
                  {{0, v, -p.a}, {1, v, -p.a}},
                  {Variable::X, {0.0, p.L}},
                  checked(-sM, 0, sM, sT, 0, -sM * p.a),
                  Family::Standard,
                  p.M * p.L * p.L / p.dT,
                  0.0});
  rows.push_back({"quantum backflow",
                  {{-1, -v, 0}, {-1, 0, 0}},
                  {Variable::P, {0.0, kInf}},
                  checked(0, -sT, -sM, 0, 0, 0),
                  Family::Standard,
                  kInf,
                  0.0});
  rows.push_back({"extended standard problem, alpha = inf",
                  {{1, 1, 0}, {0, 1, 0}},
                  {Variable::X, {-kInf, p.beta}},
                  checked(1, 0, 0, 1, 0, 0),
                  Family::ExtendedInfinite,
                  p.beta,
                  0.0});
  // The tabulated sigma(p) = -sqrt(dT/M) x is not area preserving; -sqrt(M/dT) x is.
  rows.push_back({"generalized quantum backflow",
                  {{-1, -v, 0}, {-1, 0, 0}},
                  {Variable::P, {-p.gamma, kInf}},
                  checked(0, -sT, -sM, 0, 0, 0),
                  Family::ExtendedInfinite,
                  sT * p.gamma,
                  0.0});
  rows.push_back({"constant force quantum backflow",
                  {{-1, -v, p.F * p.dT * p.dT / (2 * p.M)}, {-1, 0, 0}},
                  {Variable::P, {0.0, kInf}},
                  checked(0, -sT, -sM, 0, sT * p.F * p.dT / 2, 0),
                  Family::ExtendedInfinite,
                  p.F * p.dT / 2,
                  0.0});
  const double C = (p.t2 - p.t1) / p.t2;
  const double k1 = std::sqrt(p.M * C / p.t1);
  const double k2 = std::sqrt(p.M / (p.t1 * C));
  rows.push_back({"quantum reentry",
                  {{-1, -p.t2 / p.M, p.l}, {-1, -p.t1 / p.M, p.l}},
                  {Variable::X, {-kInf, 0.0}},
                  checked(k1, 0, -k2, -k2 * p.t1 / p.M, -k1 * p.l, k2 * p.l),
                  Family::ExtendedInfinite,
                  p.l,
                  0.0});

  for (auto& r : rows) r.derived_parameter = verify_row(r).parameter;
  return rows;
}

RowCheck verify_row(const CatalogRow& row, double tol) {
  RowCheck c;
  try {
    c.map_ok = classify(row.map) == row.map.kind;
  } catch (const std::invalid_argument&) {
    c.map_ok = false;
  }
  const AffineForm plus = pullback({1, 1, 0}, row.map);
  const AffineForm minus = pullback({0, 1, 0}, row.map);
  c.operator_ok = positively_proportional(plus, row.op.plus, tol) && positively_proportional(minus, row.op.minus, tol);

  Interval img;
  if (image_interval(row.states, row.map, img, tol)) {
    if (row.family == Family::Standard) {
      // [-sqrt(alpha), 0], alpha = inf allowed.
      c.parameter = std::isinf(img.lo) ? kInf : img.lo * img.lo;
      c.states_ok = same_endpoint(img.hi, 0.0, tol) && img.lo <= 0.0;
    } else {
      c.parameter = img.hi;
      c.states_ok = std::isinf(img.lo) && img.lo < 0.0 && !std::isinf(img.hi);
    }
  }
  return c;
}

ProjectileReduction reduce_projectile(const ProjectileScenario& s) {
  if (!(s.M > 0.0 && s.L > 0.0 && s.dT > 0.0)) throw std::invalid_argument("reduce_projectile: M, L, dT must be positive");
  if (s.variant == Variant::Handicapped && !(s.b > 0.0))
    throw std::invalid_argument("reduce_projectile: handicap b must be positive");
  const double sM = std::sqrt(s.M / s.dT);
  const double sT = 1.0 / sM;
  ProjectileReduction r;
  r.alpha = s.M * s.L * s.L / s.dT;
  r.beta = s.variant == Variant::Handicapped ? s.b * sM : 0.0;
  if (s.variant == Variant::Ultraslow)
    r.map = checked(-sM, 0, sM, sT, 0, -sM * s.a);
  else
    r.map = checked(sM, 0, 0, sT, -sM * s.L, -sM * (s.a - s.L));
  return r;
}

void RocketSchedule::validate() const {
  if (!(M > 0.0) || !(l > 0.0) || !(lambda >= 0.0)) throw std::invalid_argument("rocket: need M > 0, l > 0, lambda >= 0");
  double prev = 0.0;
  double mass = M;
  bool first = true;
  for (const Burn& b : burns) {
    if (!(b.m > 0.0)) throw std::invalid_argument("rocket: burn masses must be positive");
    if (b.t < 0.0 || (!first && !(b.t > prev))) throw std::invalid_argument("rocket: burn times must increase");
    mass -= b.m;
    if (!(mass > 0.0)) throw std::invalid_argument("rocket: a burn empties the rocket");
    prev = b.t;
    first = false;
  }
  if (!(t_final > prev) && !(burns.empty() && t_final > 0.0))
    throw std::invalid_argument("rocket: final time must follow the last burn");
}

namespace {

void finish(RocketReduction& r, double l, double lambda, const RocketOptions& opt) {
  r.beta = r.c.dot(r.d);
  const double rel = (r.c.size() > 1) ? r.c.tail(r.c.size() - 1).cwiseAbs().sum() : 0.0;
  r.L_plus = l * std::max(0.0, r.c(0)) + 0.5 * lambda * rel;
  r.L_minus = l * std::min(0.0, r.c(0)) - 0.5 * lambda * rel;
  const double L = r.L_plus - r.L_minus;
  r.bound_from_curve = false;
  if (r.beta == 0.0) {
    r.alpha_eff = kInf;
    r.bound = 0.0;
    return;
  }
  r.alpha_eff = L * L / std::abs(r.beta);
  r.bound = kCbmUpperBound;
  if (opt.evaluate_phi && r.alpha_eff <= opt.alpha_cap) {
    const auto res = phi_alpha::phi(r.alpha_eff, opt.delta);
    r.bound = std::min(kCbmUpperBound, res.phi + res.delta);
    r.bound_from_curve = true;
  }
}

}  // namespace

RocketReduction rocket_reduce(const RocketSchedule& s, const RocketOptions& opt) {
  s.validate();
  const std::size_t n = s.burns.size();
  // Final position X = c.X + d.P, tracked together with the current momentum
  // P_R = e.P (e has no X-components).
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
  Eigen::VectorXd d = c;
  Eigen::VectorXd e = c;
  c(0) = 1.0;
  e(0) = 1.0;
  double mass = s.M;
  double t = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Burn& b = s.burns[j];
    d += (b.t - t) / mass * e;
    const auto k = static_cast<Eigen::Index>(j + 1);
    // Split into rocket (mass - m) and fuel m about the fixed centre of mass.
    c(k) -= b.m / mass;
    e *= (mass - b.m) / mass;
    e(k) -= 1.0;
    mass -= b.m;
    t = b.t;
  }
  d += (s.t_final - t) / mass * e;

  return reduce_coefficients(c, d, s.l, s.lambda, opt);
}

RocketReduction reduce_coefficients(const Eigen::VectorXd& c, const Eigen::VectorXd& d, double l, double lambda,
                                    const RocketOptions& opt) {
  if (c.size() == 0 || c.size() != d.size()) throw std::invalid_argument("reduce_coefficients: size mismatch");
  RocketReduction r;
  r.c = c;
  r.d = d;
  finish(r, l, lambda, opt);
  return r;
}

RocketReduction time_reversed(const RocketReduction& r, double l, double lambda, const RocketOptions& opt) {
  RocketReduction out = r;
  out.d = -r.d;
  finish(out, l, lambda, opt);
  return out;
}

}  // namespace qproj::scenarios
