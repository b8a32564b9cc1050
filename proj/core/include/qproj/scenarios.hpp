#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

namespace qproj::scenarios {

enum class MapKind { Metaplectic, AntiMetaplectic };

std::string to_string(MapKind k);

// z -> linear z + offset on phase space z = (x, p).
struct AffineSymplecticMap {
  Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();
  MapKind kind = MapKind::Metaplectic;

  Eigen::Vector2d apply(const Eigen::Vector2d& z) const { return linear * z + offset; }
};

constexpr double kDetTolerance = 1e-12;

// Builds a map and sets its kind. Throws std::invalid_argument if |det| != 1.
AffineSymplecticMap make_map(const Eigen::Matrix2d& linear, const Eigen::Vector2d& offset = Eigen::Vector2d::Zero());

// Kind from the determinant sign. Throws std::invalid_argument if |det| != 1.
MapKind classify(const AffineSymplecticMap& map);

// outer o inner.
AffineSymplecticMap compose(const AffineSymplecticMap& outer, const AffineSymplecticMap& inner);

// cx x + cp p + c0
struct AffineForm {
  double cx = 0.0;
  double cp = 0.0;
  double c0 = 0.0;
};

// f o map: the form in the map's source coordinates.
AffineForm pullback(const AffineForm& f, const AffineSymplecticMap& map);

// True if a = c b for some c > 0 (relative tolerance tol).
bool positively_proportional(const AffineForm& a, const AffineForm& b, double tol = 1e-12);

// Theta(plus) - Theta(minus)
struct OperatorDescriptor {
  AffineForm plus;
  AffineForm minus;
};

enum class Variable { X, P };

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = -kInf;
  double hi = kInf;
};

// States with position (X) or momentum (P) support in `range`.
struct StateSet {
  Variable variable = Variable::X;
  Interval range;
};

enum class Family { Standard, ExtendedInfinite };

struct CatalogRow {
  std::string name;
  OperatorDescriptor op;
  StateSet states;
  AffineSymplecticMap map;  // scenario coordinates -> standard coordinates
  Family family = Family::Standard;
  double stated_parameter = 0.0;   // alpha or beta as tabulated
  double derived_parameter = 0.0;  // read off the image of the state set
};

// Physical parameters used to instantiate the catalog rows.
struct CatalogParams {
  double M = 1.3;
  double dT = 0.7;
  double L = 0.9;
  double a = 2.1;
  double alpha = 2.5;  // standard-problem row
  double beta = 0.4;   // extended-problem row
  double gamma = 0.6;
  double F = 1.7;
  double l = 0.8;
  double t1 = 0.5;
  double t2 = 1.4;
};

std::vector<CatalogRow> table_catalog(const CatalogParams& p = {});

struct RowCheck {
  bool map_ok = false;       // |det| = 1 and kind matches
  bool operator_ok = false;  // pulled-back standard forms match the row's forms
  bool states_ok = false;    // image of the state set is the standard state set
  double parameter = 0.0;    // alpha (Standard) or beta (ExtendedInfinite) from the image
};

// Pulls the standard operator Theta(X+P) - Theta(P) back through the map and
// pushes the state set forward.
RowCheck verify_row(const CatalogRow& row, double tol = 1e-12);

// ---------------------------------------------------------------- projectiles

enum class Variant { Ultrafast, Ultraslow, Handicapped };

struct ProjectileScenario {
  double M = 1.0;
  double L = 1.0;
  double a = 2.0;
  double dT = 1.0;
  Variant variant = Variant::Ultrafast;
  double b = 0.0;  // classical head start (Handicapped)
};

struct ProjectileReduction {
  double alpha = 0.0;
  double beta = 0.0;
  AffineSymplecticMap map;
};

ProjectileReduction reduce_projectile(const ProjectileScenario& s);

// ---------------------------------------------------------------- rockets

struct Burn {
  double t = 0.0;
  double m = 0.0;
};

struct RocketSchedule {
  double M = 1.0;       // initial mass
  double l = 1.0;       // initial support length
  double lambda = 0.0;  // chamber length
  std::vector<Burn> burns;
  double t_final = 1.0;

  // Throws std::invalid_argument on non-increasing times, non-positive masses
  // or a burn that empties the rocket.
  void validate() const;
};

struct RocketOptions {
  bool evaluate_phi = true;
  double alpha_cap = 100.0;  // above this the curve value is replaced by the c_bm upper bound
  double delta = 1e-4;
};

constexpr double kCbmUpperBound = 0.0725;

struct RocketReduction {
  Eigen::VectorXd c;  // coefficients of (X_R^(0), X_REL^(1), ...)
  Eigen::VectorXd d;  // coefficients of (P_R^(0), P_REL^(1), ...)
  double beta = 0.0;
  double L_plus = 0.0;
  double L_minus = 0.0;
  double alpha_eff = 0.0;
  double bound = 0.0;
  bool bound_from_curve = false;  // phi(alpha_eff) + delta was used
};

RocketReduction rocket_reduce(const RocketSchedule& s, const RocketOptions& opt = {});

// beta, L+-, alpha_eff and the bound for given position coefficients c and
// momentum coefficients d (equal lengths, c_0 and d_0 belong to the rocket).
RocketReduction reduce_coefficients(const Eigen::VectorXd& c, const Eigen::VectorXd& d, double l, double lambda,
                                    const RocketOptions& opt = {});

// Time reversal on every factor (all momenta negated): d -> -d, beta -> -beta.
RocketReduction time_reversed(const RocketReduction& r, double l, double lambda, const RocketOptions& opt = {});

}  // namespace qproj::scenarios
