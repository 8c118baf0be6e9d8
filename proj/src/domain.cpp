#include "exbasis/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace exbasis {

namespace {

void check_dim(const Domain& d, const CVec& z, const char* who) {
  if (static_cast<int>(z.size()) != d.dimension()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

CVec normalized_direction(const CVec& v, const char* who) {
  double norm = v.norm();
  if (!(norm > 1e-14)) {
    throw std::invalid_argument(std::string(who) + ": zero direction");
  }
  return v / norm;
}

}  // namespace

CVec Placement::to_local_point(const CVec& z) const {
  CVec w = translation ? CVec(z - *translation) : z;
  if (rotation) w = rotation->adjoint() * w;
  return w;
}

CVec Placement::to_local_dir(const CVec& v) const {
  return rotation ? CVec(rotation->adjoint() * v) : v;
}

CVec Placement::to_global_point(const CVec& w) const {
  CVec z = rotation ? CVec((*rotation) * w) : w;
  if (translation) z += *translation;
  return z;
}

CVec Placement::gradient_to_global(const CVec& local_grad) const {
  // r(z) = r_local(U^H (z - c)) gives grad_z = conj(U) grad_w.
  return rotation ? CVec(rotation->conjugate() * local_grad) : local_grad;
}

void Domain::require_interior(const CVec& q) const {
  check_dim(*this, q, "Domain");
  double value = defining_value(q);
  if (!(value < -1e-14)) {
    throw std::invalid_argument("base point is not strictly inside the domain (r = " +
                                std::to_string(value) + ")");
  }
}

double Domain::ray_distance(const CVec& q, const CVec& v, double hint) const {
  return ray_distance_bisection(*this, q, v, 1e-12, hint);
}

std::optional<DiscExact> Domain::disc_distance_exact(const CVec&, const CVec&) const {
  return std::nullopt;
}

double ray_distance_bisection(const Domain& domain, const CVec& q, const CVec& v_in,
                              double rel_tol, double hint) {
  domain.require_interior(q);
  CVec v = normalized_direction(v_in, "ray_distance");

  double lo = 0.0;
  double step = (hint > 0.0) ? 0.5 * hint : 1e-3 * domain.scale();
  double hi = step;
  int doublings = 0;
  while (domain.defining_value(q + hi * v) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200) {
      throw std::runtime_error("ray_distance: ray does not exit the domain");
    }
  }
  while (hi - lo > rel_tol * hi) {
    double mid = 0.5 * (lo + hi);
    if (domain.defining_value(q + mid * v) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// DiagonalQuadric

DiagonalQuadric::DiagonalQuadric(RVec coeffs_x, RVec coeffs_y, double level,
                                 Placement placement)
    : coeffs_x_(std::move(coeffs_x)),
      coeffs_y_(std::move(coeffs_y)),
      level_(level),
      placement_(std::move(placement)) {
  if (coeffs_x_.size() == 0 || coeffs_x_.size() != coeffs_y_.size()) {
    throw std::invalid_argument("DiagonalQuadric: coefficient dimension mismatch");
  }
  if (coeffs_x_.minCoeff() <= 0.0 || coeffs_y_.minCoeff() <= 0.0) {
    throw std::invalid_argument("DiagonalQuadric: coefficients must be positive");
  }
  if (!(level_ > 0.0)) throw std::invalid_argument("DiagonalQuadric: level must be positive");
  double min_coeff = std::min(coeffs_x_.minCoeff(), coeffs_y_.minCoeff());
  scale_ = std::sqrt(level_ / min_coeff);
}

double DiagonalQuadric::local_value(const CVec& w) const {
  double acc = 0.0;
  for (int j = 0; j < dimension(); ++j) {
    double x = w[j].real(), y = w[j].imag();
    acc += coeffs_x_[j] * x * x + coeffs_y_[j] * y * y;
  }
  return acc - level_;
}

double DiagonalQuadric::defining_value(const CVec& z) const {
  check_dim(*this, z, "defining_value");
  return local_value(placement_.to_local_point(z));
}

CVec DiagonalQuadric::complex_gradient(const CVec& z) const {
  check_dim(*this, z, "complex_gradient");
  CVec w = placement_.to_local_point(z);
  CVec g(dimension());
  for (int j = 0; j < dimension(); ++j) {
    g[j] = Complex(coeffs_x_[j] * w[j].real(), -coeffs_y_[j] * w[j].imag());
  }
  return placement_.gradient_to_global(g);
}

double DiagonalQuadric::ray_distance(const CVec& q, const CVec& v_in, double) const {
  require_interior(q);
  CVec v = normalized_direction(v_in, "ray_distance");
  CVec wq = placement_.to_local_point(q);
  CVec wv = placement_.to_local_dir(v);

  double a = 0.0, b = 0.0;
  const double c = local_value(wq);
  for (int j = 0; j < dimension(); ++j) {
    double px = coeffs_x_[j], py = coeffs_y_[j];
    double x = wq[j].real(), y = wq[j].imag();
    double dx = wv[j].real(), dy = wv[j].imag();
    a += px * dx * dx + py * dy * dy;
    b += 2.0 * (px * x * dx + py * y * dy);
  }
  double disc = b * b - 4.0 * a * c;  // > 0 since a > 0, c < 0
  double sq = std::sqrt(disc);
  return (b >= 0.0) ? (-2.0 * c) / (b + sq) : (-b + sq) / (2.0 * a);
}

std::optional<DiscExact> DiagonalQuadric::disc_distance_exact(const CVec& q,
                                                              const CVec& a_in) const {
  CVec a = normalized_direction(a_in, "disc_distance");
  CVec wq = placement_.to_local_point(q);
  CVec wa = placement_.to_local_dir(a);

  // The ray quadratic along e^{i alpha} a has linear coefficient
  // P cos(alpha) + Q sin(alpha); the closed form needs P = Q = 0,
  // which holds whenever the occupied coordinates of q and a are disjoint
  // (in particular at the center and on centered slices).
  double p_lin = 0.0, q_lin = 0.0, max_coeff = 0.0;
  for (int j = 0; j < dimension(); ++j) {
    double px = coeffs_x_[j], py = coeffs_y_[j];
    double x = wq[j].real(), y = wq[j].imag();
    double da = wa[j].real(), db = wa[j].imag();
    p_lin += px * x * da + py * y * db;
    q_lin += -px * x * db + py * y * da;
    max_coeff = std::max({max_coeff, px, py});
  }
  double tol = 1e-13 * (1.0 + max_coeff * wq.norm());
  if (std::abs(p_lin) > tol || std::abs(q_lin) > tol) return std::nullopt;

  double a0 = 0.0;
  Complex c0(0.0, 0.0);
  for (int j = 0; j < dimension(); ++j) {
    double px = coeffs_x_[j], py = coeffs_y_[j];
    a0 += 0.5 * (px + py) * std::norm(wa[j]);
    c0 += 0.5 * (px - py) * wa[j] * wa[j];
  }
  double r_max = a0 + std::abs(c0);
  double c = local_value(wq);
  if (!(c < 0.0)) {
    throw std::invalid_argument("disc_distance: base point not strictly inside");
  }
  double phase = (std::abs(c0) > 1e-15 * r_max) ? -0.5 * std::arg(c0) : 0.0;
  return DiscExact{std::sqrt(-c / r_max), phase};
}

DomainPtr DiagonalQuadric::ball(int n, double radius, Placement placement) {
  return std::make_shared<DiagonalQuadric>(RVec::Ones(n), RVec::Ones(n), radius * radius,
                                           std::move(placement));
}

// ---------------------------------------------------------------------------
// GeneralizedEllipsoid

GeneralizedEllipsoid::GeneralizedEllipsoid(RVec weights, std::vector<int> exponents,
                                           Placement placement)
    : weights_(std::move(weights)),
      exponents_(std::move(exponents)),
      placement_(std::move(placement)) {
  if (weights_.size() == 0 || static_cast<std::size_t>(weights_.size()) != exponents_.size()) {
    throw std::invalid_argument("GeneralizedEllipsoid: weight/exponent mismatch");
  }
  if (weights_.minCoeff() <= 0.0) {
    throw std::invalid_argument("GeneralizedEllipsoid: weights must be positive");
  }
  for (int m : exponents_) {
    if (m < 1) throw std::invalid_argument("GeneralizedEllipsoid: exponents must be >= 1");
  }
  scale_ = 0.0;
  for (int j = 0; j < dimension(); ++j) {
    scale_ = std::max(scale_, std::pow(1.0 / weights_[j], 0.5 / exponents_[j]));
  }
}

double GeneralizedEllipsoid::local_value(const CVec& w) const {
  double acc = 0.0;
  for (int j = 0; j < dimension(); ++j) {
    double r2 = std::norm(w[j]);
    double term = r2;
    for (int e = 1; e < exponents_[j]; ++e) term *= r2;
    acc += weights_[j] * term;
  }
  return acc - 1.0;
}

double GeneralizedEllipsoid::defining_value(const CVec& z) const {
  check_dim(*this, z, "defining_value");
  return local_value(placement_.to_local_point(z));
}

CVec GeneralizedEllipsoid::complex_gradient(const CVec& z) const {
  check_dim(*this, z, "complex_gradient");
  CVec w = placement_.to_local_point(z);
  CVec g(dimension());
  for (int j = 0; j < dimension(); ++j) {
    double r2 = std::norm(w[j]);
    double pow_term = 1.0;
    for (int e = 1; e < exponents_[j]; ++e) pow_term *= r2;
    g[j] = weights_[j] * static_cast<double>(exponents_[j]) * pow_term * std::conj(w[j]);
  }
  return placement_.gradient_to_global(g);
}

double GeneralizedEllipsoid::ray_distance(const CVec& q, const CVec& v_in, double hint) const {
  require_interior(q);
  CVec v = normalized_direction(v_in, "ray_distance");
  CVec wq = placement_.to_local_point(q);
  CVec wv = placement_.to_local_dir(v);

  auto value_at = [&](double t) { return local_value(wq + t * wv); };
  auto deriv_at = [&](double t) {
    double acc = 0.0;
    for (int j = 0; j < dimension(); ++j) {
      Complex w = wq[j] + t * wv[j];
      double r2 = std::norm(w);
      double pow_term = 1.0;
      for (int e = 1; e < exponents_[j]; ++e) pow_term *= r2;
      acc += weights_[j] * exponents_[j] * pow_term * 2.0 *
             (w.real() * wv[j].real() + w.imag() * wv[j].imag());
    }
    return acc;
  };

  double lo = 0.0;
  double step = (hint > 0.0) ? 0.5 * hint : 1e-3 * scale_;
  double hi = step;
  int doublings = 0;
  while (value_at(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200) {
      throw std::runtime_error("ray_distance: ray does not exit the domain");
    }
  }
  // Newton from the outer end, clipped into the bracket. The value is
  // convex along the ray, so Newton from above converges monotonically.
  double t = hi;
  for (int it = 0; it < 80 && (hi - lo) > 1e-14 * hi; ++it) {
    double f = value_at(t);
    if (f > 0.0) {
      hi = std::min(hi, t);
    } else if (f < 0.0) {
      lo = std::max(lo, t);
    } else {
      return t;
    }
    double d = deriv_at(t);
    double t_next = (d > 0.0) ? t - f / d : -1.0;
    if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);
    t = t_next;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// SliceDomain

SliceDomain::SliceDomain(DomainPtr parent, CVec base, Frame frame)
    : parent_(std::move(parent)), base_(std::move(base)), frame_(std::move(frame)) {
  if (!parent_) throw std::invalid_argument("SliceDomain: null parent");
  if (frame_.empty()) throw std::invalid_argument("SliceDomain: empty frame");
  if (frame_.ambient_dim() != parent_->dimension() ||
      static_cast<int>(base_.size()) != parent_->dimension()) {
    throw std::invalid_argument("SliceDomain: dimension mismatch");
  }
  parent_->require_interior(base_);
}

double SliceDomain::defining_value(const CVec& w) const {
  check_dim(*this, w, "defining_value");
  return parent_->defining_value(embed(w));
}

CVec SliceDomain::complex_gradient(const CVec& w) const {
  check_dim(*this, w, "complex_gradient");
  CVec g = parent_->complex_gradient(embed(w));
  // chain rule for the holomorphic map w -> base + F w: d/dw_j = sum_s dr/dz_s F_{s j}
  return frame_.matrix().transpose() * g;
}

double SliceDomain::ray_distance(const CVec& q, const CVec& v, double hint) const {
  check_dim(*this, q, "ray_distance");
  CVec v_unit = normalized_direction(v, "ray_distance");
  return parent_->ray_distance(embed(q), frame_.matrix() * v_unit, hint);
}

std::optional<DiscExact> SliceDomain::disc_distance_exact(const CVec& q, const CVec& a) const {
  CVec a_unit = normalized_direction(a, "disc_distance");
  return parent_->disc_distance_exact(embed(q), frame_.matrix() * a_unit);
}

DomainPtr slice(const DomainPtr& domain, const CVec& base, const Frame& frame) {
  if (!domain) throw std::invalid_argument("slice: null domain");
  if (auto inner = std::dynamic_pointer_cast<const SliceDomain>(domain)) {
    // flatten onto the original parent
    CVec new_base = inner->embed(base);
    std::vector<CVec> vs;
    vs.reserve(frame.size());
    for (int j = 0; j < frame.size(); ++j) {
      vs.push_back(inner->frame().matrix() * frame[j]);
    }
    return std::make_shared<SliceDomain>(inner->parent(), std::move(new_base),
                                         Frame(std::move(vs)));
  }
  return std::make_shared<SliceDomain>(domain, base, frame);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

CVec complex_list_from_json(const json& j) {
  CVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& pair = j.at(i);
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("domain JSON: complex entries must be [re, im] pairs");
    }
    v[i] = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
  }
  return v;
}

json complex_list_to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(json::array({v[i].real(), v[i].imag()}));
  }
  return out;
}

Placement placement_from_json(const json& j, int n) {
  Placement placement;
  if (j.contains("rotation") && !j.at("rotation").is_null()) {
    const auto& rot = j.at("rotation");
    CMat u(n, n);
    if (rot.size() == static_cast<std::size_t>(n) && rot.at(0).is_array() &&
        rot.at(0).size() == static_cast<std::size_t>(n) && rot.at(0).at(0).is_array()) {
      // nested rows of [re, im]
      for (int r = 0; r < n; ++r) {
        CVec row = complex_list_from_json(rot.at(r));
        for (int c = 0; c < n; ++c) u(r, c) = row[c];
      }
    } else if (rot.size() == static_cast<std::size_t>(n * n)) {
      // flat row-major list of [re, im]
      CVec flat = complex_list_from_json(rot);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) u(r, c) = flat[r * n + c];
    } else {
      throw std::invalid_argument("domain JSON: rotation must be an n x n complex matrix");
    }
    UnitaryMatrix checked(u);  // validates
    placement.rotation = checked.entries;
  }
  if (j.contains("translation") && !j.at("translation").is_null()) {
    CVec t = complex_list_from_json(j.at("translation"));
    if (static_cast<int>(t.size()) != n) {
      throw std::invalid_argument("domain JSON: translation length mismatch");
    }
    placement.translation = t;
  }
  return placement;
}

json placement_to_json(const Placement& placement, json& out) {
  if (placement.rotation) {
    const CMat& u = *placement.rotation;
    json rot = json::array();
    for (Eigen::Index r = 0; r < u.rows(); ++r)
      for (Eigen::Index c = 0; c < u.cols(); ++c)
        rot.push_back(json::array({u(r, c).real(), u(r, c).imag()}));
    out["rotation"] = rot;
  }
  if (placement.translation) {
    out["translation"] = complex_list_to_json(*placement.translation);
  }
  return out;
}

}  // namespace

DomainPtr domain_from_json(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "diagonal_quadric") {
    auto cx = j.at("coeffs_x").get<std::vector<double>>();
    auto cy = j.at("coeffs_y").get<std::vector<double>>();
    double level = j.at("level").get<double>();
    RVec px = Eigen::Map<RVec>(cx.data(), cx.size());
    RVec py = Eigen::Map<RVec>(cy.data(), cy.size());
    Placement placement = placement_from_json(j, static_cast<int>(cx.size()));
    return std::make_shared<DiagonalQuadric>(px, py, level, std::move(placement));
  }
  if (kind == "generalized_ellipsoid") {
    auto w = j.at("weights").get<std::vector<double>>();
    auto m = j.at("exponents").get<std::vector<int>>();
    RVec weights = Eigen::Map<RVec>(w.data(), w.size());
    Placement placement = placement_from_json(j, static_cast<int>(w.size()));
    return std::make_shared<GeneralizedEllipsoid>(weights, m, std::move(placement));
  }
  throw std::invalid_argument("domain JSON: unknown kind '" + kind + "'");
}

DomainPtr domain_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open domain file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return domain_from_json(ss.str());
}

std::string domain_to_json(const Domain& domain) {
  json j;
  j["kind"] = domain.kind();
  if (const auto* q = dynamic_cast<const DiagonalQuadric*>(&domain)) {
    j["coeffs_x"] = std::vector<double>(q->coeffs_x().data(),
                                        q->coeffs_x().data() + q->coeffs_x().size());
    j["coeffs_y"] = std::vector<double>(q->coeffs_y().data(),
                                        q->coeffs_y().data() + q->coeffs_y().size());
    j["level"] = q->level();
    placement_to_json(q->placement(), j);
  } else if (const auto* e = dynamic_cast<const GeneralizedEllipsoid*>(&domain)) {
    j["weights"] = std::vector<double>(e->weights().data(),
                                       e->weights().data() + e->weights().size());
    j["exponents"] = e->exponents();
    placement_to_json(e->placement(), j);
  } else {
    throw std::invalid_argument("domain_to_json: only concrete domain models serialize");
  }
  return j.dump();
}

}  // namespace exbasis
