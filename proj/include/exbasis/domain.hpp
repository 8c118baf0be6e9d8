#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exbasis/geometry.hpp"
#include "exbasis/types.hpp"

namespace exbasis {

class Domain;
using DomainPtr = std::shared_ptr<const Domain>;

/// Optional unitary change of coordinates plus translation. The local model
/// lives at w = U^H (z - c); domains without a placement use w = z.
struct Placement {
  std::optional<CMat> rotation;  // unitary, n x n
  std::optional<CVec> translation;

  bool trivial() const { return !rotation && !translation; }
  CVec to_local_point(const CVec& z) const;
  CVec to_local_dir(const CVec& v) const;
  CVec to_global_point(const CVec& w) const;
  CVec gradient_to_global(const CVec& local_grad) const;
};

/// Closed-form disc distance result: the distance and the binding phase,
/// i.e. the alpha at which the circle q + d*e^{i alpha}*a meets the boundary.
struct DiscExact {
  double value;
  double phase;
};

/// Implicit convex domain {r < 0} in C^n.
///
/// defining_value is < 0 inside, 0 on the boundary, > 0 outside;
/// complex_gradient returns the Wirtinger derivatives dr/dz_s.
class Domain : public std::enable_shared_from_this<Domain> {
 public:
  virtual ~Domain() = default;

  virtual int dimension() const = 0;
  virtual double defining_value(const CVec& z) const = 0;
  virtual CVec complex_gradient(const CVec& z) const = 0;

  /// Characteristic length used for bracketing steps and interior margins.
  virtual double scale() const = 0;

  virtual std::string kind() const = 0;

  bool contains(const CVec& z) const { return defining_value(z) < 0.0; }

  /// Unique t > 0 with q + t*v on the boundary. `v` is a real direction
  /// (a vector of C^n ~ R^{2n}) of unit norm; q must be strictly inside.
  /// `hint` optionally seeds the bracket with a nearby known root.
  virtual double ray_distance(const CVec& q, const CVec& v, double hint = 0.0) const;

  /// Closed-form disc distance where available (see DiagonalQuadric).
  virtual std::optional<DiscExact> disc_distance_exact(const CVec& q, const CVec& a) const;

  void require_interior(const CVec& q) const;
};

/// {sum_j p_j x_j^2 + q_j y_j^2 < level} in local coordinates w_j = x_j + i y_j.
class DiagonalQuadric final : public Domain {
 public:
  DiagonalQuadric(RVec coeffs_x, RVec coeffs_y, double level, Placement placement = {});

  int dimension() const override { return static_cast<int>(coeffs_x_.size()); }
  double defining_value(const CVec& z) const override;
  CVec complex_gradient(const CVec& z) const override;
  double scale() const override { return scale_; }
  std::string kind() const override { return "diagonal_quadric"; }
  double ray_distance(const CVec& q, const CVec& v, double hint = 0.0) const override;
  std::optional<DiscExact> disc_distance_exact(const CVec& q, const CVec& a) const override;

  const RVec& coeffs_x() const { return coeffs_x_; }
  const RVec& coeffs_y() const { return coeffs_y_; }
  double level() const { return level_; }
  const Placement& placement() const { return placement_; }

  static DomainPtr ball(int n, double radius = 1.0, Placement placement = {});

 private:
  double local_value(const CVec& w) const;
  RVec coeffs_x_, coeffs_y_;
  double level_;
  Placement placement_;
  double scale_;
};

/// {sum_j c_j |w_j|^{2 m_j} < 1} with weights c_j > 0 and integer m_j >= 1.
class GeneralizedEllipsoid final : public Domain {
 public:
  GeneralizedEllipsoid(RVec weights, std::vector<int> exponents, Placement placement = {});

  int dimension() const override { return static_cast<int>(weights_.size()); }
  double defining_value(const CVec& z) const override;
  CVec complex_gradient(const CVec& z) const override;
  double scale() const override { return scale_; }
  std::string kind() const override { return "generalized_ellipsoid"; }
  double ray_distance(const CVec& q, const CVec& v, double hint = 0.0) const override;

  const RVec& weights() const { return weights_; }
  const std::vector<int>& exponents() const { return exponents_; }
  const Placement& placement() const { return placement_; }

 private:
  double local_value(const CVec& w) const;
  RVec weights_;
  std::vector<int> exponents_;
  Placement placement_;
  double scale_;
};

/// Restriction of a domain to the affine complex subspace base + span(frame),
/// expressed in the frame coordinates w in C^k.
class SliceDomain final : public Domain {
 public:
  SliceDomain(DomainPtr parent, CVec base, Frame frame);

  int dimension() const override { return frame_.size(); }
  double defining_value(const CVec& w) const override;
  CVec complex_gradient(const CVec& w) const override;
  double scale() const override { return parent_->scale(); }
  std::string kind() const override { return "slice"; }
  double ray_distance(const CVec& q, const CVec& v, double hint = 0.0) const override;
  std::optional<DiscExact> disc_distance_exact(const CVec& q, const CVec& a) const override;

  CVec embed(const CVec& w) const { return base_ + frame_.matrix() * w; }
  const DomainPtr& parent() const { return parent_; }
  const CVec& base() const { return base_; }
  const Frame& frame() const { return frame_; }

 private:
  DomainPtr parent_;
  CVec base_;
  Frame frame_;
};

/// Slice through `base` spanned by `frame`. Slicing a slice flattens onto
/// the original parent, so nested slices stay cheap to evaluate.
DomainPtr slice(const DomainPtr& domain, const CVec& base, const Frame& frame);

/// Generic bracketing (doubling) + bisection ray solver, available on every
/// domain for cross-checking class-specific solvers.
double ray_distance_bisection(const Domain& domain, const CVec& q, const CVec& v,
                              double rel_tol = 1e-12, double hint = 0.0);

/// JSON (de)serialization of domain specification files.
DomainPtr domain_from_json(const std::string& text);
DomainPtr domain_from_json_file(const std::string& path);
std::string domain_to_json(const Domain& domain);

}  // namespace exbasis
