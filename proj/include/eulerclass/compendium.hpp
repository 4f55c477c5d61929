#ifndef EULERCLASS_COMPENDIUM_HPP
#define EULERCLASS_COMPENDIUM_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eulerclass/bundle.hpp"
#include "eulerclass/metric.hpp"
#include "eulerclass/tensor4.hpp"

namespace eulerclass {

/// The three-parameter tangent-bundle connection family
///   Gamma_i{}^k{}_j = LC_i{}^k{}_j + alpha_i d^k_j + beta_j d^k_i + gamma^k g_ij
/// with 1-form coefficients; the scalar variant sets alpha = a phi,
/// beta = b phi, gamma = c phi.
struct AnsatzInput {
  MatrixField g;
  VectorField alpha, beta, gamma;
  bool has_scalar_coefficients = false;
  Real a = 0, b = 0, c = 0;
  VectorField phi;
};

AnsatzInput make_ansatz(const MatrixField& g, const VectorField& phi, Real a, Real b,
                        Real c);
AnsatzInput make_ansatz_general(const MatrixField& g, const VectorField& alpha,
                                const VectorField& beta, const VectorField& gamma);

/// Connection coefficients of the ansatz.
Coeffs3Field build_ansatz(const AnsatzInput& in, DerivativeEngine base);

/// Direct torsion T_i{}^k{}_j = Gamma_i{}^k{}_j - Gamma_j{}^k{}_i.
Coeffs3Field torsion(const Coeffs3Field& connection);

/// Closed forms of the ansatz's torsion, non-metricity and canonical metric
/// connection.
Coeffs3Field ansatz_torsion_closed_form(const AnsatzInput& in);
Coeffs3Field ansatz_nonmetricity_closed_form(const AnsatzInput& in);
Coeffs3Field ansatz_canonical_metric_closed_form(const AnsatzInput& in,
                                                 DerivativeEngine base);

/// Pointwise Levi-Civita background and coefficient-form data feeding the
/// closed-form tensor evaluators.
struct OneFormPointData {
  Vec value; // xi_i
  Mat covd;  // nabla_i xi_j (Levi-Civita), row i col j
  Mat d() const { return covd - covd.transpose(); }            // (d xi)_ij
  Mat lie(const Mat&) const { return covd + covd.transpose(); } // (L_{xi#} g)_ij
};

struct AnsatzPointData {
  int n = 2;
  Mat g, g_inv;
  Real sqrt_det_g = 1;
  Tensor4 rbar13;  // Levi-Civita curvature R_ij{}^k{}_l
  Mat rbar;        // Levi-Civita Ricci
  Real sbar = 0;   // scalar curvature
  OneFormPointData alpha, beta, gamma;
  bool has_scalar_coefficients = false;
  Real a = 0, b = 0, c = 0;
  OneFormPointData phi;

  Real codiff(const OneFormPointData& f) const { return -(g_inv * f.covd).trace(); }
  Real norm2(const OneFormPointData& f) const { return f.value.dot(g_inv * f.value); }
  Real inner(const OneFormPointData& f, const OneFormPointData& h) const {
    return f.value.dot(g_inv * h.value);
  }
};

AnsatzPointData ansatz_point_data(const AnsatzInput& in, const EngineSet& engines,
                                  const Vec& x);

/// Value of a named tensor: scalar, 2-tensor, 3-index block, or 4-tensor.
struct TensorValue {
  enum class Kind { Scalar, Matrix, Third, Fourth } kind = Kind::Scalar;
  Real s = 0;
  Mat m;
  Coeffs3 t3;
  Tensor4 t4;

  static TensorValue scalar(Real v);
  static TensorValue matrix(Mat v);
  static TensorValue third(Coeffs3 v);
  static TensorValue fourth(Tensor4 v);
  Real distance(const TensorValue& o) const; // max-abs difference
};

/// Everything the direct (differentiate-the-built-connection) twins need at
/// one point.
struct DirectContext {
  int n = 2;
  Mat g, g_inv;
  Coeffs3 christoffel;    // Levi-Civita at x
  Coeffs3 connection;     // built ansatz at x
  Coeffs3 canonical;      // canonical metric connection at x
  Coeffs3 torsion;        // direct torsion at x
  Coeffs3 nabla_g;        // direct non-metricity at x
  Tensor4 r13;            // curvature of the ansatz connection
  Tensor4 h13;            // curvature of its canonical metric connection
};

DirectContext make_direct_context(const AnsatzInput& in, const EngineSet& engines,
                                  const Vec& x);

/// Registry of the compendium's named tensors. Each entry evaluates the
/// closed form from the pointwise background data, optionally a second
/// algebraic grouping valid for scalar coefficients, and the direct
/// finite-difference twin.
struct CompendiumEntry {
  std::string name;
  std::string citation;
  std::string description;
  std::function<TensorValue(const AnsatzPointData&)> closed_form;
  std::function<TensorValue(const AnsatzPointData&)> specialized; // may be null
  std::function<TensorValue(const DirectContext&)> direct;
};

const std::vector<CompendiumEntry>& compendium_registry();
const CompendiumEntry& compendium_entry(const std::string& name);

struct CompendiumCheck {
  std::string name;
  Real residual = 0;             // closed form vs direct
  Real specialized_residual = 0; // specialized grouping vs closed form (when present)
};

std::vector<CompendiumCheck> verify_compendium(const AnsatzInput& in,
                                               const EngineSet& engines, const Vec& x,
                                               const std::vector<std::string>& names);

/// Quasi-Einstein weight m: stored as 1/m so the m = +-infinity (Ricci
/// soliton) limit is exact; m = 0 is rejected.
struct Weight {
  Real inv_m = 0;
  static Weight finite(Real m) {
    require(m != 0, "Weight: m = 0 is the Einstein convention, no ansatz applies");
    return Weight{1.0 / m};
  }
  static Weight infinite() { return Weight{0.0}; }
};

/// Real solutions (b, c) of (n-1) b + c = -1, (n-1) b^2 - c^2 = -1/m.
struct CoefficientSolutions {
  enum class Status { Unique, TwoRoots, NoRealSolutions } status;
  std::vector<std::pair<Real, Real>> roots; // (b, c), descending b
  Real discriminant = 0;                    // 4 (n-1) (1 + (n-2)/m), n > 2
};

CoefficientSolutions solve_coefficients(int n, Weight m);

/// Traceless part of r_g + 1/2 L_{phi#} g - (1/m) phi (x) phi; vanishes
/// exactly on generalized m-quasi-Einstein data.
Mat gmqe_residual(const MatrixField& g, const VectorField& phi, Weight m,
                  const EngineSet& engines, const Vec& x);

struct AveragedTensors {
  bool real_solutions = false;
  Mat ricci_symmetric_average;
  Real scalar_average = 0;
};

/// Closed forms for the average of the two solution connections' symmetric
/// Ricci tensors and scalar traces (n > 2; root-free).
AveragedTensors averaged_tensors(const MatrixField& g, const VectorField& phi, int n,
                                 Weight m, const EngineSet& engines, const Vec& x);

struct FunctionalReport {
  Real f = 0;      // int |nabla g|^n dV
  Real k = 0;      // int |nabla g|^2 dV
  Real volume = 0; // int dV
};

/// Scale-invariant non-metricity functionals of a tangent-bundle connection;
/// |nabla g|^2 contracts all slots with g. F = K in dimension two.
FunctionalReport functionals(const BundleGeometry& tm, const EngineSet& engines,
                             int nodes_per_axis);

/// Pointwise |nabla g|^2, exposed for spot checks.
Real nabla_g_norm2(const BundleGeometry& tm, const EngineSet& engines, const Vec& x);

} // namespace eulerclass

#endif
