#pragma once

#include <complex>
#include <vector>

#include "zitterdyn/model.hpp"

namespace zitterdyn {

using cplx = std::complex<double>;

/// f(mu) = mu^2 + mu + (1 - beta^2)(1 - e^mu), the characteristic function of
/// perturbations about uniform motion, with mu in units of the delay gamma d / c.
cplx char_fn(cplx mu, double beta);
cplx char_fn_derivative(cplx mu, double beta);

/// Natural size of the terms of f at mu; residuals are judged relative to it.
double char_fn_scale(cplx mu, double beta);

struct Box {
  double re_min = 0.0;
  double re_max = 12.0;
  double im_min = -60.0;
  double im_max = 60.0;

  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  /// Distance from z to the boundary (zero on it, positive inside or outside).
  double boundary_distance(cplx z) const;
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
};

/// Largest real part a search box may reach; e^mu stays far from overflow.
inline constexpr double kMaxBoxReal = 50.0;

struct Root {
  cplx mu;
  double residual = 0.0;  // |f(mu)|
  int multiplicity = 1;
  bool is_conjugate_partner = false;  // added by symmetry rather than found by Newton
};

struct RootSet {
  double beta = 0.0;
  std::vector<Root> roots;  // sorted by (Im, Re)
  Box search_box;           // the box actually certified (possibly nudged outward)
  int certified_count = 0;  // argument-principle count in search_box

  int multiplicity_sum() const;
};

struct RootFindOptions {
  double dedup_radius = 1e-6;
  double tol = 1e-12;  // scaled residual |f| <= tol * max(1, char_fn_scale)
  int max_newton_iter = 100;
  int max_refinements = 2;  // grid doublings before reporting a certification mismatch
};

/// Grid-seeded Newton search inside box, deduplicated, polished, conjugate-completed
/// and certified against count_roots. Boxes reaching beyond kMaxBoxReal are clipped;
/// a contour passing through a root is moved outward slightly and the final box is
/// reported in RootSet::search_box.
RootSet find_roots(double beta, const Box& box, int grid_density, const RootFindOptions& opts = {});

/// Number of zeros (with multiplicity) enclosed by the box boundary, from the net
/// change of arg f along the contour.
int count_roots(double beta, const Box& box);

/// Multiplicity of the zero at mu = 0: two at beta = 0, one otherwise.
int zero_multiplicity(double beta);

struct EigenLadder {
  std::vector<double> eta;    // Im mu of the roots with Im mu > 0, ascending
  std::vector<double> omega;  // eta c / (gamma d)
  double asymptotic_spacing = 0.0;  // last gap in eta (0 if fewer than two)
};

EigenLadder eigenfrequencies(const RootSet& roots, const ModelParams& params);

}  // namespace zitterdyn
