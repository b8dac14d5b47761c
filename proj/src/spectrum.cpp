#include "zitterdyn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zitterdyn/errors.hpp"
#include "zitterdyn/parallel.hpp"

namespace zitterdyn {
namespace {

using lcplx = std::complex<long double>;

lcplx char_fn_l(lcplx mu, long double k) { return mu * mu + mu + k * (1.0L - std::exp(mu)); }

void check_beta(double beta) {
  if (!(std::abs(beta) < 1.0)) throw InvalidArgument("|beta| must be < 1");
}

Box clip_box(const Box& box) {
  if (!(box.re_min < box.re_max) || !(box.im_min < box.im_max) || !std::isfinite(box.re_min) ||
      !std::isfinite(box.im_min) || !std::isfinite(box.re_max) || !std::isfinite(box.im_max)) {
    throw InvalidArgument("search box must be finite and nondegenerate");
  }
  Box b = box;
  b.re_max = std::min(b.re_max, kMaxBoxReal);
  if (!(b.re_min < b.re_max)) throw InvalidArgument("search box lies entirely beyond Re mu = 50");
  return b;
}

struct Candidate {
  cplx mu;
  double residual;
};

// Newton runs on g(mu) = f(mu) / mu, which removes the zero that f has for every beta:
// g = mu + beta^2 - k h(mu), h(mu) = (e^mu - 1 - mu) / mu, k = 1 - beta^2.
// Near the origin h and h' come from their Taylor series, so g stays accurate where
// f itself cancels, and the double zero at beta = 0 becomes a simple one.
template <typename C>
void deflated(C mu, typename C::value_type k, C& g, C& dg) {
  using R = typename C::value_type;
  C h, dh;
  if (std::abs(mu) < R(1)) {
    // h = sum_{n>=1} mu^n / (n+1)!, h' = sum_{n>=1} n mu^(n-1) / (n+1)!.
    C term(1);  // mu^(n-1) / (n+1)!
    h = C(0);
    dh = C(0);
    term /= R(2);
    for (int n = 1; n <= 30; ++n) {
      dh += R(n) * term;
      h += term * mu;
      term *= mu / R(n + 2);
    }
  } else {
    const C e = std::exp(mu);
    h = (e - R(1) - mu) / mu;
    dh = (e * (mu - R(1)) + R(1)) / (mu * mu);
  }
  g = mu + (R(1) - k) - k * h;
  dg = R(1) - k * dh;
}

// Newton from one seed in double precision, then polished in long double.
bool newton_polish(cplx seed, double beta, const RootFindOptions& opts, Candidate& out) {
  const double k = (1.0 - beta) * (1.0 + beta);
  cplx z = seed;
  for (int it = 0; it < opts.max_newton_iter; ++it) {
    cplx g, dg;
    deflated(z, k, g, dg);
    if (dg == cplx(0.0, 0.0)) return false;
    const cplx step = g / dg;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z.real() > kMaxBoxReal + 10.0 ||
        std::abs(z) > 1e4) {
      return false;
    }
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) break;
  }

  const long double kl = static_cast<long double>(k);
  lcplx zl(z.real(), z.imag());
  const bool real_root = std::abs(z.imag()) <= 1e-8 * std::max(1.0, std::abs(z));
  if (real_root) zl = lcplx(zl.real(), 0.0L);
  for (int it = 0; it < 8; ++it) {
    lcplx g, dg;
    deflated(zl, kl, g, dg);
    if (dg == lcplx(0.0L, 0.0L)) break;
    zl -= g / dg;
    if (real_root) zl = lcplx(zl.real(), 0.0L);
  }
  out.mu = cplx(static_cast<double>(zl.real()), static_cast<double>(zl.imag()));
  if (beta == 0.0 && std::abs(out.mu) <= 1e-7) return false;  // the second copy of the double zero
  const lcplx at(out.mu.real(), out.mu.imag());
  out.residual = static_cast<double>(std::abs(char_fn_l(at, kl)));
  return std::isfinite(out.residual) &&
         out.residual <= opts.tol * std::max(1.0, char_fn_scale(out.mu, beta));
}

std::vector<Candidate> newton_sweep(double beta, const Box& seeds, int density, const Box& accept,
                                    const RootFindOptions& opts) {
  const std::size_t n = static_cast<std::size_t>(density);
  std::vector<std::vector<Candidate>> rows(n);
  const double dx = seeds.width() / density;
  const double dy = seeds.height() / density;
  parallel_for(n, [&](std::size_t j) {
    for (int i = 0; i < density; ++i) {
      const cplx seed(seeds.re_min + (i + 0.5) * dx, seeds.im_min + (static_cast<double>(j) + 0.5) * dy);
      Candidate c;
      if (newton_polish(seed, beta, opts, c) && accept.contains(c.mu)) rows[j].push_back(c);
    }
  });
  std::vector<Candidate> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  return all;
}

// Sorted merge: candidates closer than the radius collapse onto the smallest residual.
std::vector<Candidate> deduplicate(std::vector<Candidate> c, double radius) {
  std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
    if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
    return a.mu.imag() < b.mu.imag();
  });
  std::vector<Candidate> out;
  for (const auto& x : c) {
    bool merged = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (x.mu.real() - it->mu.real() > radius) break;
      if (std::abs(x.mu - it->mu) <= radius) {
        if (x.residual < it->residual) *it = x;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(x);
  }
  return out;
}

bool near_boundary(const Box& b, cplx z, double margin) { return b.boundary_distance(z) <= margin; }

Box grow(const Box& b, double delta) {
  return {b.re_min - delta, std::min(b.re_max + delta, kMaxBoxReal), b.im_min - delta, b.im_max + delta};
}

}  // namespace

cplx char_fn(cplx mu, double beta) {
  const double k = (1.0 - beta) * (1.0 + beta);
  return mu * mu + mu + k * (1.0 - std::exp(mu));
}

cplx char_fn_derivative(cplx mu, double beta) {
  const double k = (1.0 - beta) * (1.0 + beta);
  return 2.0 * mu + 1.0 - k * std::exp(mu);
}

double char_fn_scale(cplx mu, double beta) {
  const double k = (1.0 - beta) * (1.0 + beta);
  return std::norm(mu) + std::abs(k) * std::exp(mu.real());
}

double Box::boundary_distance(cplx z) const {
  const double x = z.real();
  const double y = z.imag();
  const double dx_in = std::min(x - re_min, re_max - x);
  const double dy_in = std::min(y - im_min, im_max - y);
  if (dx_in >= 0.0 && dy_in >= 0.0) return std::min(dx_in, dy_in);
  const double ox = std::max({re_min - x, 0.0, x - re_max});
  const double oy = std::max({im_min - y, 0.0, y - im_max});
  return std::hypot(ox, oy);
}

int RootSet::multiplicity_sum() const {
  int s = 0;
  for (const auto& r : roots) s += r.multiplicity;
  return s;
}

int zero_multiplicity(double beta) { return beta == 0.0 ? 2 : 1; }

int count_roots(double beta, const Box& box_in) {
  check_beta(beta);
  const Box box = clip_box(box_in);
  const cplx corners[5] = {{box.re_min, box.im_min},
                           {box.re_max, box.im_min},
                           {box.re_max, box.im_max},
                           {box.re_min, box.im_max},
                           {box.re_min, box.im_min}};
  auto eval = [&](cplx z) {
    const cplx f = char_fn(z, beta);
    if (!(std::abs(f) > 1e-10 * std::max(1.0, char_fn_scale(z, beta)))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "contour passes within reach of a root near " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag()
          << "i";
      throw NumericalFailure(FailureKind::ContourTooClose, msg.str());
    }
    return f;
  };

  struct Piece {
    cplx a, b;
    cplx fa, fb;
    int depth;
  };
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx p = corners[e];
    const cplx q = corners[e + 1];
    const int pieces = std::max(4, static_cast<int>(std::ceil(std::abs(q - p) / 0.1)));
    cplx prev = p;
    cplx fprev = eval(p);
    for (int s = 1; s <= pieces; ++s) {
      const cplx next = (s == pieces) ? q : p + (q - p) * (static_cast<double>(s) / pieces);
      const cplx fnext = eval(next);
      std::vector<Piece> stack{{prev, next, fprev, fnext, 0}};
      while (!stack.empty()) {
        Piece pc = stack.back();
        stack.pop_back();
        const cplx m = 0.5 * (pc.a + pc.b);
        const cplx fm = eval(m);
        const double d1 = std::arg(fm / pc.fa);
        const double d2 = std::arg(pc.fb / fm);
        const double d = std::arg(pc.fb / pc.fa);
        if (std::abs(d1) < 0.5 && std::abs(d2) < 0.5 && std::abs(d1 + d2 - d) < 1e-9) {
          total += d1 + d2;
          continue;
        }
        if (pc.depth >= 48) {
          throw NumericalFailure(FailureKind::NonIntegerWinding, "argument tracking failed to resolve the contour");
        }
        stack.push_back({m, pc.b, fm, pc.fb, pc.depth + 1});
        stack.push_back({pc.a, m, pc.fa, fm, pc.depth + 1});
      }
      prev = next;
      fprev = fnext;
    }
  }
  const double w = total / (2.0 * std::numbers::pi);
  const double n = std::round(w);
  if (std::abs(w - n) > 1e-6) {
    std::ostringstream msg;
    msg << "non-integer winding number " << w;
    throw NumericalFailure(FailureKind::NonIntegerWinding, msg.str());
  }
  return static_cast<int>(n);
}

RootSet find_roots(double beta, const Box& box_in, int grid_density, const RootFindOptions& opts) {
  check_beta(beta);
  if (grid_density < 1 || grid_density > 4096) throw InvalidArgument("grid density must be in [1, 4096]");
  const Box box = clip_box(box_in);
  const double scale = std::max(box.width(), box.height());
  const Box accept = grow(box, 0.05 * scale);

  int density = grid_density;
  std::vector<Candidate> pool;
  for (int attempt = 0;; ++attempt) {
    auto found = newton_sweep(beta, box, density, accept, opts);
    pool.insert(pool.end(), found.begin(), found.end());
    pool.push_back({cplx(0.0, 0.0), 0.0});
    pool = deduplicate(std::move(pool), opts.dedup_radius);

    // Candidate list closed under conjugation, used to keep the contour clear of roots.
    std::vector<cplx> known;
    for (const auto& c : pool) {
      known.push_back(c.mu);
      known.push_back(std::conj(c.mu));
    }

    Box eff = box;
    const double margin = 1e-6 * scale;
    int count = -1;
    for (int k = 0; k < 30 && count < 0; ++k) {
      const double delta = 1e-4 * scale * std::ldexp(1.0, k);
      bool moved = false;
      for (const cplx z : known) {
        if (!near_boundary(eff, z, margin)) continue;
        moved = true;
        if (std::abs(z.real() - eff.re_min) <= margin) eff.re_min -= delta;
        if (std::abs(z.real() - eff.re_max) <= margin) eff.re_max = std::min(eff.re_max + delta, kMaxBoxReal);
        if (std::abs(z.imag() - eff.im_min) <= margin) eff.im_min -= delta;
        if (std::abs(z.imag() - eff.im_max) <= margin) eff.im_max += delta;
      }
      if (moved) continue;
      try {
        count = count_roots(beta, eff);
      } catch (const NumericalFailure& err) {
        if (err.kind() != FailureKind::ContourTooClose) throw;
        eff = grow(eff, delta);
      }
    }
    if (count < 0) throw NumericalFailure(FailureKind::ContourTooClose, "could not clear the contour of roots");

    RootSet rs;
    rs.beta = beta;
    rs.search_box = eff;
    rs.certified_count = count;
    for (const auto& c : pool) {
      if (!eff.contains(c.mu)) continue;
      Root r;
      r.mu = c.mu;
      r.residual = c.residual;
      r.multiplicity = (c.mu == cplx(0.0, 0.0)) ? zero_multiplicity(beta) : 1;
      rs.roots.push_back(r);
    }
    // Complete conjugate pairs that Newton did not reach.
    const std::size_t found_n = rs.roots.size();
    for (std::size_t i = 0; i < found_n; ++i) {
      const Root r = rs.roots[i];
      if (r.mu.imag() == 0.0) continue;
      const cplx partner = std::conj(r.mu);
      if (!eff.contains(partner)) continue;
      bool present = false;
      for (const auto& o : rs.roots) present = present || std::abs(o.mu - partner) <= opts.dedup_radius;
      if (present) continue;
      Root p = r;
      p.mu = partner;
      p.is_conjugate_partner = true;
      rs.roots.push_back(p);
    }
    std::sort(rs.roots.begin(), rs.roots.end(), [](const Root& a, const Root& b) {
      if (a.mu.imag() != b.mu.imag()) return a.mu.imag() < b.mu.imag();
      return a.mu.real() < b.mu.real();
    });
    if (rs.multiplicity_sum() == count) return rs;
    if (attempt >= opts.max_refinements) {
      std::ostringstream msg;
      msg << "Newton search found " << rs.multiplicity_sum() << " roots (with multiplicity) but the contour count is "
          << count;
      throw NumericalFailure(FailureKind::CertificationMismatch, msg.str());
    }
    density *= 2;
  }
}

EigenLadder eigenfrequencies(const RootSet& rs, const ModelParams& p) {
  const double g = lorentz_gamma(rs.beta);
  EigenLadder lad;
  for (const auto& r : rs.roots) {
    if (r.mu.imag() > 0.0) lad.eta.push_back(r.mu.imag());
  }
  std::sort(lad.eta.begin(), lad.eta.end());
  for (double eta : lad.eta) lad.omega.push_back(eta * p.c / (g * p.d));
  if (lad.eta.size() >= 2) lad.asymptotic_spacing = lad.eta.back() - lad.eta[lad.eta.size() - 2];
  return lad;
}

}  // namespace zitterdyn
