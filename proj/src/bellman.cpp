#include "wsq/bellman.hpp"

#include <cmath>
#include <string>

#include "wsq/errors.hpp"

namespace wsq::bellman {

namespace {

double g_inner(double t, const Params& params) {
  return 6.0 - 4.0 / std::sqrt(t) - std::log(t) / std::sqrt(params.c);
}

// ---------------------------------------------------------------------------
// Separable terms. Every block is coef * X(x) * Y(y) * H(w, v), so xi''(0)
// only needs X, X', X'', Y, Y' and the (w, v) Hessian of H.

enum class XKind { One, Square, AbsCube };
enum class YKind { One, Sqrt, ThreeHalves };
enum class HKind { PhiOverV2, Monomial, InvGSquared };

struct Term {
  double coef;
  XKind x;
  YKind y;
  HKind h;
  double wpow = 0.0;  // Monomial exponents
  double vpow = 0.0;
};

struct Jet1 {
  double f, f1, f2;
};

struct HJet {
  double f, w, v, ww, wv, vv;
};

Jet1 x_jet(XKind kind, double x) {
  const double ax = std::abs(x);
  switch (kind) {
    case XKind::One: return {1.0, 0.0, 0.0};
    case XKind::Square: return {x * x, 2.0 * x, 2.0};
    case XKind::AbsCube: return {ax * ax * ax, 3.0 * x * ax, 6.0 * ax};
  }
  return {};
}

// Y'' is never needed: y moves by tau^2 d^2, so only Y' enters xi''(0).
Jet1 y_jet(YKind kind, double y) {
  switch (kind) {
    case YKind::One: return {1.0, 0.0, 0.0};
    case YKind::Sqrt: {
      const double s = std::sqrt(y);
      return {s, y > 0.0 ? 0.5 / s : 0.0, 0.0};
    }
    case YKind::ThreeHalves: {
      const double s = std::sqrt(y);
      return {y * s, 1.5 * s, 0.0};
    }
  }
  return {};
}

HJet h_jet(const Term& term, double w, double v, const Params& params) {
  switch (term.h) {
    case HKind::PhiOverV2: {
      // F(w, v) = phi(t) v^{-2}, phi(t) = (t - a)^alpha.
      const double t = w * v * v;
      const double base = t - params.a;
      const double al = params.alpha;
      const double phi = std::pow(base, al);
      const double phi1 = al * std::pow(base, al - 1.0);
      const double phi2 = al * (al - 1.0) * std::pow(base, al - 2.0);
      const double v2 = v * v;
      return {phi / v2,
              phi1,
              2.0 * w * phi1 / v - 2.0 * phi / (v2 * v),
              phi2 * v2,
              2.0 * w * v * phi2,
              4.0 * w * w * phi2 + 6.0 * (phi - t * phi1) / (v2 * v2)};
    }
    case HKind::Monomial: {
      const double m = term.wpow;
      const double n = term.vpow;
      const double f = std::pow(w, m) * std::pow(v, n);
      return {f, m * f / w, n * f / v, m * (m - 1.0) * f / (w * w), m * n * f / (w * v),
              n * (n - 1.0) * f / (v * v)};
    }
    case HKind::InvGSquared: {
      // G(w, v) = 6v - 4 w^{-1/2} - c^{-1/2} v ln(w v^2), H = G^{-2}.
      const double k = 1.0 / std::sqrt(params.c);
      const double lt = std::log(w * v * v);
      const double g = 6.0 * v - 4.0 / std::sqrt(w) - k * v * lt;
      const double gw = 2.0 * std::pow(w, -1.5) - k * v / w;
      const double gv = 6.0 - k * lt - 2.0 * k;
      const double gww = -3.0 * std::pow(w, -2.5) + k * v / (w * w);
      const double gwv = -k / w;
      const double gvv = -2.0 * k / v;
      const double g2 = 1.0 / (g * g);
      const double g3 = g2 / g;
      const double g4 = g2 * g2;
      return {g2,
              -2.0 * g3 * gw,
              -2.0 * g3 * gv,
              6.0 * g4 * gw * gw - 2.0 * g3 * gww,
              6.0 * g4 * gw * gv - 2.0 * g3 * gwv,
              6.0 * g4 * gv * gv - 2.0 * g3 * gvv};
    }
  }
  return {};
}

void accumulate(const Term& term, double weight, const StatePoint& pt, const Params& params,
                const Direction& dir, QuadForm& acc) {
  const double coef = term.coef * weight;
  if (coef == 0.0) return;
  const Jet1 X = x_jet(term.x, pt.x);
  const Jet1 Y = y_jet(term.y, pt.y);
  const HJet H = h_jet(term, pt.w, pt.v, params);
  const double d = dir.d;
  const double r = dir.r;
  const double s = dir.s;
  // X = 0 kills every contribution carrying X; skip it so y = 0 never meets Y' = inf.
  const double xy = X.f == 0.0 ? 0.0 : X.f * Y.f;
  const std::array<double, 7> parts = {
      X.f2 * Y.f * H.f * d * d,
      X.f == 0.0 ? 0.0 : 2.0 * X.f * Y.f1 * H.f * d * d,
      xy * H.ww * r * r,
      xy * H.vv * s * s,
      2.0 * X.f1 * Y.f * H.w * d * r,
      2.0 * X.f1 * Y.f * H.v * d * s,
      2.0 * xy * H.wv * r * s,
  };
  for (double part : parts) {
    acc.value += coef * part;
    acc.scale += std::abs(coef * part);
  }
}

struct BlockTerms {
  std::array<Term, 2> terms;
  int count;
};

BlockTerms block_terms(int index, const Params& params) {
  const double c32 = std::pow(params.c, 1.5);
  const double cb = std::pow(params.c, params.beta);
  const double b = params.beta;
  switch (index) {
    case 1: return {{Term{1.0, XKind::One, YKind::ThreeHalves, HKind::PhiOverV2}}, 1};
    case 2:
      return {{Term{cb, XKind::Square, YKind::Sqrt, HKind::Monomial, 1.0 - b, -2.0 * b},
               Term{-80.0 * c32, XKind::AbsCube, YKind::One, HKind::Monomial, 0.0, -2.0}},
              2};
    case 3: return {{Term{64.0 * c32, XKind::AbsCube, YKind::One, HKind::Monomial, 0.0, -2.0}}, 1};
    case 4: return {{Term{c32, XKind::AbsCube, YKind::One, HKind::InvGSquared}}, 1};
    case 5:
      return {{Term{cb, XKind::One, YKind::ThreeHalves, HKind::Monomial, 1.0 - b, -2.0 * b}}, 1};
    default: break;
  }
  throw UsageError("block index must be in 1..5, got " + std::to_string(index));
}

const Term kQuadraticTerm{-2.0, XKind::Square, YKind::Sqrt, HKind::Monomial, 1.0, 0.0};
const Term kCorrectionTerm{-0.125, XKind::One, YKind::ThreeHalves, HKind::Monomial, 1.0, 0.0};

void require_domain(const StatePoint& pt, const Params& params) {
  if (!in_domain(pt, params)) {
    throw DomainError("point outside D_c: t = " + std::to_string(pt.t()) +
                      ", c = " + std::to_string(params.c));
  }
}

bool crosses_zero(double a, double b) { return (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0); }

}  // namespace

Params derive_params(double c) {
  if (!(c >= 1.0) || !std::isfinite(c)) {
    throw DomainError("c must be a finite number >= 1, got " + std::to_string(c));
  }
  return Params{c, 0.5, 1.0 - 1.0 / (4.0 * c), 0.75};
}

std::string_view region_name(Region region) {
  switch (region) {
    case Region::D1: return "D1";
    case Region::D2: return "D2";
    case Region::D3: return "D3";
  }
  return "?";
}

bool in_domain(const StatePoint& pt, const Params& params) {
  if (!(pt.w > 0.0) || !(pt.v > 0.0) || !(pt.y >= 0.0) || !std::isfinite(pt.x)) return false;
  const double t = pt.t();
  return t >= 1.0 - kDomainSlack && t <= params.c * (1.0 + kDomainSlack);
}

double d1_threshold(const StatePoint& pt, const Params& params) {
  return 16.0 * std::sqrt(params.c) * std::abs(pt.x) * std::pow(params.c / pt.t(), 1.0 - params.beta);
}

Region classify_region(const StatePoint& pt, const Params& params) {
  require_domain(pt, params);
  const double root_y = std::sqrt(pt.y);
  if (root_y <= 4.0 * std::abs(pt.x)) return Region::D3;
  if (root_y >= d1_threshold(pt, params)) return Region::D1;
  return Region::D2;
}

double eval_block(int index, const StatePoint& pt, const Params& params) {
  const double ax = std::abs(pt.x);
  const double ax3 = ax * ax * ax;
  const double t = pt.t();
  const double v2 = pt.v * pt.v;
  const double c32 = std::pow(params.c, 1.5);
  const double y32 = pt.y * std::sqrt(pt.y);
  switch (index) {
    case 1: return y32 * std::pow(t - params.a, params.alpha) / v2;
    case 2:
      return std::pow(params.c, params.beta) * pt.x * pt.x * std::sqrt(pt.y) *
                 std::pow(pt.w, 1.0 - params.beta) * std::pow(pt.v, -2.0 * params.beta) -
             80.0 * c32 * ax3 / v2;
    case 3: return 64.0 * c32 * ax3 / v2;
    case 4: {
      const double inner = g_inner(t, params);
      return c32 * ax3 / v2 / (inner * inner);
    }
    case 5:
      return std::pow(params.c, params.beta) * y32 * std::pow(pt.w, 1.0 - params.beta) *
             std::pow(pt.v, -2.0 * params.beta);
    default: break;
  }
  throw UsageError("block index must be in 1..5, got " + std::to_string(index));
}

double eval_branch(Region branch, const StatePoint& pt, const Params& params) {
  const double b1 = eval_block(1, pt, params);
  const double b4 = eval_block(4, pt, params);
  const double quad = 2.0 * pt.x * pt.x * std::sqrt(pt.y) * pt.w;
  switch (branch) {
    case Region::D1: return b1 - quad - 192.0 * eval_block(3, pt, params) - 276480.0 * b4;
    case Region::D2: return b1 - quad + 192.0 * eval_block(2, pt, params) - 276480.0 * b4;
    case Region::D3:
      return b1 - pt.y * std::sqrt(pt.y) * pt.w / 8.0 - 240.0 * eval_block(3, pt, params) -
             276480.0 * b4 + 12.0 * eval_block(5, pt, params);
  }
  return 0.0;
}

double eval_B(const StatePoint& pt, const Params& params) {
  return eval_branch(classify_region(pt, params), pt, params);
}

BlockCombination branch_combination(Region branch) {
  switch (branch) {
    case Region::D1: return {{1.0, 0.0, -192.0, -276480.0, 0.0}, 1.0, 0.0};
    case Region::D2: return {{1.0, 192.0, 0.0, -276480.0, 0.0}, 1.0, 0.0};
    case Region::D3: return {{1.0, 0.0, -240.0, -276480.0, 12.0}, 0.0, 1.0};
  }
  return {};
}

QuadForm combination_second_variation(const BlockCombination& combo, const StatePoint& pt,
                                      const Params& params, const Direction& dir) {
  QuadForm acc;
  for (int i = 0; i < 5; ++i) {
    const double weight = combo.blocks[static_cast<std::size_t>(i)];
    if (weight == 0.0) continue;
    const BlockTerms bt = block_terms(i + 1, params);
    for (int k = 0; k < bt.count; ++k) accumulate(bt.terms[static_cast<std::size_t>(k)], weight, pt, params, dir, acc);
  }
  accumulate(kQuadraticTerm, combo.quadratic, pt, params, dir, acc);
  accumulate(kCorrectionTerm, combo.correction, pt, params, dir, acc);
  return acc;
}

QuadForm second_variation(Region branch, const StatePoint& pt, const Params& params,
                          const Direction& dir) {
  return combination_second_variation(branch_combination(branch), pt, params, dir);
}

QuadForm block_second_variation(int index, const StatePoint& pt, const Params& params,
                                const Direction& dir) {
  if (index < 1 || index > 5) {
    throw UsageError("block index must be in 1..5, got " + std::to_string(index));
  }
  BlockCombination combo;
  combo.blocks[static_cast<std::size_t>(index - 1)] = 1.0;
  return combination_second_variation(combo, pt, params, dir);
}

QuadForm xi_second(const StatePoint& pt, const Params& params, const Direction& dir,
                   std::optional<Region> region_override) {
  require_domain(pt, params);
  if (!(pt.t() > 1.0)) {
    throw PreconditionError("concavity property requires 1 < w v^2, got t = " +
                            std::to_string(pt.t()));
  }
  const Region branch = region_override.value_or(classify_region(pt, params));
  return second_variation(branch, pt, params, dir);
}

double central_second_difference(const std::function<double(double)>& f, double h) {
  return (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h);
}

double xi_second_fd(const StatePoint& pt, const Params& params, const Direction& dir, double h,
                    std::optional<Region> branch, bool strict_domain) {
  if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
  require_domain(pt, params);
  const Region home = branch.value_or(classify_region(pt, params));
  auto moved = [&](double tau) {
    return StatePoint{pt.x + tau * dir.d, pt.y + tau * tau * dir.d * dir.d, pt.w + tau * dir.r,
                      pt.v + tau * dir.s};
  };
  for (double k : {-2.0, -1.0, 1.0, 2.0}) {
    const StatePoint q = moved(k * h);
    if (!(q.w > 0.0) || !(q.v > 0.0)) throw StencilError("stencil left w, v > 0");
    if (crosses_zero(pt.x, q.x)) throw StencilError("stencil crosses x = 0");
    if (strict_domain && !in_domain(q, params)) throw StencilError("stencil left D_c");
    if (!strict_domain && !(q.t() > params.a)) throw StencilError("stencil left t > a");
    if (!branch && classify_region(q, params) != home) {
      throw StencilError("stencil changed region");
    }
  }
  return central_second_difference([&](double tau) { return eval_branch(home, moved(tau), params); },
                                   h);
}

}  // namespace wsq::bellman
