#include "wsq/extrapolation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "wsq/errors.hpp"

namespace wsq::extrapolation {

namespace {

constexpr double kE = std::numbers::e;

void require_pc(double p, double c) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (!(c >= 1.0)) throw DomainError("c must be at least 1");
}

ViolationRecord scalar_record(std::string name, double margin, double scale, std::uint64_t index,
                              std::vector<std::pair<std::string, double>> extra) {
  ViolationRecord rec;
  rec.check_name = std::move(name);
  rec.margin = margin;
  rec.scale = scale;
  rec.sample_index = index;
  rec.extra = std::move(extra);
  return rec;
}

}  // namespace

double d_residual(double p, double c, double d) {
  const double q = p - 1.0;
  return c * (1.0 + d) * std::pow(1.0 - d / q, q) - 1.0;
}

double gap_log_residual(double p, double c, double u) {
  const double q = p - 1.0;
  return std::log(c) + std::log1p(q * (1.0 - u)) + q * std::log(u);
}

double solve_gap(double p, double c) {
  require_pc(p, c);
  if (c == 1.0) return 1.0;
  // u^q lies between 1/(c p) and 1/c; the log residual is increasing in log u.
  const double q = p - 1.0;
  double lo = -std::log(c * p) / q;
  double hi = -std::log(c) / q;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gap_log_residual(p, c, std::exp(mid)) < 0.0 ? lo : hi) = mid;
  }
  const double ulo = std::exp(lo), uhi = std::exp(hi);
  return std::abs(gap_log_residual(p, c, ulo)) <= std::abs(gap_log_residual(p, c, uhi)) ? ulo : uhi;
}

double solve_d(double p, double c) { return (p - 1.0) * (1.0 - solve_gap(p, c)); }

NormBound maximal_norm_bound(double p, double c) {
  const double u = solve_gap(p, c);
  const double q = p - 1.0;
  NormBound out;
  out.tight = p / (q * u);
  out.middle = p / q * std::pow(p * c, 1.0 / q);
  out.explicit_bound = p * kE / q * std::pow(c, 1.0 / q);
  out.naive_middle = p / q * std::pow(q * c, 1.0 / q);
  return out;
}

double dual_norm_explicit(double p, double c) {
  require_pc(p, c);
  return p * kE * c;
}

KpBranches kp_branches(double p) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  KpBranches out;
  out.lower = 553.0 / (p - 1.0);
  out.upper = 189.0 * std::sqrt(p);
  out.overlap = p == 3.0;
  out.value = p < 3.0 ? out.lower : p > 3.0 ? out.upper : std::min(out.lower, out.upper);
  return out;
}

double kp_constant(double p) { return kp_branches(p).value; }

double ap_exponent(double p) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  return std::max(0.5, 1.0 / (p - 1.0));
}

double L_constant(double p, double p0, double kappa, double C, double m_norm_p, double m_norm_dual,
                  double char_W) {
  if (!(p > 1.0) || !(p0 > 1.0)) throw DomainError("p and p0 must exceed 1");
  if (!(kappa > 0.0) || !(C > 0.0)) throw DomainError("kappa and C must be positive");
  if (!(m_norm_p >= 1.0) || !(m_norm_dual >= 1.0)) throw DomainError("operator norms are at least 1");
  if (!(char_W >= 1.0)) throw DomainError("a characteristic is at least 1");
  if (p == p0) return C * std::pow(char_W, kappa);
  if (p < p0) {
    return std::pow(2.0, 1.0 - p / p0) * C * std::pow(2.0 * m_norm_p, kappa * (p0 - p)) *
           std::pow(char_W, kappa);
  }
  const double pp = p / (p - 1.0);
  return std::pow(2.0, pp * (1.0 - p0 / p) / p0) * C *
         std::pow(2.0 * m_norm_dual, kappa * (p - p0) / (p - 1.0)) *
         std::pow(char_W, kappa * (p0 - 1.0) / (p - 1.0));
}

double L_over_char_power(double p, double char_W) {
  const double m = maximal_norm_bound(p, char_W).explicit_bound;
  const double md = dual_norm_explicit(p, char_W);
  return L_constant(p, 3.0, 0.5, 64.0, m, md, char_W) / std::pow(char_W, ap_exponent(p));
}

double phi_prefactor(double p) {
  if (p < 1.0 || p > 3.0) throw DomainError("phi is used on [1, 3]");
  const double tail = p == 1.0 ? 1.0 : std::pow(p - 1.0, (p - 1.0) / 2.0);
  return std::pow(2.0, 1.0 - p / 3.0) * 64.0 * std::pow(2.0, (3.0 - p) / 2.0) *
         std::pow(p * kE, (3.0 - p) / 2.0) * tail;
}

double upper_prefactor() { return std::pow(2.0, 5.0 / 6.0) * 64.0 * std::sqrt(kE); }

ScanReport verify_prefactors(int nodes) {
  const auto start = std::chrono::steady_clock::now();
  if (nodes < 2) throw DomainError("need at least two grid nodes");
  ScanReport report;
  report.check_name = "prefactors";
  report.tolerance = 0.0;
  double prev = phi_prefactor(1.0);
  for (int k = 1; k < nodes; ++k) {
    const double p = k == nodes - 1 ? 3.0 : 1.0 + 2.0 * k / (nodes - 1);
    const double cur = phi_prefactor(p);
    report.add(scalar_record("prefactors.phi_nonincreasing", cur - prev, 1.0, report.samples,
                             {{"p", p}, {"phi", cur}}));
    prev = cur;
  }
  const double phi1 = phi_prefactor(1.0);
  report.add(scalar_record("prefactors.phi(1)<553", phi1 - 553.0, 1.0, report.samples, {{"phi1", phi1}}));
  report.add(scalar_record("prefactors.phi(1)>552", 552.0 - phi1, 1.0, report.samples, {{"phi1", phi1}}));
  const double up = upper_prefactor();
  report.add(scalar_record("prefactors.upper<189", up - 189.0, 1.0, report.samples, {{"upper", up}}));
  report.add(scalar_record("prefactors.upper>187.9", 187.9 - up, 1.0, report.samples, {{"upper", up}}));
  report.parameters.emplace_back("nodes", nodes);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ScanReport check_norm_chain(std::span<const double> p_grid, std::span<const double> c_grid) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.check_name = "norm_chain";
  report.tolerance = 1e-12;
  for (const double p : p_grid) {
    double prev_d = 0.0;
    double prev_c = 0.0;
    for (const double c : c_grid) {
      const double u = solve_gap(p, c);
      const double d = (p - 1.0) * (1.0 - u);
      const NormBound nb = maximal_norm_bound(p, c);
      const std::vector<std::pair<std::string, double>> at{
          {"p", p}, {"c", c}, {"d", d}, {"naive_middle", nb.naive_middle}};
      report.add(scalar_record("norm_chain.residual", std::abs(gap_log_residual(p, c, u)), 1.0, report.samples, at));
      report.add(scalar_record("norm_chain.d_in_range", -std::min(d, u), 1.0, report.samples, at));
      report.add(scalar_record("norm_chain.tight<=middle", nb.tight - nb.middle, nb.tight + nb.middle,
                               report.samples, at));
      report.add(scalar_record("norm_chain.middle<=explicit", nb.middle - nb.explicit_bound,
                               nb.middle + nb.explicit_bound, report.samples, at));
      if (c > prev_c && prev_c > 0.0) {
        report.add(scalar_record("norm_chain.d_nondecreasing_in_c", prev_d - d, 1.0, report.samples, at));
      }
      prev_d = d;
      prev_c = c;
    }
  }
  report.parameters.emplace_back("p_nodes", static_cast<double>(p_grid.size()));
  report.parameters.emplace_back("c_nodes", static_cast<double>(c_grid.size()));
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double davis_gamma_bound(double p) {
  if (!(p >= 2.0)) throw DomainError("the Davis bound needs p >= 2");
  const double pi = std::numbers::pi;
  return std::sqrt(8.0 / (pi * pi)) * std::pow(4.0 * std::tgamma((p + 1.0) / 2.0), 1.0 / p);
}

ConstantsReport constants_report(double p, double c) {
  require_pc(p, c);
  ConstantsReport out;
  out.p = p;
  out.c = c;
  out.d_pc = solve_d(p, c);
  out.norm = maximal_norm_bound(p, c);
  out.m_norm_tight = out.norm.tight;
  out.m_norm_explicit = out.norm.explicit_bound;
  out.branches = kp_branches(p);
  out.K_p = out.branches.value;
  out.exponent = ap_exponent(p);
  out.L_W = L_constant(p, 3.0, 0.5, 64.0, out.norm.explicit_bound, dual_norm_explicit(p, c), c);
  return out;
}

}  // namespace wsq::extrapolation
