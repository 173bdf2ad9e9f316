#include "wsq/circle_operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "json.hpp"
#include "wsq/errors.hpp"
#include "wsq/extrapolation.hpp"
#include "wsq/rng.hpp"

namespace wsq::circle {

namespace {

constexpr double kPi = std::numbers::pi;
using Gauss = boost::math::quadrature::gauss<double, 30>;

// Composite 30-point Gauss-Legendre; exact for polynomials of degree < 60 per panel.
template <class F>
double gauss_panels(F&& f, double a, double b, int panels) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) sum += Gauss::integrate(f, a + i * h, i + 1 == panels ? b : a + (i + 1) * h);
  return sum;
}

int panels_for_degree(int degree) { return 1 + degree / 60; }

// T_k(r) = sum_m a_{m+k} conj(a_m) r^{2m+2k}, for k = 0..K.
void radial_terms(std::span<const cplx> a, double r, std::vector<cplx>& out) {
  const std::size_t n = a.size();
  out.assign(n, cplx{0.0, 0.0});
  std::vector<double> pw(2 * n, 1.0);
  const double r2 = r * r;
  for (std::size_t i = 1; i < pw.size(); ++i) pw[i] = pw[i - 1] * r2;
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m + k < n; ++m) acc += a[m + k] * std::conj(a[m]) * pw[m + k];
    out[k] = acc;
  }
}

// u = Re sum b_n z^n with b_0 = c_0, b_n = 2 c_n.
struct Extension {
  std::vector<cplx> b;
  explicit Extension(const CircleFunction& f) : b(f.coefficients().begin(), f.coefficients().end()) {
    for (std::size_t n = 1; n < b.size(); ++n) b[n] *= 2.0;
  }
  double operator()(cplx z) const {
    cplx acc{0.0, 0.0};
    for (auto it = b.rbegin(); it != b.rend(); ++it) acc = acc * z + *it;
    return acc.real();
  }
};

cplx unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

double GstarSpectrum::gstar2(double theta) const {
  double s = moments.empty() ? 0.0 : moments[0].real();
  for (std::size_t k = 1; k < moments.size(); ++k) s += 2.0 * (moments[k] * unit(static_cast<double>(k) * theta)).real();
  return 2.0 * s;
}

GstarSpectrum gstar_spectrum(const CircleFunction& f, const QuadratureSpec& quad) {
  if (quad.radial_nodes < 4 || !(quad.boundary_cutoff > 0.0 && quad.boundary_cutoff < 1.0)) {
    throw UsageError("quadrature needs at least 4 radial nodes and a cutoff in (0, 1)");
  }
  const auto a = f.derivative_coefficients();
  const std::size_t n = a.size();
  const int J = quad.radial_nodes + (quad.radial_nodes % 2);  // Simpson needs an even count
  const double eps = quad.boundary_cutoff;
  const double s_max = 1.0 - std::sqrt(eps);
  const double ds = s_max / J;
  std::vector<cplx> fine(n), coarse(n), terms;
  for (int j = 0; j <= J; ++j) {
    const double s = j * ds;
    const double r = 1.0 - (1.0 - s) * (1.0 - s);
    if (r <= 0.0) continue;  // integrand vanishes at r = 0
    radial_terms(a, r, terms);
    const double jac = r * std::log(1.0 / r) * 2.0 * (1.0 - s);
    const double wf = (j == 0 || j == J) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    const double wc = (j % 2) ? 0.0 : ((j == 0 || j == J) ? 1.0 : (j % 4 ? 4.0 : 2.0));
    for (std::size_t k = 0; k < n; ++k) {
      fine[k] += wf * jac * terms[k];
      coarse[k] += wc * jac * terms[k];
    }
  }
  GstarSpectrum out;
  out.moments.resize(n);
  radial_terms(a, 1.0 - eps, terms);
  double diff = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx f_k = fine[k] * (ds / 3.0);
    const cplx c_k = coarse[k] * (2.0 * ds / 3.0);
    // int_{1-eps}^1 T_k(r) r ln(1/r) dr ~ T_k(1 - eps) eps^2 / 2.
    const cplx t_k = terms[k] * (eps * eps / 2.0);
    out.moments[k] = f_k + t_k;
    const double mult = k == 0 ? 2.0 : 4.0;
    diff += mult * std::abs(f_k - c_k);
    tail += mult * std::abs(t_k);
  }
  out.tail = tail;
  out.error_estimate = diff + tail;
  return out;
}

GstarSpectrum gstar_spectrum_exact(const CircleFunction& f) {
  const auto a = f.derivative_coefficients();
  const std::size_t n = a.size();
  GstarSpectrum out;
  out.moments.assign(n, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m + k < n; ++m) {
      const double d = 2.0 * static_cast<double>(m + k) + 2.0;
      out.moments[k] += a[m + k] * std::conj(a[m]) / (d * d);
    }
  }
  return out;
}

GstarValue gstar(const CircleFunction& f, double theta, const QuadratureSpec& quad) {
  const GstarSpectrum spec = gstar_spectrum(f, quad);
  const double g2 = std::max(0.0, spec.gstar2(theta));
  const double value = std::sqrt(g2);
  return {value, value > 0.0 ? spec.error_estimate / (2.0 * value) : std::sqrt(spec.error_estimate)};
}

double gstar_average(const CircleFunction& f, const QuadratureSpec& quad) {
  const GstarSpectrum spec = gstar_spectrum(f, quad);
  return 2.0 * spec.moments[0].real();
}

double lp_g(const CircleFunction& f, double theta) {
  const auto a = f.derivative_coefficients();
  const cplx e = unit(theta);
  const int degree = 2 * static_cast<int>(a.size()) + 1;
  const double g2 = gauss_panels([&](double r) { return (1.0 - r) * grad_norm2(a, r * e); }, 0.0, 1.0,
                                 panels_for_degree(degree));
  return std::sqrt(std::max(0.0, g2));
}

double stoltz_radius(double alpha, double phi) {
  const double psi = std::acos(alpha);
  double x = std::remainder(phi, 2.0 * kPi);
  x = std::abs(x);
  return x < psi ? alpha / std::cos(x - psi) : alpha;
}

double stoltz_area(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return kPi * alpha * alpha + alpha * std::sqrt(1.0 - alpha * alpha) - alpha * alpha * std::acos(alpha);
}

double lusin_area(const CircleFunction& f, double theta, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const auto a = f.derivative_coefficients();
  const int radial_panels = panels_for_degree(2 * static_cast<int>(a.size()) + 1);
  const double psi = std::acos(alpha);
  // Each piece maps to the rectangle (phi, r) with r in [0, rho(phi)].
  auto radial = [&](double phi) {
    const double rho = stoltz_radius(alpha, phi);
    const cplx e = unit(theta + phi);
    return gauss_panels([&](double r) { return grad_norm2(a, r * e) * r; }, 0.0, rho, radial_panels);
  };
  constexpr int kAngularPanels = 16;
  const double area2 = gauss_panels(radial, -psi, 0.0, kAngularPanels) + gauss_panels(radial, 0.0, psi, kAngularPanels) +
                       gauss_panels(radial, psi, 2.0 * kPi - psi, kAngularPanels);
  return std::sqrt(std::max(0.0, area2));
}

ApEstimate poisson_ap_characteristic(const CircleFunction& w, double p, const PoissonGrid& grid, Exec exec) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (grid.radial < 2 || grid.angular < 2) throw UsageError("grid needs at least 2 x 2 nodes");
  const int n = w.degree();
  const int check_nodes = std::max(16 * n + 64, 1024);
  for (int j = 0; j < check_nodes; ++j) {
    if (!(w(2.0 * kPi * j / check_nodes) > 0.0)) throw DomainError("weight is not positive on the circle");
  }
  const int m = grid.dft_samples > 0 ? grid.dft_samples : std::max(8 * n, 512);
  const int dual_degree = m / 4;
  const CircleFunction full = CircleFunction::from_function(
      [&](double t) { return std::pow(w(t), -1.0 / (p - 1.0)); }, (m - 1) / 2, m);
  const auto fc = full.coefficients();
  const CircleFunction dual(std::vector<cplx>(fc.begin(), fc.begin() + dual_degree + 1));
  double dropped = 0.0;
  for (std::size_t n = static_cast<std::size_t>(dual_degree) + 1; n < fc.size(); ++n) dropped = std::max(dropped, std::abs(fc[n]));
  const Extension uw(w);
  const Extension ud(dual);
  struct Row {
    double fine = 0.0;
    double coarse = 0.0;
  };
  const auto rows = map_indices<Row>(exec, static_cast<std::size_t>(grid.radial), [&](std::size_t j) {
    const double s = static_cast<double>(j) / grid.radial;
    const double r = 1.0 - (1.0 - s) * (1.0 - s);
    Row row;
    for (int l = 0; l < grid.angular; ++l) {
      const cplx z = r * unit(2.0 * kPi * l / grid.angular);
      const double v = uw(z) * std::pow(ud(z), p - 1.0);
      row.fine = std::max(row.fine, v);
      if (j % 2 == 0 && l % 2 == 0) row.coarse = std::max(row.coarse, v);
    }
    return row;
  });
  ApEstimate out;
  for (const Row& row : rows) {
    out.value = std::max(out.value, row.fine);
    out.coarse_value = std::max(out.coarse_value, row.coarse);
  }
  out.refinement_delta = out.value - out.coarse_value;
  out.dual_truncation = dropped;
  return out;
}

double weighted_circle_norm(const std::vector<double>& h, const CircleFunction& w, double p) {
  if (h.empty()) throw UsageError("no samples");
  double sum = 0.0;
  for (std::size_t l = 0; l < h.size(); ++l) {
    sum += std::pow(std::abs(h[l]), p) * w(2.0 * kPi * static_cast<double>(l) / static_cast<double>(h.size()));
  }
  return std::pow(sum / static_cast<double>(h.size()), 1.0 / p);
}

GstarInequality verify_gstar_inequality(const CircleFunction& f, const CircleFunction& w, double p,
                                        const QuadratureSpec& quad, const PoissonGrid& grid, Exec exec) {
  if (!(p >= 2.0)) throw DomainError("the g* inequality needs p >= 2");
  const GstarSpectrum spec = gstar_spectrum(f, quad);
  const int L = quad.angular_nodes;
  std::vector<double> gs(static_cast<std::size_t>(L)), fs(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    const double t = 2.0 * kPi * l / L;
    gs[static_cast<std::size_t>(l)] = std::sqrt(std::max(0.0, spec.gstar2(t)));
    fs[static_cast<std::size_t>(l)] = f(t);
  }
  GstarInequality out;
  out.lhs = weighted_circle_norm(gs, w, p);
  out.f_norm = weighted_circle_norm(fs, w, p);
  out.characteristic = poisson_ap_characteristic(w, p, grid, exec).value;
  out.K_p = extrapolation::kp_constant(p);
  out.rhs = out.K_p * std::pow(out.characteristic, extrapolation::ap_exponent(p)) * out.f_norm;
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

DominationProbe pointwise_domination_probe(const CircleFunction& f, double alpha, const std::vector<double>& thetas,
                                           const QuadratureSpec& quad, Exec exec) {
  const GstarSpectrum spec = gstar_spectrum(f, quad);
  struct Ratios {
    double area = 0.0;
    double g = 0.0;
  };
  const auto per = map_indices<Ratios>(exec, thetas.size(), [&](std::size_t i) {
    const double gs = std::sqrt(std::max(0.0, spec.gstar2(thetas[i])));
    if (!(gs > 0.0)) return Ratios{};
    return Ratios{lusin_area(f, thetas[i], alpha) / gs, lp_g(f, thetas[i]) / gs};
  });
  DominationProbe out;
  for (const auto& r : per) {
    out.max_area_ratio = std::max(out.max_area_ratio, r.area);
    out.max_g_ratio = std::max(out.max_g_ratio, r.g);
  }
  return out;
}

CircleFunction closed_form(const std::string& tag) {
  if (tag == "const" || tag == "unit") return CircleFunction::constant(1.0);
  if (tag == "cos") return CircleFunction({0.0, 0.5});
  if (tag == "cos3") return CircleFunction({0.0, 0.0, 0.0, 0.5});
  if (tag == "cos_half") return CircleFunction({1.0, 0.25});
  if (tag == "mixed") return CircleFunction({2.0, 0.5, cplx{0.0, -0.25}});
  if (tag == "random8") {
    std::vector<cplx> c(9);
    CounterRng rng(2024, 8, 0);
    c[0] = rng.normal();
    for (std::size_t k = 1; k < c.size(); ++k) c[k] = cplx{rng.normal(), rng.normal()} / static_cast<double>(k);
    return CircleFunction(std::move(c));
  }
  if (tag == "step") {
    // Odd sine series of a square wave, damped by 0.9^n.
    std::vector<cplx> c(16);
    for (int k = 1; k < 16; k += 2) c[static_cast<std::size_t>(k)] = cplx{0.0, -2.0 / (kPi * k)} * std::pow(0.9, k);
    return CircleFunction(std::move(c));
  }
  throw UsageError("unknown closed form: " + tag);
}

std::vector<CorpusEntry> builtin_corpus() {
  std::vector<CorpusEntry> out;
  for (const char* fname : {"const", "cos", "cos3", "random8", "step"}) {
    for (const char* wname : {"unit", "cos_half", "mixed"}) {
      out.push_back({fname, closed_form(fname), wname, closed_form(wname)});
    }
  }
  return out;
}

std::vector<CorpusEntry> parse_corpus(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("corpus is not valid JSON: ") + e.what());
  }
  auto read = [](const nlohmann::json& item) -> std::pair<std::string, CircleFunction> {
    if (!item.contains("name")) throw UsageError("corpus entry without a name");
    const std::string name = item.at("name").get<std::string>();
    if (item.contains("closed_form")) return {name, closed_form(item.at("closed_form").get<std::string>())};
    if (!item.contains("coefficients")) throw UsageError("corpus entry needs coefficients or closed_form");
    std::vector<cplx> c;
    for (const auto& pair : item.at("coefficients")) {
      if (!pair.is_array() || pair.size() != 2) throw UsageError("coefficients are [re, im] pairs");
      c.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return {name, CircleFunction(std::move(c))};
  };
  if (!doc.contains("functions") || !doc.contains("weights")) {
    throw UsageError("corpus needs \"functions\" and \"weights\" arrays");
  }
  std::vector<CorpusEntry> out;
  for (const auto& fi : doc.at("functions")) {
    const auto [fname, f] = read(fi);
    for (const auto& wi : doc.at("weights")) {
      const auto [wname, w] = read(wi);
      out.push_back({fname, f, wname, w});
    }
  }
  return out;
}

}  // namespace wsq::circle
