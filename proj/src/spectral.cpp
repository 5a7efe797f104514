#include "maser/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace maser {

namespace {

constexpr double kPi = std::numbers::pi;

// Integrand of the form K / ((x - c1)^2 + w1^2) / ((x - c2)^2 + w2^2), times x
// for the first moment, with c1 = 0 and c2 = delta.
struct TwoPeakIntegral {
  double w1;      // half width of the peak at 0
  double w2;      // half width of the peak at delta
  double delta;
  double tail_k;  // integrand ~ tail_k / x^4 for |x| -> infinity
  int moment;     // 0 or 1
};

// f(x, y) receives both peak offsets, x and y = x - delta. Each segment is
// integrated in the offset of its nearer peak so that the sharp factor sees an
// exact coordinate; recomputing x - delta from x would put rounding of order
// eps * |delta| into a peak of half width w and cap the attainable accuracy.
template <class F>
QuadratureResult integrate_two_peaks(F&& f, const TwoPeakIntegral& spec,
                                     const QuadratureOptions& opt) {
  using boost::math::quadrature::gauss_kronrod;

  const double d = spec.delta;
  const double lo_c = std::min(0.0, d);
  const double hi_c = std::max(0.0, d);
  const double window = opt.window_widths * 2.0 * std::max(spec.w1, spec.w2);
  const double a = lo_c - window;
  const double b = hi_c + window;

  // Breakpoints as (centre, offset) pairs, ordered by position.
  struct Cut {
    double centre;
    double offset;
    double x() const { return centre + offset; }
  };
  std::vector<Cut> cuts{{0.0, a}, {0.0, b}, {0.0, 0.0}, {d, 0.0}};
  for (auto [c, w] : {std::pair{0.0, spec.w1}, std::pair{d, spec.w2}}) {
    for (double s = w; s < window + (hi_c - lo_c); s *= 2.0) {
      cuts.push_back({c, -s});
      cuts.push_back({c, s});
    }
  }
  std::erase_if(cuts, [&](const Cut& c) { return c.x() < a || c.x() > b; });
  std::sort(cuts.begin(), cuts.end(),
            [](const Cut& l, const Cut& r) { return l.x() < r.x(); });
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](const Cut& l, const Cut& r) { return l.x() == r.x(); }),
             cuts.end());

  double value = 0.0, error = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x0 = cuts[i].x(), x1 = cuts[i + 1].x();
    const double mid = 0.5 * (x0 + x1);
    const bool near_delta = std::abs(mid - d) < std::abs(mid);
    double err = 0.0, seg_l1 = 0.0;
    if (near_delta) {
      const double t0 = cuts[i].centre == d ? cuts[i].offset : x0 - d;
      const double t1 = cuts[i + 1].centre == d ? cuts[i + 1].offset : x1 - d;
      value += gauss_kronrod<double, 31>::integrate(
          [&](double t) { return f(d + t, t); }, t0, t1, opt.max_depth,
          opt.rel_tol, &err, &seg_l1);
    } else {
      value += gauss_kronrod<double, 31>::integrate(
          [&](double x) { return f(x, x - d); }, x0, x1, opt.max_depth,
          opt.rel_tol, &err, &seg_l1);
    }
    error += err;
    l1 += seg_l1;
  }

  // Tails beyond [a, b] from the expansion x^-4 (1 + 2 delta / x + ...).
  const double A = -a, B = b, K = spec.tail_k;
  if (spec.moment == 0) {
    value += K * (1.0 / (3 * B * B * B) + d / (2 * B * B * B * B));
    value += K * (1.0 / (3 * A * A * A) - d / (2 * A * A * A * A));
  } else {
    value += K * (1.0 / (2 * B * B) + 2 * d / (3 * B * B * B));
    value -= K * (1.0 / (2 * A * A) - 2 * d / (3 * A * A * A));
  }

  if (!(error <= opt.accept_tol * l1) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "quadrature did not converge: error estimate " << error
       << " vs L1 norm " << l1;
    throw Error(ErrorCode::quadrature_failure, os.str());
  }
  return {value, error};
}

void require_valid(const LorentzianPair& p) {
  if (!(p.g_u > 0.0) || !(p.g_l > 0.0) || !std::isfinite(p.delta))
    throw Error(ErrorCode::invalid_argument,
                "Lorentzian half widths must be positive");
}

}  // namespace

LorentzianPair pair_from_params(const EngineParams& params) {
  const EngineParams& p = validate(params);
  return {0.5 * p.gamma_u * (1.0 + p.n_u), 0.5 * p.gamma_l * (1.0 + p.n_l),
          detuning(p)};
}

namespace {

// Normalized Lorentzian of full width fwhm centred at x = 0.
double lorentzian(double x, double fwhm) {
  return fwhm / (2.0 * kPi) / (x * x + 0.25 * fwhm * fwhm);
}

}  // namespace

double spectral_function(Bath bath, double omega, const EngineParams& p) {
  const double fwhm = coupling(p, bath) * (1.0 + occupation(p, bath));
  return lorentzian(omega - level_energy(p, bath), fwhm);
}

namespace {

// P at offsets x = w and y = w - delta.
double product_at(const LorentzianPair& p, double x, double y) {
  return (1.0 / (2.0 * kPi)) * (2.0 * p.g_u / (x * x + p.g_u * p.g_u)) *
         (2.0 * p.g_l / (y * y + p.g_l * p.g_l));
}

}  // namespace

double lorentzian_product(const LorentzianPair& p, double w) {
  return product_at(p, w, w - p.delta);
}

double lorentzian_overlap_closed(const LorentzianPair& p) {
  require_valid(p);
  const double s = p.g_u + p.g_l;
  return 2.0 * s / (p.delta * p.delta + s * s);
}

double lorentzian_first_moment_closed(const LorentzianPair& p) {
  require_valid(p);
  const double s = p.g_u + p.g_l;
  return 2.0 * p.g_u * p.delta / (p.delta * p.delta + s * s);
}

QuadratureResult lorentzian_overlap_quadrature(const LorentzianPair& p,
                                               const QuadratureOptions& opt) {
  require_valid(p);
  const TwoPeakIntegral spec{p.g_u, p.g_l, p.delta,
                             2.0 * p.g_u * p.g_l / kPi, 0};
  return integrate_two_peaks(
      [&](double x, double y) { return product_at(p, x, y); }, spec, opt);
}

QuadratureResult lorentzian_first_moment_quadrature(
    const LorentzianPair& p, const QuadratureOptions& opt) {
  require_valid(p);
  const TwoPeakIntegral spec{p.g_u, p.g_l, p.delta,
                             2.0 * p.g_u * p.g_l / kPi, 1};
  return integrate_two_peaks(
      [&](double x, double y) { return x * product_at(p, x, y); }, spec, opt);
}

namespace {

SpectralCheck make_check(double closed, double quad) {
  const double scale = std::max(std::abs(closed), std::abs(quad));
  return {closed, quad, scale == 0.0 ? 0.0 : std::abs(closed - quad) / scale};
}

}  // namespace

SpectralCheck check_overlap(const LorentzianPair& p,
                            const QuadratureOptions& opt) {
  return make_check(lorentzian_overlap_closed(p),
                    lorentzian_overlap_quadrature(p, opt).value);
}

SpectralCheck check_first_moment(const LorentzianPair& p,
                                 const QuadratureOptions& opt) {
  return make_check(lorentzian_first_moment_closed(p),
                    lorentzian_first_moment_quadrature(p, opt).value);
}

namespace {

// A_u(w) A_l(w - omega_d) and x A_u A_l in the local coordinate
// x = w - omega_u, where the lower-level peak sits at x = Delta. Working in x
// directly keeps narrow peaks free of the rounding in w - omega_u.
QuadratureResult physical_overlap(const EngineParams& p, int moment,
                                  const QuadratureOptions& opt) {
  const double fu = p.gamma_u * (1.0 + p.n_u);
  const double fl = p.gamma_l * (1.0 + p.n_l);
  const TwoPeakIntegral spec{0.5 * fu, 0.5 * fl, detuning(p),
                             fu * fl / (4.0 * kPi * kPi), moment};
  auto integrand = [&](double x, double y) {
    const double v = lorentzian(x, fu) * lorentzian(y, fl);
    return moment == 0 ? v : x * v;
  };
  return integrate_two_peaks(integrand, spec, opt);
}

}  // namespace

double spectral_overlap(const EngineParams& params,
                        const QuadratureOptions& opt) {
  return physical_overlap(validate(params), 0, opt).value;
}

double greens_rate(const EngineParams& params, double population_difference,
                   const QuadratureOptions& opt) {
  const EngineParams& p = validate(params);
  if (population_difference == 0.0) return 0.0;
  return 2.0 * kPi * p.epsilon * p.epsilon * population_difference *
         spectral_overlap(p, opt);
}

double mean_transition_energy_u(const EngineParams& params,
                                const QuadratureOptions& opt) {
  const EngineParams& p = validate(params);
  const double norm = physical_overlap(p, 0, opt).value;
  const double first = physical_overlap(p, 1, opt).value;
  return p.omega_u + first / norm;
}

}  // namespace maser
