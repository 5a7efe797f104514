#include "maser/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace maser {

namespace {

const cplx I(0.0, 1.0);

// D[s] rho = s rho s^+ - 1/2 {s^+ s, rho}
Matrix3c lindblad_term(const Matrix3c& s, const Matrix3c& rho) {
  const Matrix3c sds = s.adjoint() * s;
  return s * rho * s.adjoint() - 0.5 * (sds * rho + rho * sds);
}

Matrix9c kron(const Matrix3c& a, const Matrix3c& b) {
  Matrix9c k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return k;
}

Level excited(Bath b) { return b == Bath::u ? Level::u : Level::l; }

}  // namespace

Matrix3c rotating_hamiltonian(const EngineParams& p) {
  Matrix3c h = Matrix3c::Zero();
  h(u, u) = -detuning(p);
  h(u, l) = p.epsilon;
  h(l, u) = p.epsilon;
  return h;
}

Matrix3c dissipator(const Matrix3c& rho, Bath bath, const EngineParams& p) {
  const Level a = excited(bath);
  const double gamma = coupling(p, bath);
  const double n = occupation(p, bath);
  return gamma * n * lindblad_term(sigma(a, g), rho) +
         gamma * (n + 1.0) * lindblad_term(sigma(g, a), rho);
}

Matrix3c master_rhs(const Matrix3c& rho, const EngineParams& p) {
  const Matrix3c h = rotating_hamiltonian(p);
  return -I * (h * rho - rho * h) + dissipator(rho, Bath::u, p) +
         dissipator(rho, Bath::l, p);
}

Vector9c vectorize(const Matrix3c& rho) {
  Vector9c v;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) v(i + 3 * j) = rho(i, j);
  return v;
}

Matrix3c unvectorize(const Vector9c& v) {
  Matrix3c rho;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) rho(i, j) = v(i + 3 * j);
  return rho;
}

Liouvillian build_liouvillian(const EngineParams& p) {
  const Matrix3c id = Matrix3c::Identity();
  const Matrix3c h = rotating_hamiltonian(p);

  Matrix9c L = -I * (kron(id, h) - kron(h.transpose(), id));

  auto add_jump = [&](const Matrix3c& s, double rate) {
    if (rate == 0.0) return;
    const Matrix3c sds = s.adjoint() * s;
    L += rate * (kron(s.conjugate(), s) - 0.5 * kron(id, sds) -
                 0.5 * kron(sds.transpose(), id));
  };
  add_jump(sigma(u, g), p.gamma_u * p.n_u);
  add_jump(sigma(g, u), p.gamma_u * (p.n_u + 1.0));
  add_jump(sigma(l, g), p.gamma_l * p.n_l);
  add_jump(sigma(g, l), p.gamma_l * (p.n_l + 1.0));
  return {L};
}

double spectral_gap(const EngineParams& p) {
  const Liouvillian L = build_liouvillian(p);
  Eigen::ComplexEigenSolver<Matrix9c> es(L.matrix, false);
  std::array<double, 9> re{};
  for (int k = 0; k < 9; ++k) re[k] = std::abs(es.eigenvalues()(k).real());
  std::sort(re.begin(), re.end());
  return re[1];
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants (Hairer & Wanner's DOPRI5 defaults).
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;   // largest shrink: h / 5
constexpr double kMaxFactor = 10.0;  // largest growth: 10 h

double error_norm(const Matrix3c& err, const Matrix3c& y0, const Matrix3c& y1,
                  const StepControl& c) {
  double sum = 0.0;
  for (int k = 0; k < 9; ++k) {
    const double parts[2][3] = {
        {err(k).real(), y0(k).real(), y1(k).real()},
        {err(k).imag(), y0(k).imag(), y1(k).imag()}};
    for (const auto& p : parts) {
      const double sk =
          c.abs_tol + c.rel_tol * std::max(std::abs(p[1]), std::abs(p[2]));
      sum += (p[0] / sk) * (p[0] / sk);
    }
  }
  return std::sqrt(sum / 18.0);
}

}  // namespace

Trajectory evolve(const DensityMatrix3& rho0, const EngineParams& params,
                  double t_final, const StepControl& control) {
  validate(params);
  if (!(t_final > 0.0))
    throw Error(ErrorCode::invalid_argument, "t_final must be positive");
  const PhysicalityTolerances phys{control.physicality_tol,
                                   control.physicality_tol,
                                   control.physicality_tol};
  if (!assert_physical(rho0, phys).ok())
    throw Error(ErrorCode::non_physical_state, "initial state is not physical");

  auto f = [&](const Matrix3c& r) { return master_rhs(r, params); };

  Trajectory traj;
  traj.points.push_back({0.0, rho0});

  double t = 0.0;
  Matrix3c y = rho0.matrix();
  Matrix3c k1 = f(y);
  double h = std::min({control.initial_step, control.max_step, t_final});
  double err_old = 1e-4;
  int quiet_steps = 0;
  std::size_t steps = 0;

  while (t < t_final) {
    if (++steps > control.max_steps)
      throw Error(ErrorCode::step_underflow, "maximum number of steps exceeded");
    bool last = false;
    if (t + h >= t_final) {
      h = t_final - t;
      last = true;
    }
    if (h < control.min_step && !last) {
      std::ostringstream os;
      os << "step size underflow at t=" << t << " (h=" << h << ")";
      throw Error(ErrorCode::step_underflow, os.str());
    }

    const Matrix3c k2 = f(y + h * a21 * k1);
    const Matrix3c k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Matrix3c k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix3c k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix3c k6 =
        f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Matrix3c y1 =
        y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Matrix3c k7 = f(y1);
    const Matrix3c e =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err = error_norm(e, y, y1, control);
    const double fac11 = std::pow(std::max(err, 1e-300), kExpo);

    if (err <= 1.0) {
      double fac = fac11 / std::pow(err_old, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxFactor, 1.0 / kMinFactor);
      err_old = std::max(err, 1e-4);

      t = last ? t_final : t + h;
      y = y1;
      k1 = k7;

      DensityMatrix3 rho(y);
      const auto rep = assert_physical(rho, phys);
      if (!rep.ok()) {
        std::ostringstream os;
        os << "integrator produced a non-physical state at t=" << t
           << " (trace residual " << rep.trace_residual << ", min eigenvalue "
           << rep.min_eigenvalue << ")";
        throw Error(ErrorCode::non_physical_state, os.str());
      }
      traj.points.push_back({t, rho});

      if (control.stop_at_steady_state) {
        quiet_steps = max_abs(k1) < control.steady_tol ? quiet_steps + 1 : 0;
        if (quiet_steps >= 3) {
          traj.stopped_early = t < t_final;
          break;
        }
      }
      h = std::min(h / fac, control.max_step);
    } else {
      ++traj.rejected_steps;
      h /= std::min(1.0 / kMinFactor, fac11 / kSafety);
    }
  }
  return traj;
}

}  // namespace maser
