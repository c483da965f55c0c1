#include "vrrte/solver.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

namespace vrrte {

ColumnModel::ColumnModel(OpticalMedium medium, ColumnGrid grid, FrequencyGrid frequencies)
    : medium_(std::move(medium)), grid_(std::move(grid)), freq_(std::move(frequencies)) {
  const auto N = static_cast<Eigen::Index>(grid_.size());
  const auto F = static_cast<Eigen::Index>(freq_.size());
  kappa_a_.resize(N, F);
  kappa_s_.resize(N, F);
  kappa_bar_.resize(freq_.size());
  for (Eigen::Index q = 0; q < F; ++q) {
    const double nu = freq_.nodes()[static_cast<std::size_t>(q)];
    kappa_bar_[static_cast<std::size_t>(q)] = medium_.kappa_bar(nu);
    for (Eigen::Index i = 0; i < N; ++i) {
      const auto p = medium_.properties(grid_.property_z(static_cast<std::size_t>(i)), nu);
      kappa_a_(i, q) = p.kappa_a;
      kappa_s_(i, q) = p.kappa_s;
    }
  }
}

Eigen::MatrixXd ColumnModel::planck_field(const Eigen::VectorXd& T) const {
  Eigen::MatrixXd B(T.size(), static_cast<Eigen::Index>(freq_.size()));
  for (Eigen::Index q = 0; q < B.cols(); ++q)
    for (Eigen::Index i = 0; i < B.rows(); ++i) B(i, q) = planck(freq_.nodes()[static_cast<std::size_t>(q)], T(i));
  return B;
}

MomentField MomentField::zeros(std::size_t nodes, std::size_t bands) {
  const auto N = static_cast<Eigen::Index>(nodes), F = static_cast<Eigen::Index>(bands);
  return {Eigen::MatrixXd::Zero(N, F), Eigen::MatrixXd::Zero(N, F), Eigen::MatrixXd::Zero(N, F),
          Eigen::MatrixXd::Zero(N, F)};
}

MomentField MomentField::isotropic(const ColumnModel& model, const Eigen::VectorXd& T) {
  MomentField m = zeros(model.nodes(), model.bands());
  m.J0 = model.planck_field(T);
  m.J2 = m.J0 / 3.0;
  return m;
}

SourceField build_sources(const MomentField& M, const TemperatureField& T, const ColumnModel& model, Basis basis,
                          bool literal_q_source) {
  const Eigen::ArrayXXd ka = model.kappa_a().array();
  const Eigen::ArrayXXd ks = model.kappa_s().array();
  const Eigen::ArrayXXd B = model.planck_field(T).array();
  const double beta = model.medium().beta();
  SourceField S;
  S.basis = basis;
  S.H = ((9.0 * beta / 8.0) * ks * (M.J2 - M.J0 / 3.0 - M.K0 + M.K2).array()).matrix();
  if (basis == Basis::IQ) {
    const Eigen::ArrayXXd H = S.H.array();
    S.s0 = (ka * B + ks * M.J0.array() - H / 3.0).matrix();
    S.s2 = S.H;
    if (literal_q_source) {
      S.s0p = S.H / 3.0;
      S.s2p = -S.H;
    } else {
      S.s0p = -S.H;
      S.s2p = S.H;
    }
    return S;
  }
  const Eigen::ArrayXXd Jl0 = 0.5 * (M.J0 + M.K0).array(), Jr0 = 0.5 * (M.J0 - M.K0).array();
  const Eigen::ArrayXXd Jl2 = 0.5 * (M.J2 + M.K2).array();
  const Eigen::ArrayXXd iso = 0.5 * (1.0 - beta) * ks * (Jl0 + Jr0) + 0.5 * ka * B;
  S.s0 = (1.5 * beta * ks * (Jl0 - Jl2) + iso).matrix();
  S.s2 = (0.75 * beta * ks * (3.0 * Jl2 - 2.0 * Jl0 + Jr0)).matrix();
  S.s0p = (0.75 * beta * ks * (Jl2 + Jr0) + iso).matrix();
  S.s2p = Eigen::MatrixXd::Zero(S.s0.rows(), S.s0.cols());
  return S;
}

MomentField moment_update(const SourceField& S, KernelBank& kernels, const ColumnModel& model,
                          const BoundaryData& boundary) {
  if (kernels.settings().basis != S.basis) throw std::invalid_argument("moment_update: kernel and source basis differ");
  if (kernels.grid().size() != model.nodes() || static_cast<std::size_t>(S.s0.rows()) != model.nodes() ||
      static_cast<std::size_t>(S.s0.cols()) != model.bands())
    throw std::invalid_argument("moment_update: kernel/grid mismatch");
  MomentField M = MomentField::zeros(model.nodes(), model.bands());
  Eigen::MatrixX4d src(static_cast<Eigen::Index>(model.nodes()), 4);
  for (std::size_t q = 0; q < model.bands(); ++q) {
    const auto c = static_cast<Eigen::Index>(q);
    const double nu = model.frequencies().nodes()[q];
    src.col(0) = S.s0.col(c);
    src.col(1) = S.s0p.col(c);
    src.col(2) = S.s2.col(c);
    src.col(3) = S.s2p.col(c);
    const Eigen::MatrixX4d m = kernels.moments(model.kappa_bar(q), src, boundary.bottom(nu), boundary.top(nu));
    if (S.basis == Basis::IQ) {
      M.J0.col(c) = m.col(0);
      M.K0.col(c) = m.col(1);
      M.J2.col(c) = m.col(2);
      M.K2.col(c) = m.col(3);
    } else {
      M.J0.col(c) = m.col(0) + m.col(1);
      M.K0.col(c) = m.col(0) - m.col(1);
      M.J2.col(c) = m.col(2) + m.col(3);
      M.K2.col(c) = m.col(2) - m.col(3);
    }
  }
  return M;
}

TemperatureField temperature_update(const MomentField& M, const ColumnModel& model, const InversionOptions& options) {
  const auto& freq = model.frequencies();
  TemperatureField T(static_cast<Eigen::Index>(model.nodes()));
  std::vector<double> ka(model.bands());
  for (std::size_t i = 0; i < model.nodes(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    double target = 0.0;
    for (std::size_t q = 0; q < model.bands(); ++q) {
      ka[q] = model.kappa_a()(r, static_cast<Eigen::Index>(q));
      target += freq.weights()[q] * ka[q] * M.J0(r, static_cast<Eigen::Index>(q));
    }
    T(r) = invert_planck_mean(std::max(target, 0.0), ka, freq, options).value();
  }
  return T;
}

double equilibrium_residual(const MomentField& M, const TemperatureField& T, const ColumnModel& model) {
  const Eigen::MatrixXd B = model.planck_field(T);
  const auto& w = model.frequencies().weights();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    double emit = 0.0, net = 0.0;
    for (Eigen::Index q = 0; q < B.cols(); ++q) {
      const double wk = w[static_cast<std::size_t>(q)] * model.kappa_a()(i, q);
      emit += wk * B(i, q);
      net += wk * (B(i, q) - M.J0(i, q));
    }
    if (emit > 0.0) worst = std::max(worst, std::abs(net) / emit);
    else if (net != 0.0) worst = std::max(worst, 1.0);
  }
  return worst;
}

bool IterationResult::monotone() const {
  return std::all_of(records.begin(), records.end(), [](const IterationRecord& r) { return r.monotone; });
}

bool IterationResult::moments_bounded() const {
  return std::all_of(records.begin(), records.end(), [](const IterationRecord& r) { return r.moments_bounded; });
}

namespace {

bool bounded(const MomentField& M, double slack) {
  const Eigen::ArrayXXd J0 = M.J0.array(), J2 = M.J2.array(), K0 = M.K0.array();
  const Eigen::ArrayXXd tol = slack * J0.abs() + 1e-300;
  return (J0 >= -tol).all() && (J2 <= J0 + tol).all() && (K0.abs() <= J0 + tol).all();
}

// Node-wise increase (sign = +1) or decrease (sign = -1) within a relative slack.
bool ordered(const Eigen::ArrayXXd& prev, const Eigen::ArrayXXd& next, double sign, double slack) {
  return (sign * (next - prev) >= -slack * prev.abs().max(next.abs())).all();
}

}  // namespace

IterationResult iterate_to_convergence(const ColumnModel& model, KernelBank& kernels, const BoundaryData& boundary,
                                       IterationMode mode, const SolverOptions& options) {
  if (!(options.tolerance > 0.0) || options.max_iterations < 1)
    throw std::invalid_argument("iterate_to_convergence: need a positive tolerance and iteration limit");
  kernels.prepare(model.kappa_bars());
  const Basis basis = kernels.settings().basis;
  const auto N = static_cast<Eigen::Index>(model.nodes());

  IterationResult res;
  res.mode = mode;
  res.probe_node = model.grid().nearest(options.probe_z);
  if (mode == IterationMode::Increasing) {
    res.T = TemperatureField::Zero(N);
    res.moments = MomentField::zeros(model.nodes(), model.bands());
  } else {
    res.T = TemperatureField::Constant(N, options.hot_start);
    res.moments = MomentField::isotropic(model, res.T);
  }
  res.T_history.push_back(res.T);
  const double sign = mode == IterationMode::Increasing ? 1.0 : -1.0;

  for (int n = 1; n <= options.max_iterations; ++n) {
    const auto S = build_sources(res.moments, res.T, model, basis, options.literal_q_source);
    MomentField next = moment_update(S, kernels, model, boundary);
    TemperatureField Tn = temperature_update(next, model, options.inversion);

    IterationRecord rec;
    rec.iteration = n;
    rec.max_dT = (Tn - res.T).cwiseAbs().maxCoeff();
    rec.probe_T = Tn(static_cast<Eigen::Index>(res.probe_node));
    rec.monotone = ordered(res.T.array(), Tn.array(), sign, options.monotone_slack) &&
                   (n == 1 || ordered(res.moments.J0.array(), next.J0.array(), sign, options.monotone_slack));
    rec.moments_bounded = bounded(next, 1e-12);
    if (!rec.monotone) spdlog::debug("iteration {}: iterate is not monotone", n);

    res.records.push_back(rec);
    res.moments = std::move(next);
    res.T = std::move(Tn);
    res.T_history.push_back(res.T);
    res.iterations = n;
    if (rec.max_dT < options.tolerance) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged)
    spdlog::warn("no convergence after {} iterations (last change {:.3e})", res.iterations, res.records.back().max_dT);

  const auto S = build_sources(res.moments, res.T, model, basis, options.literal_q_source);
  res.residual = equilibrium_residual(moment_update(S, kernels, model, boundary), res.T, model);
  return res;
}

}  // namespace vrrte
