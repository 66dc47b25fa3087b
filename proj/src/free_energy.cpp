#include "qbat/free_energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qbat/errors.hpp"

namespace qbat {
namespace {

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got " +
                         std::to_string(got));
  }
}

// Real part of z after checking the imaginary part is rounding noise relative to `scale`.
double real_part(Complex z, double scale, double tol, const char* what) {
  if (std::abs(z.imag()) > tol * std::max(1.0, scale)) {
    throw ConsistencyError(std::string(what) + ": imaginary residual " + std::to_string(z.imag()), z.real(),
                           z.imag());
  }
  return z.real();
}

}  // namespace

BatteryContext::BatteryContext(double beta, LindbladModel model, double rank_threshold)
    : beta_(beta), model_(std::move(model)), rank_threshold_(rank_threshold) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ParameterError("beta must be positive and finite");
  if (!(rank_threshold_ > 0.0)) throw ParameterError("rank threshold must be positive");
}

FreeEnergyDecomposition decompose_free_energy(const HermitianMatrix& f_op, const DensityMatrix& rho,
                                              const ToleranceConfig& tol) {
  require_dim(f_op.dim(), rho.dim(), "decompose_free_energy");
  const double mean = trace_product(f_op, rho).real();
  ComplexMatrix shifted = f_op.matrix();
  for (std::size_t i = 0; i < shifted.dim(); ++i) shifted(i, i) -= mean;
  HermitianMatrix delta_f(shifted);
  Spectrum s = hermitian_eig(delta_f, tol);
  return FreeEnergyDecomposition{f_op, std::move(delta_f), mean, std::move(s.eigenvalues),
                                 std::move(s.eigenvectors)};
}

double mean_free_energy(const DensityMatrix& rho, const BatteryContext& ctx) {
  require_dim(ctx.model().dim(), rho.dim(), "mean_free_energy");
  const double energy = trace_product(rho, ctx.model().hamiltonian()).real();
  return energy - von_neumann_entropy(rho) / ctx.beta();
}

FreeEnergyDecomposition free_energy_operator(const DensityMatrix& rho, const BatteryContext& ctx,
                                             const ToleranceConfig& tol) {
  require_dim(ctx.model().dim(), rho.dim(), "free_energy_operator");
  const double smallest = rho.min_eigenvalue();
  if (!(smallest > ctx.rank_threshold())) {
    throw RankDeficientError("free energy operator needs a full-rank state; smallest eigenvalue " +
                                 std::to_string(smallest),
                             smallest);
  }
  const HermitianMatrix log_rho = matrix_function(rho.spectrum(), [](double x) { return std::log(x); });
  ComplexMatrix f = ctx.model().hamiltonian().matrix();
  f += Complex(1.0 / ctx.beta()) * log_rho.matrix();

  FreeEnergyDecomposition decomp = decompose_free_energy(HermitianMatrix(f), rho, tol);
  const double entropy_form = mean_free_energy(rho, ctx);
  if (std::abs(decomp.mean - entropy_form) > tol.mean_consistency * std::max(1.0, std::abs(decomp.mean))) {
    throw ConsistencyError("tr(F rho) and tr(rho H) - S/beta disagree", decomp.mean, entropy_form);
  }
  return decomp;
}

double power_analytic(const DensityMatrix& rho, const BatteryContext& ctx, const ToleranceConfig& tol) {
  const FreeEnergyDecomposition decomp = free_energy_operator(rho, ctx, tol);
  const HermitianMatrix rate = liouvillian(ctx.model(), rho);
  return trace_product(rate, decomp.f_op).real();
}

double power_fd(const Trajectory& traj, const BatteryContext& ctx, std::size_t index) {
  if (index < 1 || index + 1 >= traj.size()) {
    throw ParameterError("power_fd: index " + std::to_string(index) + " needs neighbours on both sides");
  }
  const double ahead = mean_free_energy(traj.states[index + 1], ctx);
  const double behind = mean_free_energy(traj.states[index - 1], ctx);
  return (ahead - behind) / (traj.times[index + 1] - traj.times[index - 1]);
}

double theta_operator_form(const FreeEnergyDecomposition& decomp, const DensityMatrix& rho, const ComplexMatrix& l,
                           const ToleranceConfig& tol) {
  require_dim(decomp.delta_f.dim(), l.dim(), "theta_operator_form");
  require_dim(decomp.delta_f.dim(), rho.dim(), "theta_operator_form");
  const HermitianMatrix fluct = abs_sq(commutator(decomp.delta_f, l));
  const Complex value = trace_product(rho, fluct);
  return real_part(value, rho.matrix().frobenius_norm() * fluct.matrix().frobenius_norm(), tol.imaginary_residual,
                   "theta_operator_form");
}

double theta_index_form(std::span<const double> w, const ComplexMatrix& rho_components,
                        const ComplexMatrix& l_components, const ToleranceConfig& tol) {
  const std::size_t d = w.size();
  require_dim(d, rho_components.dim(), "theta_index_form");
  require_dim(d, l_components.dim(), "theta_index_form");

  Complex sum = 0.0;
  double magnitude = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l) {
        const double weight = w[i] * w[i] - w[i] * w[l] - w[k] * w[i] + w[l] * w[k];
        const Complex term =
            rho_components(l, k) * l_components(k, i) * std::conj(l_components(l, i)) * weight;
        sum += term;
        magnitude += std::abs(term);
      }
  return real_part(sum, magnitude, tol.imaginary_residual, "theta_index_form");
}

double theta_eigenstate(std::size_t k0, std::span<const double> w, const ComplexMatrix& l_components) {
  require_dim(w.size(), l_components.dim(), "theta_eigenstate");
  if (k0 >= w.size()) throw ParameterError("theta_eigenstate: k0 out of range");
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double gap = w[i] - w[k0];
    sum += std::norm(l_components(k0, i)) * gap * gap;
  }
  return sum;
}

double theta_eigenstate_transposed(std::size_t k0, std::span<const double> w, const ComplexMatrix& l_components) {
  return theta_eigenstate(k0, w, l_components.adjoint());
}

std::vector<ThetaEntry> theta_report(const FreeEnergyDecomposition& decomp, const DensityMatrix& rho,
                                     const LindbladModel& model, const ToleranceConfig& tol) {
  const ComplexMatrix rho_components = to_basis(decomp.basis, rho);
  std::vector<ThetaEntry> out;
  out.reserve(model.channels().size());
  for (const auto& ch : model.channels()) {
    const double op = theta_operator_form(decomp, rho, ch.op, tol);
    const double idx = theta_index_form(decomp.w, rho_components, to_basis(decomp.basis, ch.op), tol);
    const double discrepancy = idx - op;
    if (std::abs(discrepancy) > tol.theta_consistency * std::max(1.0, std::abs(op))) {
      throw ConsistencyError("theta operator and index forms disagree", op, idx);
    }
    out.push_back({op, idx, discrepancy});
  }
  return out;
}

EigenstateFrame eigenstate_frame(const LindbladModel& model, const ToleranceConfig& tol) {
  EigenstateFrame frame{hermitian_eig(model.hamiltonian(), tol), {}};
  frame.l_components.reserve(model.channels().size());
  for (const auto& ch : model.channels())
    frame.l_components.push_back(to_basis(frame.h_spectrum.eigenvectors, ch.op));
  return frame;
}

EigenstatePower eigenstate_power_forms(std::size_t k0, const LindbladModel& model, const EigenstateFrame& frame) {
  const auto& w = frame.h_spectrum.eigenvalues;
  if (k0 >= w.size()) throw ParameterError("k0 " + std::to_string(k0) + " out of range");

  const auto v = frame.h_spectrum.eigenvector(k0);
  const DensityMatrix eigenstate = DensityMatrix::pure(v);

  EigenstatePower p{0.0, 0.0};
  for (std::size_t j = 0; j < model.channels().size(); ++j) {
    const auto& ch = model.channels()[j];
    p.trace_form += ch.rate * trace_product(dissipator(ch.op, eigenstate), model.hamiltonian()).real();
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) sum += std::norm(frame.l_components[j](i, k0)) * (w[i] - w[k0]);
    p.index_form += ch.rate * sum;
  }
  return p;
}

double power_eigenstate(std::size_t k0, const BatteryContext& ctx, const ToleranceConfig& tol) {
  const EigenstateFrame frame = eigenstate_frame(ctx.model(), tol);
  const EigenstatePower p = eigenstate_power_forms(k0, ctx.model(), frame);
  if (std::abs(p.trace_form - p.index_form) > tol.power_consistency * std::max(1.0, std::abs(p.index_form))) {
    throw ConsistencyError("eigenstate power trace and index forms disagree", p.trace_form, p.index_form);
  }
  return p.index_form;
}

VanishingCondition vanishing_condition(const LindbladModel& model, const EigenstateFrame& frame, std::size_t k0,
                                       const ToleranceConfig& tol) {
  const auto& w = frame.h_spectrum.eigenvalues;
  if (k0 >= w.size()) throw ParameterError("k0 " + std::to_string(k0) + " out of range");
  const std::size_t d = w.size();
  const ComplexMatrix& h = model.hamiltonian();
  const double h_scale = std::max(1.0, h.max_abs());

  VanishingCondition out{};
  const auto v = frame.h_spectrum.eigenvector(k0);
  out.hamiltonian_is_projector =
      max_abs_diff(h, Complex(w[k0]) * ComplexMatrix::outer(v)) <= tol.eigenvector_residual * h_scale;

  out.channels_act_trivially = true;
  for (std::size_t j = 0; j < model.channels().size(); ++j) {
    const ComplexMatrix& lc = frame.l_components[j];
    const double l_scale = std::max(1.0, lc.max_abs());
    bool trivial = true;
    for (std::size_t k = 0; k < d && trivial; ++k) {
      if (std::abs(w[k]) <= tol.eigenvector_residual * h_scale) continue;
      for (std::size_t i = 0; i < d; ++i) {
        if (i != k && std::abs(lc(i, k)) > tol.eigenvector_residual * l_scale) {
          trivial = false;
          break;
        }
      }
    }
    out.channel_trivial.push_back(trivial);
    out.channels_act_trivially = out.channels_act_trivially && trivial;
    out.theta_values.push_back(theta_eigenstate(k0, w, lc));
  }
  out.holds = out.hamiltonian_is_projector || out.channels_act_trivially;

  std::ostringstream why;
  if (out.hamiltonian_is_projector) {
    why << "H equals w_k0 |k0><k0|";
  } else if (out.channels_act_trivially) {
    why << "every jump operator acts as a scalar on the H eigenvectors with nonzero energy";
  } else {
    why << "H is not w_k0 |k0><k0| and channel(s)";
    for (std::size_t j = 0; j < out.channel_trivial.size(); ++j)
      if (!out.channel_trivial[j]) why << ' ' << j;
    why << " move population out of a nonzero-energy eigenvector";
  }
  out.explanation = why.str();
  return out;
}

VanishingCondition vanishing_condition(const BatteryContext& ctx, std::size_t k0, const ToleranceConfig& tol) {
  return vanishing_condition(ctx.model(), eigenstate_frame(ctx.model(), tol), k0, tol);
}

}  // namespace qbat
