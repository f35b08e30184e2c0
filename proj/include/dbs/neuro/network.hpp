#pragma once

// Basal ganglia-thalamic network state and its explicit-Euler integrator.
//
// Regions: STN, GPe, GPi, TH, each with the same number of single-compartment
// neurons. DBS current enters STN only; sensorimotor drive enters TH only.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dbs/error.hpp"
#include "dbs/neuro/params.hpp"

namespace dbs::neuro {

enum class Condition { Healthy, PD };

inline std::string to_string(Condition c) { return c == Condition::Healthy ? "healthy" : "pd"; }

inline Condition parse_condition(const std::string& s) {
  if (s == "healthy") return Condition::Healthy;
  if (s == "pd") return Condition::PD;
  throw Error(ErrorKind::ConfigError, "unknown condition '" + s + "'");
}

enum class Region : std::size_t { STN = 0, GPe = 1, GPi = 2, TH = 3 };
inline constexpr std::size_t kRegionCount = 4;

/// Per-neuron dynamic state. Gating variables n, h, r, c are dimensionless in
/// [0, 1]; TH uses h and r only, GP cells do not use c. `s` and `z` hold the
/// outgoing synaptic variable (and its derivative for alpha synapses).
struct NeuronState {
  double v = -62.0;
  double n = 0.0;
  double h = 0.0;
  double r = 0.0;
  double c = 0.0;
  double ca = 0.0;
  double s = 0.0;
  double z = 0.0;
  double i_app = 0.0;

  friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

struct NetworkState {
  Condition condition = Condition::Healthy;
  std::array<std::vector<NeuronState>, kRegionCount> regions;
  std::mt19937_64 rng;
  std::shared_ptr<const ModelParams> params;

  std::size_t neurons_per_region() const noexcept { return regions[0].size(); }
  std::vector<NeuronState>& region(Region r) { return regions[static_cast<std::size_t>(r)]; }
  const std::vector<NeuronState>& region(Region r) const {
    return regions[static_cast<std::size_t>(r)];
  }

  /// Compares dynamic state and the random stream, not the parameter pointer.
  friend bool operator==(const NetworkState& a, const NetworkState& b) {
    return a.condition == b.condition && a.regions == b.regions && a.rng == b.rng;
  }
};

/// Applied currents for a condition: PD scales the healthy values down.
inline RegionValues applied_currents(const ModelParams& p, Condition c) {
  if (c == Condition::Healthy) return p.i_app_healthy;
  return {p.i_app_healthy.stn * p.i_app_pd_scale.stn, p.i_app_healthy.gpe * p.i_app_pd_scale.gpe,
          p.i_app_healthy.gpi * p.i_app_pd_scale.gpi};
}

inline NetworkState init_network(Condition condition, std::size_t n_per_region, std::uint64_t seed,
                                 std::shared_ptr<const ModelParams> params) {
  if (n_per_region < 1) throw Error(ErrorKind::InvalidArgument, "need at least one neuron per region");
  if (!params) throw Error(ErrorKind::InvalidArgument, "null model parameters");
  const ModelParams& p = *params;

  NetworkState st;
  st.condition = condition;
  st.params = std::move(params);
  st.rng.seed(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (auto& reg : st.regions) {
    reg.resize(n_per_region);
    for (auto& nrn : reg) nrn.v = p.init_v_mean + p.init_v_sd * gauss(st.rng);
  }
  const RegionValues iapp = applied_currents(p, condition);
  const std::array<double, 3> base{iapp.stn, iapp.gpe, iapp.gpi};
  const std::array<double, 3> jitter{p.i_app_jitter_sd.stn, p.i_app_jitter_sd.gpe,
                                     p.i_app_jitter_sd.gpi};
  for (std::size_t r = 0; r < 3; ++r) {
    for (auto& nrn : st.regions[r]) nrn.i_app = base[r] + jitter[r] * gauss(st.rng);
  }

  for (auto& nrn : st.region(Region::STN)) {
    nrn.n = p.stn.n_inf(nrn.v);
    nrn.h = p.stn.h_inf(nrn.v);
    nrn.r = p.stn.r_inf(nrn.v);
    nrn.c = p.stn.c_inf(nrn.v);
    nrn.ca = p.init_ca;
  }
  for (Region r : {Region::GPe, Region::GPi}) {
    for (auto& nrn : st.region(r)) {
      nrn.n = p.gp.n_inf(nrn.v);
      nrn.h = p.gp.h_inf(nrn.v);
      nrn.r = p.gp.r_inf(nrn.v);
      nrn.ca = p.init_ca;
    }
  }
  for (auto& nrn : st.region(Region::TH)) {
    nrn.h = p.th.h_inf(nrn.v);
    nrn.r = p.th.r_inf(nrn.v);
  }
  return st;
}

inline NetworkState init_network(Condition condition, std::size_t n_per_region, std::uint64_t seed) {
  return init_network(condition, n_per_region, seed,
                      std::make_shared<const ModelParams>(default_model_params()));
}

namespace detail {

inline double clamp01(double x) noexcept { return std::clamp(x, 0.0, 1.0); }

/// Weighted sum of presynaptic s over the projection's ring offsets.
inline double presynaptic(const Projection& proj, const std::vector<NeuronState>& src, std::size_t i) {
  const auto n = static_cast<long>(src.size());
  double acc = 0.0;
  for (int off : proj.offsets) {
    long j = (static_cast<long>(i) + off) % n;
    if (j < 0) j += n;
    acc += src[static_cast<std::size_t>(j)].s;
  }
  return proj.weight * acc;
}

inline void alpha_synapse(NeuronState& nrn, const AlphaSynapse& syn, bool spiked, double dt) {
  const double u = spiked ? syn.g_peak / (syn.tau * std::exp(-1.0)) / dt : 0.0;
  const double s_old = nrn.s;
  nrn.s += dt * nrn.z;
  nrn.z += dt * (u - 2.0 / syn.tau * nrn.z - s_old / (syn.tau * syn.tau));
}

inline void guard(double v, const ModelParams& p, const char* region) {
  if (!std::isfinite(v) || v < p.guard_lo_mv || v > p.guard_hi_mv) {
    throw Error(ErrorKind::Divergence,
                std::string(region) + " membrane voltage " + std::to_string(v) + " mV out of bounds");
  }
}

}  // namespace detail

/// Membrane voltage derivative of an STN cell excluding synaptic input.
inline double stn_intrinsic_current(const StnParams& p, const NeuronState& x) {
  const double v = x.v;
  const double m = p.m_inf(v);
  const double a = p.a_inf(v);
  const double b = p.b_inf(x.r) - p.b_inf(0.0);
  const double il = p.g_l * (v - p.e_l);
  const double ik = p.g_k * std::pow(x.n, 4) * (v - p.e_k);
  const double ina = p.g_na * m * m * m * x.h * (v - p.e_na);
  const double it = p.g_t * a * a * a * b * b * (v - p.e_ca);
  const double ica = p.g_ca * x.c * x.c * (v - p.e_ca);
  const double iahp = p.g_ahp * (v - p.e_k) * x.ca / (x.ca + p.k1);
  return -(il + ik + ina + it + ica + iahp);
}

/// One explicit-Euler step of the whole network. `i_dbs` (uA/cm^2) is
/// injected into every STN cell, `i_smc` into every TH cell.
inline void step(NetworkState& st, double i_dbs, double i_smc, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  const ModelParams& p = *st.params;
  auto& stn = st.region(Region::STN);
  auto& gpe = st.region(Region::GPe);
  auto& gpi = st.region(Region::GPi);
  auto& th = st.region(Region::TH);
  const std::size_t n = stn.size();

  // Synaptic drive from the pre-step state.
  thread_local std::vector<double> gpe_stn, stn_gpe, gpe_gpe, stn_gpi, gpe_gpi, gpi_th;
  for (auto* buf : {&gpe_stn, &stn_gpe, &gpe_gpe, &stn_gpi, &gpe_gpi, &gpi_th}) buf->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gpe_stn[i] = detail::presynaptic(p.gpe_to_stn, gpe, i);
    stn_gpe[i] = detail::presynaptic(p.stn_to_gpe, stn, i);
    gpe_gpe[i] = detail::presynaptic(p.gpe_to_gpe, gpe, i);
    stn_gpi[i] = detail::presynaptic(p.stn_to_gpi, stn, i);
    gpe_gpi[i] = detail::presynaptic(p.gpe_to_gpi, gpe, i);
    gpi_th[i] = detail::presynaptic(p.gpi_to_th, gpi, i);
  }
  const double thr = p.synaptic_threshold_mv;

  for (std::size_t i = 0; i < n; ++i) {
    auto& x = stn[i];
    const StnParams& q = p.stn;
    const double v = x.v;
    const double it = [&] {
      const double a = q.a_inf(v);
      const double b = q.b_inf(x.r) - q.b_inf(0.0);
      return q.g_t * a * a * a * b * b * (v - q.e_ca);
    }();
    const double ica = q.g_ca * x.c * x.c * (v - q.e_ca);
    const double isyn = p.gpe_to_stn.g * (v - p.gpe_to_stn.e_rev) * gpe_stn[i];
    const double dv =
        (stn_intrinsic_current(q, x) - isyn + x.i_app + p.dbs_coupling * i_dbs) / p.cm;
    const double v_new = v + dt * dv;
    x.n = detail::clamp01(x.n + dt * q.phi_n * (q.n_inf(v) - x.n) / q.tau_n(v));
    x.h = detail::clamp01(x.h + dt * q.phi_h * (q.h_inf(v) - x.h) / q.tau_h(v));
    x.r = detail::clamp01(x.r + dt * q.phi_r * (q.r_inf(v) - x.r) / q.tau_r(v));
    x.c = detail::clamp01(x.c + dt * q.phi_c * (q.c_inf(v) - x.c) / q.tau_c(v));
    x.ca = std::max(0.0, x.ca + dt * q.eps_ca * (-ica - it - q.k_ca * x.ca));
    detail::alpha_synapse(x, q.synapse, v < thr && v_new >= thr, dt);
    x.v = v_new;
    detail::guard(x.v, p, "STN");
  }

  const GpParams& g = p.gp;
  auto gp_update = [&](NeuronState& x, double isyn, bool is_gpe) {
    const double v = x.v;
    const double m = g.m_inf(v);
    const double a = g.a_inf(v);
    const double sinf = g.s_inf(v);
    const double il = g.g_l * (v - g.e_l);
    const double ik = g.g_k * std::pow(x.n, 4) * (v - g.e_k);
    const double ina = g.g_na * m * m * m * x.h * (v - g.e_na);
    const double it = g.g_t * a * a * a * x.r * (v - g.e_ca);
    const double ica = g.g_ca * sinf * sinf * (v - g.e_ca);
    const double iahp = g.g_ahp * (v - g.e_k) * x.ca / (x.ca + g.k1);
    const double dv = (-(il + ik + ina + it + ica + iahp) - isyn + x.i_app) / p.cm;
    const double v_new = v + dt * dv;
    x.n = detail::clamp01(x.n + dt * g.phi_n * (g.n_inf(v) - x.n) / g.tau_n(v));
    x.h = detail::clamp01(x.h + dt * g.phi_h * (g.h_inf(v) - x.h) / g.tau_h(v));
    x.r = detail::clamp01(x.r + dt * g.phi_r * (g.r_inf(v) - x.r) / g.tau_r);
    x.ca = std::max(0.0, x.ca + dt * g.eps_ca * (-ica - it - g.k_ca * x.ca));
    if (is_gpe) {
      x.s = detail::clamp01(x.s + dt * (g.gpe_syn_alpha * (1.0 - x.s) * g.gpe_syn_h_inf(v) -
                                        g.gpe_syn_beta * x.s));
    } else {
      detail::alpha_synapse(x, g.gpi_synapse, v < thr && v_new >= thr, dt);
    }
    x.v = v_new;
  };

  for (std::size_t i = 0; i < n; ++i) {
    auto& x = gpe[i];
    const double isyn = p.stn_to_gpe.g * (x.v - p.stn_to_gpe.e_rev) * stn_gpe[i] +
                        p.gpe_to_gpe.g * (x.v - p.gpe_to_gpe.e_rev) * gpe_gpe[i];
    gp_update(x, isyn, true);
    detail::guard(x.v, p, "GPe");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& x = gpi[i];
    const double isyn = p.stn_to_gpi.g * (x.v - p.stn_to_gpi.e_rev) * stn_gpi[i] +
                        p.gpe_to_gpi.g * (x.v - p.gpe_to_gpi.e_rev) * gpe_gpi[i];
    gp_update(x, isyn, false);
    detail::guard(x.v, p, "GPi");
  }

  const ThParams& t = p.th;
  for (std::size_t i = 0; i < n; ++i) {
    auto& x = th[i];
    const double v = x.v;
    const double m = t.m_inf(v);
    const double pp = t.p_inf(v);
    const double k = 0.75 * (1.0 - x.h);
    const double il = t.g_l * (v - t.e_l);
    const double ina = t.g_na * m * m * m * x.h * (v - t.e_na);
    const double ik = t.g_k * k * k * k * k * (v - t.e_k);
    const double it = t.g_t * pp * pp * x.r * (v - t.e_t);
    const double isyn = p.gpi_to_th.g * (v - p.gpi_to_th.e_rev) * gpi_th[i];
    const double dv = (-(il + ina + ik + it) - isyn + i_smc) / p.cm;
    const double ah = 0.128 * std::exp(-(v + 46.0) / 18.0);
    const double bh = 4.0 / (1.0 + std::exp(-(v + 23.0) / 5.0));
    const double tau_h = 1.0 / (ah + bh);
    const double tau_r = t.tau_r_scale * (28.0 + std::exp(-(v + 25.0) / 10.5));
    x.h = detail::clamp01(x.h + dt * (t.h_inf(v) - x.h) / tau_h);
    x.r = detail::clamp01(x.r + dt * (t.r_inf(v) - x.r) / tau_r);
    x.v = v + dt * dv;
    detail::guard(x.v, p, "TH");
  }
}

}  // namespace dbs::neuro
