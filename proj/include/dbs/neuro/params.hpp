#pragma once

// Parameter tables for the basal ganglia-thalamic network, loaded from
// data/bgt_params.json (schema "bgt-params/1", documented in docs/bgt_params.md).

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dbs/error.hpp"

namespace dbs::neuro {

/// Boltzmann steady state 1 / (1 + exp(-(v - theta) / sigma)).
struct Sigmoid {
  double theta = 0.0;
  double sigma = 1.0;
  double operator()(double v) const noexcept { return 1.0 / (1.0 + std::exp(-(v - theta) / sigma)); }
};

/// tau0 + tau1 / (1 + exp(-(v - theta) / sigma)).
struct TauCurve {
  double tau0 = 1.0;
  double tau1 = 0.0;
  double theta = 0.0;
  double sigma = 1.0;
  double operator()(double v) const noexcept {
    return tau0 + tau1 / (1.0 + std::exp(-(v - theta) / sigma));
  }
};

struct AlphaSynapse {
  double tau = 5.0;
  double g_peak = 0.0;
};

struct StnParams {
  double g_l, e_l, g_na, e_na, g_k, e_k, g_t, g_ca, e_ca, g_ahp, k1, k_ca, eps_ca;
  double phi_n, phi_h, phi_r, phi_c;
  Sigmoid m_inf, h_inf, n_inf, a_inf, r_inf, c_inf, b_inf;
  TauCurve tau_n, tau_h, tau_r, tau_c;
  AlphaSynapse synapse;
};

struct GpParams {
  double g_l, e_l, g_na, e_na, g_k, e_k, g_t, g_ca, e_ca, g_ahp, k1, k_ca, eps_ca;
  double phi_n, phi_h, phi_r, tau_r;
  Sigmoid m_inf, h_inf, n_inf, a_inf, s_inf, r_inf;
  TauCurve tau_n, tau_h;
  double gpe_syn_alpha, gpe_syn_beta;
  Sigmoid gpe_syn_h_inf;
  AlphaSynapse gpi_synapse;
};

struct ThParams {
  double g_l, e_l, g_na, e_na, g_k, e_k, g_t, e_t;
  Sigmoid m_inf, h_inf, p_inf, r_inf;
  double tau_r_scale;
};

/// Ring-offset projection: neuron i of the target receives from source
/// neurons (i + offset) mod n, each scaled by `weight`.
struct Projection {
  double g = 0.0;
  double e_rev = 0.0;
  double weight = 1.0;
  std::vector<int> offsets;
};

struct RegionValues {
  double stn = 0.0;
  double gpe = 0.0;
  double gpi = 0.0;
  friend bool operator==(const RegionValues&, const RegionValues&) = default;
};

struct SmcParams {
  double amplitude = 3.5;
  double width_ms = 5.0;
  double rate_hz = 14.0;
  double cv = 0.2;
};

struct ModelParams {
  std::string model_version;
  double cm = 1.0;
  double synaptic_threshold_mv = -10.0;
  double guard_lo_mv = -1500.0;
  double guard_hi_mv = 1500.0;
  double dbs_coupling = 1.0;
  double init_v_mean = -62.0;
  double init_v_sd = 5.0;
  double init_ca = 0.1;
  StnParams stn{};
  GpParams gp{};
  ThParams th{};
  Projection gpe_to_stn, stn_to_gpe, gpe_to_gpe, stn_to_gpi, gpe_to_gpi, gpi_to_th;
  RegionValues i_app_healthy;
  RegionValues i_app_pd_scale;
  RegionValues i_app_jitter_sd;
  SmcParams smc;
};

namespace detail {

using nlohmann::json;

inline Sigmoid sigmoid_from(const json& j) { return {j.at("theta").get<double>(), j.at("sigma").get<double>()}; }

inline TauCurve tau_from(const json& j) {
  return {j.at("tau0").get<double>(), j.at("tau1").get<double>(), j.at("theta").get<double>(),
          j.at("sigma").get<double>()};
}

inline Projection projection_from(const json& j) {
  return {j.at("g").get<double>(), j.at("e_rev").get<double>(), j.at("weight").get<double>(),
          j.at("offsets").get<std::vector<int>>()};
}

inline RegionValues region_values_from(const json& j) {
  return {j.at("stn").get<double>(), j.at("gpe").get<double>(), j.at("gpi").get<double>()};
}

}  // namespace detail

inline ModelParams parse_model_params(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != "bgt-params/1") {
      throw Error(ErrorKind::ParseError, "unsupported schema " + j.at("schema").get<std::string>());
    }
    ModelParams p;
    p.model_version = j.at("model_version").get<std::string>();
    p.cm = j.at("cm").get<double>();
    p.synaptic_threshold_mv = j.at("synaptic_threshold_mv").get<double>();
    const auto guard = j.at("voltage_guard_mv").get<std::vector<double>>();
    if (guard.size() != 2) throw Error(ErrorKind::ParseError, "voltage_guard_mv needs two values");
    p.guard_lo_mv = guard[0];
    p.guard_hi_mv = guard[1];
    p.dbs_coupling = j.at("dbs_coupling").get<double>();
    const auto& init = j.at("init");
    p.init_v_mean = init.at("v_mean").get<double>();
    p.init_v_sd = init.at("v_sd").get<double>();
    p.init_ca = init.at("ca").get<double>();

    using detail::sigmoid_from;
    using detail::tau_from;
    const auto& s = j.at("stn");
    auto& stn = p.stn;
    stn.g_l = s.at("g_l"); stn.e_l = s.at("e_l");
    stn.g_na = s.at("g_na"); stn.e_na = s.at("e_na");
    stn.g_k = s.at("g_k"); stn.e_k = s.at("e_k");
    stn.g_t = s.at("g_t"); stn.g_ca = s.at("g_ca"); stn.e_ca = s.at("e_ca");
    stn.g_ahp = s.at("g_ahp"); stn.k1 = s.at("k1"); stn.k_ca = s.at("k_ca"); stn.eps_ca = s.at("eps_ca");
    stn.phi_n = s.at("phi_n"); stn.phi_h = s.at("phi_h"); stn.phi_r = s.at("phi_r"); stn.phi_c = s.at("phi_c");
    stn.m_inf = sigmoid_from(s.at("m_inf"));
    stn.h_inf = sigmoid_from(s.at("h_inf"));
    stn.n_inf = sigmoid_from(s.at("n_inf"));
    stn.a_inf = sigmoid_from(s.at("a_inf"));
    stn.r_inf = sigmoid_from(s.at("r_inf"));
    stn.c_inf = sigmoid_from(s.at("c_inf"));
    stn.b_inf = sigmoid_from(s.at("b_inf"));
    stn.tau_n = tau_from(s.at("tau_n"));
    stn.tau_h = tau_from(s.at("tau_h"));
    stn.tau_r = tau_from(s.at("tau_r"));
    stn.tau_c = tau_from(s.at("tau_c"));
    stn.synapse = {s.at("synapse").at("tau"), s.at("synapse").at("g_peak")};

    const auto& g = j.at("gp");
    auto& gp = p.gp;
    gp.g_l = g.at("g_l"); gp.e_l = g.at("e_l");
    gp.g_na = g.at("g_na"); gp.e_na = g.at("e_na");
    gp.g_k = g.at("g_k"); gp.e_k = g.at("e_k");
    gp.g_t = g.at("g_t"); gp.g_ca = g.at("g_ca"); gp.e_ca = g.at("e_ca");
    gp.g_ahp = g.at("g_ahp"); gp.k1 = g.at("k1"); gp.k_ca = g.at("k_ca"); gp.eps_ca = g.at("eps_ca");
    gp.phi_n = g.at("phi_n"); gp.phi_h = g.at("phi_h"); gp.phi_r = g.at("phi_r"); gp.tau_r = g.at("tau_r");
    gp.m_inf = sigmoid_from(g.at("m_inf"));
    gp.h_inf = sigmoid_from(g.at("h_inf"));
    gp.n_inf = sigmoid_from(g.at("n_inf"));
    gp.a_inf = sigmoid_from(g.at("a_inf"));
    gp.s_inf = sigmoid_from(g.at("s_inf"));
    gp.r_inf = sigmoid_from(g.at("r_inf"));
    gp.tau_n = tau_from(g.at("tau_n"));
    gp.tau_h = tau_from(g.at("tau_h"));
    gp.gpe_syn_alpha = g.at("gpe_synapse").at("alpha");
    gp.gpe_syn_beta = g.at("gpe_synapse").at("beta");
    gp.gpe_syn_h_inf = sigmoid_from(g.at("gpe_synapse").at("h_inf"));
    gp.gpi_synapse = {g.at("gpi_synapse").at("tau"), g.at("gpi_synapse").at("g_peak")};

    const auto& t = j.at("th");
    auto& th = p.th;
    th.g_l = t.at("g_l"); th.e_l = t.at("e_l");
    th.g_na = t.at("g_na"); th.e_na = t.at("e_na");
    th.g_k = t.at("g_k"); th.e_k = t.at("e_k");
    th.g_t = t.at("g_t"); th.e_t = t.at("e_t");
    th.m_inf = sigmoid_from(t.at("m_inf"));
    th.h_inf = sigmoid_from(t.at("h_inf"));
    th.p_inf = sigmoid_from(t.at("p_inf"));
    th.r_inf = sigmoid_from(t.at("r_inf"));
    th.tau_r_scale = t.at("tau_r_scale");

    const auto& pr = j.at("projections");
    p.gpe_to_stn = detail::projection_from(pr.at("gpe_to_stn"));
    p.stn_to_gpe = detail::projection_from(pr.at("stn_to_gpe"));
    p.gpe_to_gpe = detail::projection_from(pr.at("gpe_to_gpe"));
    p.stn_to_gpi = detail::projection_from(pr.at("stn_to_gpi"));
    p.gpe_to_gpi = detail::projection_from(pr.at("gpe_to_gpi"));
    p.gpi_to_th = detail::projection_from(pr.at("gpi_to_th"));

    const auto& ia = j.at("i_app");
    p.i_app_healthy = detail::region_values_from(ia.at("healthy"));
    p.i_app_pd_scale = detail::region_values_from(ia.at("pd_scale"));
    p.i_app_jitter_sd = detail::region_values_from(ia.at("jitter_sd"));

    const auto& smc = j.at("smc");
    p.smc = {smc.at("amplitude"), smc.at("width_ms"), smc.at("rate_hz"), smc.at("cv")};
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model parameters: ") + e.what());
  }
}

inline ModelParams load_model_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  return parse_model_params(j);
}

#ifndef DBS_DATA_DIR
#define DBS_DATA_DIR "data"
#endif

/// Path of the parameter file shipped with the repository.
inline std::string default_params_path() { return std::string(DBS_DATA_DIR) + "/bgt_params.json"; }

inline const ModelParams& default_model_params() {
  static const ModelParams params = load_model_params(default_params_path());
  return params;
}

}  // namespace dbs::neuro
