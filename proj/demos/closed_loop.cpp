// T3P driving the spiking network directly. Small network and short rounds so it
// finishes in well under a minute.
#include <cstdio>

#include "dbs/env/bgt.hpp"
#include "dbs/policy/factory.hpp"

int main() {
  dbs::env::BgtEnvConfig cfg;
  cfg.neurons_per_region = 4;
  cfg.round_ms = 250.0;
  cfg.warm_in_ms = 500.0;
  cfg.baseline_rounds = 2;
  dbs::env::BgtEnv env(cfg, 7);
  std::printf("baseline beta power %.4f\n", env.baseline_p_beta());

  dbs::policy::PolicyParams params;
  params.t3p.k = 10;
  auto pol = dbs::policy::make_policy(params, env.arms().size(), 7);

  for (int t = 1; t <= 45; ++t) {
    const dbs::ArmId a = pol->select();
    const auto r = env.play(a);
    pol->update(a, {r.reward.total, r.p_beta.value});
    const auto& p = env.arms().at(a);
    std::printf("%3d %-6s %4.0f Hz %5.0f  P_beta %.4f  r1 %.3f r2 %.3f r3 %.3f  reward %+.4f\n", t,
                pol->phase().c_str(), p.frequency_hz, p.amplitude, r.p_beta.value, r.reward.r1, r.reward.r2,
                r.reward.r3, r.reward.total);
  }
  const auto& g = env.arms().at(pol->greedy());
  std::printf("greedy arm after 45 rounds: %.0f Hz / %.0f\n", g.frequency_hz, g.amplitude);
}
