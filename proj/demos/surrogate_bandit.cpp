// T3P against the calibrated surrogate: one 75-round episode, printed round by round.
#include <cstdio>
#include <cstdlib>

#include "dbs/env/surrogate.hpp"
#include "dbs/policy/factory.hpp"

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  const auto spec = dbs::env::load_surrogate_spec(dbs::env::default_surrogate_path());
  dbs::env::SurrogateEnv env(spec, seed);
  const dbs::ArmSpace& arms = env.arms();

  dbs::policy::PolicyParams params;
  auto pol = dbs::policy::make_policy(params, arms.size(), seed);

  double total = 0.0;
  std::printf("round  phase   eps    freq   amp    reward\n");
  for (int t = 1; t <= 75; ++t) {
    const dbs::ArmId a = pol->select();
    const auto r = env.play(a);
    pol->update(a, {r.reward.total, r.p_beta.value});
    total += r.reward.total;
    const auto& p = arms.at(a);
    std::printf("%5d  %-6s  %.3f  %5.0f  %5.0f  %+.4f\n", t, pol->phase().c_str(), pol->epsilon(), p.frequency_hz,
                p.amplitude, r.reward.total);
  }
  const auto& g = arms.at(pol->greedy());
  const auto& best = arms.at(spec.optimal_arm());
  std::printf("greedy arm %.0f Hz / %.0f, surrogate optimum %.0f Hz / %.0f, total reward %.3f\n", g.frequency_hz,
              g.amplitude, best.frequency_hz, best.amplitude, total);
}
