#pragma once
// Analytic initial-data families. Every returned state satisfies the
// compatibility constraints: reality, divergence-free velocity, zero
// per-species mass, and zero total momentum functional (the mean velocity is
// adjusted to cancel the particle momentum). The random variable z enters as
// an analytic scalar factor, so compatibility holds for every z.

#include <cstdint>

#include "nsvfp/state.hpp"

namespace nsvfp {

struct InitialSpec {
  enum class Profile {
    mixed,           // seeded low-mode fluid + kinetic content (generic data)
    shear,           // d>=2: velocity component 0 varying along the last axis, f=0
    shear_kinetic,   // shear flow plus Hermite bands with n_0 >= 1 (transverse sector)
    kinetic_bands,   // x-independent: every Hermite band of every species populated
  };
  enum class ZForm { none, linear, quadratic, exponential };

  Profile profile = Profile::mixed;
  double amplitude = 1e-2;   // A: overall scale of the fluctuation
  double z_coupling = 0.0;   // rho in the z factor
  ZForm z_form = ZForm::none;
  std::uint64_t seed = 1;    // phases/amplitudes of the mixed profile

  // the analytic factor g(z): 1, 1+rho z, (1+rho z)^2, or e^{rho z}
  double z_factor(double z) const;
};

SimState make_initial_state(const InitialSpec& spec, const Config& c, double z = 0.0);

}  // namespace nsvfp
