#pragma once

#include <optional>
#include <stdexcept>

#include "scs/beam_sc.hpp"

namespace scs::beam {

// Target geometry seen from both UAVs in one sensing slot.
struct SenseGeometry {
  ComplexVec steer_alice, steer_jack;  // unit-modulus steering vectors
  double dist2_alice = 0.0, dist2_jack = 0.0;
};

class SensingInfeasible : public std::runtime_error {
 public:
  SensingInfeasible(double required, double achievable)
      : std::runtime_error("sensing constraint infeasible: required gain " +
                           std::to_string(required) + " W exceeds achievable " +
                           std::to_string(achievable) + " W"),
        required(required),
        achievable(achievable) {}
  double required;
  double achievable;
};

// Secrecy rate with the sensing covariance leaking into both receivers.
double scs_rate_lifted(const Hermitian& w_alice, const Hermitian& w_jack,
                       const Hermitian& sense, const ScChannels& ch,
                       const ResidLevels& resid, const Noises& noise);

struct ScsBound {
  double a = 0.0, b = 0.0, c = 0.0;
  conic::LogTerm bob_log, eve_log;  // over blocks [alice, jack, sense]
  Hermitian lin_alice, lin_jack, lin_sense;
  double constant = 0.0;

  double value(const Hermitian& w_alice, const Hermitian& w_jack,
               const Hermitian& sense) const;
};

ScsBound build_scs_bound(const Hermitian& wa_exp, const Hermitian& wj_exp,
                         const Hermitian& rr_exp, const ScChannels& ch,
                         const ResidLevels& resid, const Noises& noise);

struct ScsSlotResult {
  ComplexVec w_alice, w_jack;
  Hermitian sense_cov;            // includes any extraction residue of W_a
  Hermitian cov_alice, cov_jack;  // relaxed covariances at exit
  SlotBeams stored;               // covariances recommended for the mission
  bool stored_rank_one = true;    // false when the relaxed forms were kept
  double achieved_gain = 0.0;     // gain of `stored`
  double max_gain = 0.0;          // all power focused on the target
  BeamLog log;
};

// One sensing slot: joint information/jamming/sensing covariance design with
// the distance-normalized beampattern-gain floor at a single target. The
// rank-one penalty applies to the two communication covariances only; the
// sensing covariance may keep any rank. Throws SensingInfeasible when even
// full focused power misses the gain floor.
ScsSlotResult solve_scs_slot(const ScChannels& ch, const SenseGeometry& geo,
                             const ResidLevels& resid, const Noises& noise,
                             const Budgets& budgets, double gain_floor,
                             const SolverConfig& cfg);

}  // namespace scs::beam
