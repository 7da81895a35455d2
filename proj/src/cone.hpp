#pragma once

#include "lp.hpp"
#include "nl.hpp"

namespace k3 {

struct ConeConfig {
  long d = 1;
  long delta_max = 0;   // 0 = default 4d + 25
  long window = 0;      // 0 = derived from delta_max
  DivisorClass branch;  // [B]; empty = shipped default rule
  bool escalate = true; // re-run with a larger delta_max until stable
};

// Reflective-class rule for the branch divisor of the modular projection:
// (1/2)H(0,-1), plus H(a, -1/4d) for a^2 === 1 (mod 4d), plus, when
// d === 1 (mod 4), H(rep(2b), -1/d) for b^2 === 1 (mod d); 2-torsion classes
// enter with coefficient 1/2.
DivisorClass default_branch_divisor(long d);

struct ConeGenerator {
  RankTwoClass cls;
  std::vector<Rat> coords;  // in the Picard free-functional basis
};

struct ConeContext {
  ConeConfig cfg;
  PicardBasis basis;
  std::vector<ConeGenerator> gens;
  std::vector<Rat> lambda_coords;
  std::vector<Rat> kcirc_coords;
};

ConeContext cone_context(const ConeConfig& cfg, JacobiEngine& eng);

// coordinates of an arbitrary class over the free functionals
std::vector<Rat> class_coords(const PicardBasis& basis, const DivisorClass& cls);

struct ConeVerdict {
  bool inside = false;
  std::optional<Rat> epsilon_min;
  std::map<RankTwoClass, Rat> t;  // nonzero multipliers of the solution
  LPResult certificate;
  long delta_max_used = 0;
  std::string note;
};

// feasibility of target = sum t.P, t >= 0
ConeVerdict nl_membership(const ConeContext& ctx, const std::vector<Rat>& target);

// minimal epsilon >= 0 with K° - eps*lambda in the cone; outside-verdict when
// no epsilon works
ConeVerdict epsilon_min(const ConeContext& ctx);

struct OpenConeReport {
  long d = 1;
  // "unconditional_kappa_minus_infinity" (Eisenstein backend),
  // "conditional_kappa_minus_infinity", "conditional_kappa_lt_19",
  // "inside_cone_proceed_to_boundary"
  std::string classification;
  ConeVerdict verdict;
  bool conditional = true;  // rests on generator completeness (open questions)
  std::optional<int> degree_sign;  // with the Eisenstein backend
};

OpenConeReport kodaira_open_report(long d, const ConeConfig& cfg, JacobiEngine& eng);

}  // namespace k3
