#pragma once

#include <json.hpp>

#include "ghosts.hpp"

namespace k3 {

using Json = nlohmann::ordered_json;

// Tunables shared by every command; all tolerance-free and recorded in the
// run manifest so reruns are byte-identical.
struct Options {
  long window = 4;        // dependency window |n| <= window
  long delta_max = 0;     // 0 = 4d + 25
  long prec = 3;          // theta-series q-precision for boundary work
  long budget = 4000;     // branch-and-bound node budget
  unsigned workers = 0;   // 0 = hardware concurrency
  std::string config_dir = "config";
  std::string cache_dir;  // empty = <config_dir>/cache
};

struct Session {
  Options opt;
  Parallel par;
  JacobiEngine eng;

  explicit Session(Options o);

  // config-backed data
  DivisorClass branch_divisor(long d);
  std::vector<std::pair<CuspStratum, GramLattice>> boundary_lattices(long d);

  Json manifest(const std::string& command, const Json& params);

  Json cmd_picard(long d, std::optional<HeegnerIndex> express_idx);
  Json cmd_hodge(long d);
  Json cmd_nl(long d, long disc, long coset);
  Json cmd_nl_decompose(long d, long h, long a);
  Json cmd_cone(long d);
  Json cmd_boundary(long d, const std::optional<DivisorClass>& rel);
  Json cmd_ghosts_count(long m);
  Json cmd_ghosts_bound(long d, const DivisorClass& rel);
  Json cmd_kodaira(long d, bool complete_hodge);
  Json cmd_verify(const std::string& golden_dir);
};

Json divisor_to_json(const DivisorClass& cls);
DivisorClass divisor_from_json(const Json& j);
Json lpresult_to_json(const LPResult& r);

std::string json_dump(const Json& j);

}  // namespace k3
