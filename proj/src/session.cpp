#include "session.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef K3PIC_EISENSTEIN
#include "eisenstein.hpp"
#endif

namespace k3 {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

}  // namespace

Session::Session(Options o) : opt(std::move(o)) {
  par.workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  if (opt.cache_dir.empty()) opt.cache_dir = opt.config_dir + "/cache";
  eng = JacobiEngine{par, opt.cache_dir};
}

Json divisor_to_json(const DivisorClass& cls) {
  Json terms = Json::array();
  for (auto& [idx, c] : cls.terms)
    terms.push_back({{"gamma", idx.gamma}, {"n", rat_str(idx.n)}, {"coeff", rat_str(c)}});
  return Json{{"d", cls.d}, {"terms", terms}};
}

DivisorClass divisor_from_json(const Json& j) {
  DivisorClass cls;
  cls.d = j.at("d").get<long>();
  for (auto& t : j.at("terms")) {
    HeegnerIndex idx{t.at("gamma").get<long>(), rat_parse(t.at("n").get<std::string>())};
    validate_heegner(cls.d, idx);
    cls.add(idx, rat_parse(t.at("coeff").get<std::string>()));
  }
  return cls;
}

Json lpresult_to_json(const LPResult& r) {
  Json j;
  switch (r.status) {
    case LPStatus::Optimal: j["status"] = "optimal"; break;
    case LPStatus::Infeasible: j["status"] = "infeasible"; break;
    case LPStatus::Unbounded: j["status"] = "unbounded"; break;
  }
  j["certified"] = r.certified;
  auto vec = [](const std::vector<Rat>& v) {
    Json a = Json::array();
    for (auto& x : v) a.push_back(rat_str(x));
    return a;
  };
  if (r.status == LPStatus::Optimal) {
    j["value"] = rat_str(r.value);
    j["point"] = vec(r.point);
    j["dual"] = vec(r.dual);
  } else if (r.status == LPStatus::Infeasible) {
    j["farkas"] = vec(r.farkas);
  } else {
    j["ray"] = vec(r.ray);
  }
  return j;
}

std::string json_dump(const Json& j) { return j.dump(2) + "\n"; }

DivisorClass Session::branch_divisor(long d) {
  std::string path = opt.config_dir + "/branch_divisors.json";
  if (std::filesystem::exists(path)) {
    Json all = load_json(path);
    std::string key = std::to_string(d);
    if (all.contains(key)) {
      DivisorClass b = divisor_from_json(all.at(key));
      if (b.d != d) throw config_error("branch_divisors.json: entry " + key + " has wrong d");
      return b;
    }
  }
  return default_branch_divisor(d);
}

std::vector<std::pair<CuspStratum, GramLattice>> Session::boundary_lattices(long d) {
  std::string path = opt.config_dir + "/lattices.json";
  Json all = load_json(path);
  std::vector<std::pair<CuspStratum, GramLattice>> out;
  for (auto& stratum : cusp_strata(d)) {
    std::string key = std::to_string(stratum.m);
    if (!all.contains(key))
      throw config_error("lattices.json: no genus representatives for m=" + key);
    for (auto& entry : all.at(key)) {
      GramLattice g;
      g.name = entry.at("name").get<std::string>();
      if (entry.contains("blocks")) {
        std::vector<GramLattice> parts;
        for (auto& b : entry.at("blocks")) {
          std::string type = b.get<std::string>();
          if (type == "E8")
            parts.push_back(gram_e8());
          else if (type == "A1")
            parts.push_back(gram_a1());
          else if (type == "D16+")
            parts.push_back(gram_d16plus());
          else if (type.rfind("<", 0) == 0)
            parts.push_back(gram_rank1(std::stol(type.substr(1))));
          else
            throw config_error("lattices.json: unknown block '" + type + "'");
        }
        GramLattice sum = direct_sum(parts, g.name);
        g.gram = sum.gram;
      } else if (entry.contains("gram")) {
        for (auto& row : entry.at("gram")) {
          std::vector<Int> r;
          for (auto& v : row) r.push_back(Int(v.get<long>()));
          g.gram.push_back(std::move(r));
        }
      } else {
        throw config_error("lattices.json: entry without gram or blocks");
      }
      if (!genus_check(g, stratum.m))
        throw config_error("lattices.json: " + g.name + " fails the genus check for m=" + key);
      out.emplace_back(stratum, g);
    }
  }
  return out;
}

Json Session::manifest(const std::string& command, const Json& params) {
  Json m;
  m["command"] = command;
  m["params"] = params;
  m["options"] = {{"window", opt.window}, {"delta_max", opt.delta_max}, {"prec", opt.prec},
                  {"budget", opt.budget}};
  Json hashes;
  for (const char* f : {"lattices.json", "branch_divisors.json"}) {
    std::string path = opt.config_dir + "/" + std::string(f);
    if (std::filesystem::exists(path)) hashes[f] = fnv1a(read_file(path));
  }
  m["config_hashes"] = hashes;
  return m;
}

Json Session::cmd_picard(long d, std::optional<HeegnerIndex> express_idx) {
  Json params{{"d", d}, {"window", opt.window}};
  PicardBasis basis = picard_basis(d, opt.window, eng);
  Json out;
  out["manifest"] = manifest("picard", params);
  out["d"] = d;
  out["dim"] = basis.dim();
  out["stabilized_pole_order"] = basis.fb.stabilized_P;
  Json frees = Json::array();
  for (auto& f : basis.free_functionals())
    frees.push_back({{"gamma", f.gamma}, {"n", rat_str(f.n)}});
  out["free_functionals"] = frees;
  Json deps = Json::array();
  for (std::size_t i = 0; i < basis.fb.grid.size(); ++i) {
    const Slot& s = basis.fb.grid[i];
    Json coords = Json::array();
    for (std::size_t j = 0; j < basis.dim(); ++j) coords.push_back(rat_str(basis.fb.dep.at(i, j)));
    deps.push_back({{"gamma", s.gamma}, {"n", rat_str(rat(s.num, 4 * d))}, {"coords", coords}});
  }
  out["dependencies"] = deps;
#ifdef K3PIC_EISENSTEIN
  try {
    Json eis;
    eis["note"] = "phi-presentation dual to {Eisenstein, normalized cusp forms}";
    eis["phi2_c00_coordinate"] = rat_str(-eisenstein_coefficient(d, 0, rat(1)));
    out["eisenstein_presentation"] = eis;
  } catch (const math_error&) {
  }
#endif
  if (express_idx) {
    validate_heegner(d, *express_idx);
    DivisorClass e = express(basis, *express_idx);
    Json je = divisor_to_json(e);
    // lambda convenience: negated (0,0)-coefficient
    auto it = e.terms.find(HeegnerIndex{0, 0});
    je["lambda"] = rat_str(it == e.terms.end() ? Rat(0) : Rat(-it->second));
    out["express"] = {{"gamma", express_idx->gamma}, {"n", rat_str(express_idx->n)}, {"class", je}};
  }
  return out;
}

Json Session::cmd_hodge(long d) {
  PicardBasis basis = picard_basis(d, std::max(opt.window, 2L), eng);
  HodgeRelation h = hodge_relation(basis);
  Json out;
  out["manifest"] = manifest("hodge", Json{{"d", d}});
  out["d"] = d;
  out["two_rho"] = rat_str(h.two_rho);
  Json coeffs = Json::array();
  for (long a = 1; a <= d; ++a)
    coeffs.push_back({{"gamma", a}, {"n", rat_str(-rat(a * a, 4 * d))}, {"coeff", rat_str(h.coeff[a - 1])}});
  out["coefficients"] = coeffs;
  out["relation"] = divisor_to_json(h.relation());
  if (h.dropped > 0) {
    out["rank_defect_note"] =
        "the full a=0.." + std::to_string(d) + " support is rank-defective; dropped the last " +
        std::to_string(h.dropped) + " column(s) to restore uniqueness";
  }
  return out;
}

Json Session::cmd_nl(long d, long disc, long coset) {
  Json out;
  out["manifest"] = manifest("nl", Json{{"d", d}, {"Delta", disc}, {"delta", coset}});
  out["d"] = d;
  out["Delta"] = disc;
  out["delta"] = coset;
  out["exists"] = class_exists(d, disc, coset);
  if (!class_exists(d, disc, coset)) return out;
  long window = std::max(opt.window, static_cast<long>(ceil_int(rat(disc, 4 * d)).get_si()) + 1);
  out["in_terms_of_H"] = divisor_to_json(p_in_terms_of_H(d, disc, coset, window));
  return out;
}

Json Session::cmd_nl_decompose(long d, long h, long a) {
  Json out;
  out["manifest"] = manifest("nl-decompose", Json{{"d", d}, {"h", h}, {"a", a}});
  Json parts = Json::array();
  for (auto& [cls, mult] : decompose_D(d, h, a))
    parts.push_back({{"Delta", cls.delta_disc}, {"delta", cls.delta_coset}, {"multiplicity", mult}});
  out["components"] = parts;
  return out;
}

namespace {

Json cone_verdict_json(const ConeVerdict& v) {
  Json j;
  j["inside"] = v.inside;
  if (v.epsilon_min) j["epsilon_min"] = rat_str(*v.epsilon_min);
  Json ts = Json::array();
  for (auto& [cls, t] : v.t)
    ts.push_back({{"Delta", cls.delta_disc}, {"delta", cls.delta_coset}, {"t", rat_str(t)}});
  j["t"] = ts;
  j["delta_max_used"] = v.delta_max_used;
  j["certificate"] = lpresult_to_json(v.certificate);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

}  // namespace

Json Session::cmd_cone(long d) {
  ConeConfig cfg;
  cfg.d = d;
  cfg.delta_max = opt.delta_max;
  cfg.branch = branch_divisor(d);
  OpenConeReport rep = kodaira_open_report(d, cfg, eng);
  Json out;
  out["manifest"] = manifest("cone", Json{{"d", d}});
  out["d"] = d;
  out["classification"] = rep.classification;
  out["conditional"] = rep.conditional;
  out["verdict"] = cone_verdict_json(rep.verdict);
  if (rep.degree_sign) out["degree_sign"] = *rep.degree_sign;
  out["branch_divisor"] = divisor_to_json(cfg.branch);
  return out;
}

Json Session::cmd_boundary(long d, const std::optional<DivisorClass>& rel_in) {
  DivisorClass rel;
  if (rel_in) {
    rel = *rel_in;
  } else {
    PicardBasis basis = picard_basis(d, std::max(opt.window, 2L), eng);
    rel = hodge_relation(basis).relation();
  }
  CompletedRelation cr = complete_relation(rel, d, boundary_lattices(d), opt.prec);
  Json out;
  out["manifest"] = manifest("boundary", Json{{"d", d}, {"prec", opt.prec}});
  out["d"] = d;
  out["open_part"] = divisor_to_json(cr.open_part);
  Json bd = Json::array();
  for (auto& term : cr.boundary)
    bd.push_back({{"N", term.stratum.N}, {"m", term.stratum.m}, {"lattice", term.lattice},
                  {"coeff", rat_str(term.coeff)}});
  out["boundary"] = bd;
  return out;
}

Json Session::cmd_ghosts_count(long m) {
  GhostCount c = ghost_count(m, eng);
  Json out;
  out["manifest"] = manifest("ghosts-count", Json{{"m", m}});
  out["m"] = m;
  out["count"] = c.count;
  out["window_used"] = c.window_used;
  out["stabilized"] = c.stabilized;
  return out;
}

Json Session::cmd_ghosts_bound(long d, const DivisorClass& rel) {
  CuspidalityVerdict v = cuspidality_verdict(rel, d, eng, opt.budget);
  Json out;
  out["manifest"] = manifest("ghosts-bound", Json{{"d", d}});
  out["d"] = d;
  out["relation"] = divisor_to_json(rel);
  out["cusp_form_proved"] = v.cusp_form_proved;
  out["global_bound"] = rat_str(v.global_bound);
  Json strata = Json::array();
  for (auto& s : v.strata)
    strata.push_back({{"N", s.N}, {"m", s.m}, {"bound", rat_str(s.bound.bound)},
                      {"exact", s.bound.exact}, {"stabilized", s.bound.stabilized},
                      {"window", s.bound.window_used}});
  out["strata"] = strata;
  return out;
}

Json Session::cmd_kodaira(long d, bool complete_hodge) {
  ConeConfig cfg;
  cfg.d = d;
  cfg.delta_max = opt.delta_max;
  cfg.branch = branch_divisor(d);
  Json out;
  out["manifest"] = manifest("kodaira", Json{{"d", d}, {"complete_hodge", complete_hodge}});
  out["d"] = d;
  if (complete_hodge) {
    PicardBasis basis = picard_basis(d, std::max(opt.window, 2L), eng);
    DivisorClass rel = hodge_relation(basis).relation();
    CompletedRelation cr = complete_relation(rel, d, boundary_lattices(d), opt.prec);
    Json bd = Json::array();
    for (auto& term : cr.boundary)
      bd.push_back({{"N", term.stratum.N}, {"m", term.stratum.m}, {"lattice", term.lattice},
                    {"coeff", rat_str(term.coeff)}});
    out["hodge_relation"] = divisor_to_json(rel);
    out["hodge_boundary"] = bd;
  }
  KodairaReport rep = kodaira_boundary_report(d, cfg, eng, opt.budget);
  out["verdict"] = rep.verdict;
  out["open_part"] = Json{{"classification", rep.open.classification},
                          {"conditional", rep.open.conditional},
                          {"verdict", cone_verdict_json(rep.open.verdict)}};
  if (rep.open.degree_sign) out["degree_sign"] = *rep.open.degree_sign;
  if (rep.cusps) {
    Json strata = Json::array();
    for (auto& s : rep.cusps->strata)
      strata.push_back({{"N", s.N}, {"m", s.m}, {"bound", rat_str(s.bound.bound)},
                        {"exact", s.bound.exact}, {"stabilized", s.bound.stabilized}});
    out["cusp_certification"] = Json{{"cusp_form_proved", rep.cusps->cusp_form_proved},
                                     {"global_bound", rat_str(rep.cusps->global_bound)},
                                     {"strata", strata}};
    out["borcherds_relation"] = divisor_to_json(rep.relation);
  }
  return out;
}

Json Session::cmd_verify(const std::string& golden_dir) {
  Json out;
  out["manifest"] = manifest("verify", Json{{"golden_dir", golden_dir}});
  Json cases = Json::array();
  bool all_ok = true;
  for (auto& entry : std::filesystem::directory_iterator(golden_dir)) {
    if (entry.path().extension() != ".json") continue;
    Json spec = load_json(entry.path().string());
    std::string cmd = spec.at("command").get<std::string>();
    Json got;
    if (cmd == "picard") {
      std::optional<HeegnerIndex> idx;
      if (spec.contains("express"))
        idx = HeegnerIndex{spec["express"].at("gamma").get<long>(),
                           rat_parse(spec["express"].at("n").get<std::string>())};
      got = cmd_picard(spec.at("d").get<long>(), idx);
    } else if (cmd == "hodge") {
      got = cmd_hodge(spec.at("d").get<long>());
    } else if (cmd == "boundary") {
      got = cmd_boundary(spec.at("d").get<long>(), std::nullopt);
    } else if (cmd == "ghosts-count") {
      got = cmd_ghosts_count(spec.at("m").get<long>());
    } else {
      throw config_error("verify: unsupported golden command " + cmd);
    }
    got.erase("manifest");
    std::string got_str = json_dump(got);
    std::string want_str = json_dump(spec.at("expected"));
    bool ok = got_str == want_str;
    all_ok = all_ok && ok;
    cases.push_back({{"file", entry.path().filename().string()}, {"ok", ok}});
  }
  std::sort(cases.begin(), cases.end(),
            [](const Json& a, const Json& b) { return a.at("file") < b.at("file"); });
  out["cases"] = cases;
  out["ok"] = all_ok;
  return out;
}

}  // namespace k3
