#include "k3pic.h"

#include <cstring>

#include "session.hpp"

using namespace k3;

struct k3pic_session {
  Options opt;
  std::unique_ptr<Session> impl;
  std::string last_error;

  Session& session() {
    if (!impl) impl = std::make_unique<Session>(opt);
    return *impl;
  }
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
k3pic_status guarded(k3pic_session* s, char** json_out, F&& f) {
  if (!s) return K3PIC_ERR_USAGE;
  if (json_out) *json_out = nullptr;
  try {
    Json j = f(s->session());
    if (json_out) *json_out = dup_string(json_dump(j));
    s->last_error.clear();
    return K3PIC_OK;
  } catch (const budget_error& e) {
    s->last_error = e.what();
    return K3PIC_ERR_BUDGET;
  } catch (const config_error& e) {
    s->last_error = e.what();
    return K3PIC_ERR_CONFIG;
  } catch (const math_error& e) {
    s->last_error = e.what();
    return K3PIC_ERR_MATH;
  } catch (const std::exception& e) {
    s->last_error = e.what();
    return K3PIC_ERR_USAGE;
  }
}

}  // namespace

extern "C" {

k3pic_session* k3pic_session_new(void) { return new (std::nothrow) k3pic_session; }

void k3pic_session_free(k3pic_session* s) { delete s; }

k3pic_status k3pic_set_option(k3pic_session* s, const char* key, const char* value) {
  if (!s || !key || !value) return K3PIC_ERR_USAGE;
  try {
    std::string k = key, v = value;
    if (k == "config_dir")
      s->opt.config_dir = v;
    else if (k == "cache_dir")
      s->opt.cache_dir = v;
    else if (k == "window")
      s->opt.window = std::stol(v);
    else if (k == "delta_max")
      s->opt.delta_max = std::stol(v);
    else if (k == "prec")
      s->opt.prec = std::stol(v);
    else if (k == "budget")
      s->opt.budget = std::stol(v);
    else if (k == "workers")
      s->opt.workers = static_cast<unsigned>(std::stoul(v));
    else {
      s->last_error = "unknown option '" + k + "'";
      return K3PIC_ERR_USAGE;
    }
    s->impl.reset();  // options apply to a fresh engine
    return K3PIC_OK;
  } catch (const std::exception& e) {
    s->last_error = e.what();
    return K3PIC_ERR_USAGE;
  }
}

const char* k3pic_last_error(const k3pic_session* s) {
  return s ? s->last_error.c_str() : "null session";
}

const char* k3pic_version(void) { return "k3pic 1.0.0"; }

void k3pic_string_free(char* s) { std::free(s); }

k3pic_status k3pic_picard(k3pic_session* s, long d, long gamma, const char* n, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) {
    std::optional<HeegnerIndex> idx;
    if (n) idx = HeegnerIndex{gamma, rat_parse(n)};
    return ses.cmd_picard(d, idx);
  });
}

k3pic_status k3pic_hodge(k3pic_session* s, long d, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) { return ses.cmd_hodge(d); });
}

k3pic_status k3pic_nl(k3pic_session* s, long d, long delta_disc, long delta_coset, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) { return ses.cmd_nl(d, delta_disc, delta_coset); });
}

k3pic_status k3pic_nl_decompose(k3pic_session* s, long d, long h, long a, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) { return ses.cmd_nl_decompose(d, h, a); });
}

k3pic_status k3pic_cone(k3pic_session* s, long d, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) { return ses.cmd_cone(d); });
}

k3pic_status k3pic_boundary(k3pic_session* s, long d, const char* relation_json, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) {
    std::optional<DivisorClass> rel;
    if (relation_json) rel = divisor_from_json(Json::parse(relation_json));
    return ses.cmd_boundary(d, rel);
  });
}

k3pic_status k3pic_ghosts_count(k3pic_session* s, long m, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) { return ses.cmd_ghosts_count(m); });
}

k3pic_status k3pic_ghosts_bound(k3pic_session* s, long d, const char* relation_json, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) {
    if (!relation_json) throw config_error("ghosts-bound requires a relation");
    return ses.cmd_ghosts_bound(d, divisor_from_json(Json::parse(relation_json)));
  });
}

k3pic_status k3pic_kodaira(k3pic_session* s, long d, int complete_hodge, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) { return ses.cmd_kodaira(d, complete_hodge != 0); });
}

k3pic_status k3pic_verify(k3pic_session* s, const char* golden_dir, char** json_out) {
  return guarded(s, json_out, [&](Session& ses) { return ses.cmd_verify(golden_dir ? golden_dir : "golden"); });
}

}  // extern "C"
