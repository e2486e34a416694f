#include "dessinlab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/dessin_count.hpp"
#include "core/runner.hpp"

using nlohmann::json;

struct dlab_workbench {
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dlab_status classify(const dlab::Error& e) {
  std::string w = e.what();
  if (w.find("cap") != std::string::npos || w.find("truncation too small") != std::string::npos)
    return DLAB_ERR_RESOURCE;
  return DLAB_ERR_INVALID_ARG;
}

}  // namespace

extern "C" {

const char* dlab_version(void) { return "dessinlab 1.0.0"; }

dlab_status dlab_workbench_create(dlab_workbench** out) {
  if (!out) return DLAB_ERR_INVALID_ARG;
  *out = new (std::nothrow) dlab_workbench();
  return *out ? DLAB_OK : DLAB_ERR_INTERNAL;
}

void dlab_workbench_destroy(dlab_workbench* wb) { delete wb; }

const char* dlab_last_error(const dlab_workbench* wb) {
  return wb ? wb->last_error.c_str() : "null workbench";
}

dlab_status dlab_run(dlab_workbench* wb, const char* command, const char* params_json,
                     char** report_json) {
  if (!wb || !command || !report_json) return DLAB_ERR_INVALID_ARG;
  *report_json = nullptr;
  try {
    json params = json::object();
    if (params_json && *params_json) params = json::parse(params_json);
    json rep = dlab::run_command(command, params);
    *report_json = dup_string(rep.dump(2));
    if (!*report_json) return DLAB_ERR_INTERNAL;
    bool ok = !rep.contains("ok") || rep.at("ok").get<bool>();
    if (!ok) {
      wb->last_error = "verification failed; see report";
      return DLAB_ERR_VERIFY_FAILED;
    }
    return DLAB_OK;
  } catch (const dlab::Error& e) {
    wb->last_error = e.what();
    return classify(e);
  } catch (const json::exception& e) {
    wb->last_error = std::string("params: ") + e.what();
    return DLAB_ERR_INVALID_ARG;
  } catch (const std::exception& e) {
    wb->last_error = e.what();
    return DLAB_ERR_INTERNAL;
  }
}

dlab_status dlab_count_csv(dlab_workbench* wb, int dmax, const char* filter, int connected,
                           char** csv_out) {
  if (!wb || !csv_out) return DLAB_ERR_INVALID_ARG;
  *csv_out = nullptr;
  try {
    dlab::CountFilter f = dlab::count_filter_from_string(filter ? filter : "all");
    dlab::GenFun gf = connected ? dlab::connected_gf(dmax, f) : dlab::partition_function(dmax, f);
    *csv_out = dup_string(dlab::gf_to_csv(gf));
    return *csv_out ? DLAB_OK : DLAB_ERR_INTERNAL;
  } catch (const dlab::Error& e) {
    wb->last_error = e.what();
    return classify(e);
  } catch (const std::exception& e) {
    wb->last_error = e.what();
    return DLAB_ERR_INTERNAL;
  }
}

void dlab_free_string(char* s) { std::free(s); }

}  // extern "C"
