// Exercises the shared-library C surface the way an external caller would.
#include <cassert>
#include <cstdio>
#include <cstring>
#include <string>

#include "dessinlab.h"

static int failures = 0;

#define EXPECT(cond)                                        \
  do {                                                      \
    if (!(cond)) {                                          \
      std::fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                           \
    }                                                       \
  } while (0)

int main() {
  EXPECT(std::strlen(dlab_version()) > 0);

  dlab_workbench* wb = nullptr;
  EXPECT(dlab_workbench_create(&wb) == DLAB_OK);

  // count command round trip
  char* report = nullptr;
  dlab_status st = dlab_run(wb, "count", "{\"dmax\":2}", &report);
  EXPECT(st == DLAB_OK);
  EXPECT(report != nullptr);
  if (report) {
    std::string r(report);
    EXPECT(r.find("\"command\": \"count\"") != std::string::npos);
    EXPECT(r.find("t1") != std::string::npos);
    dlab_free_string(report);
  }

  // csv convenience: the d=1 row carries beta*gamma
  char* csv = nullptr;
  EXPECT(dlab_count_csv(wb, 1, "all", 1, &csv) == DLAB_OK);
  if (csv) {
    std::string c(csv);
    EXPECT(c.find("b*g") != std::string::npos);
    dlab_free_string(csv);
  }

  // bad command and bad params produce errors, not crashes
  report = nullptr;
  EXPECT(dlab_run(wb, "no-such-command", "{}", &report) == DLAB_ERR_INVALID_ARG);
  EXPECT(report == nullptr);
  EXPECT(std::strlen(dlab_last_error(wb)) > 0);

  EXPECT(dlab_run(wb, "count", "{\"dmax\":99}", &report) == DLAB_ERR_RESOURCE);

  EXPECT(dlab_run(wb, "count", "not json", &report) == DLAB_ERR_INVALID_ARG);

  // a small verification command
  report = nullptr;
  st = dlab_run(wb, "gkm-verify", "{\"fixture\":\"twolog-small\"}", &report);
  EXPECT(st == DLAB_OK);
  if (report) {
    std::string r(report);
    EXPECT(r.find("\"max_abs_delta\": \"0\"") != std::string::npos);
    dlab_free_string(report);
  }

  dlab_workbench_destroy(wb);
  if (failures == 0) std::printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
