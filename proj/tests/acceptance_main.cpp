// Release gate: runs the twelve scripted checks and prints one PASS/FAIL
// line each, with the measured numbers indented underneath.  Exits 0 only
// if every check passes; a FAIL line's detail block states the measured
// values and, for known resolution-limit cases, the independent
// semianalytic cross-check.

#include <cstdio>

#include "pshlab/acceptance.hpp"

int main() {
  int failures = 0;
  const auto results =
      pshlab::run_acceptance([&failures](const pshlab::CriterionResult& res) {
        std::printf("[%2d/12] %s  %s  (%.0f ms)\n", res.index,
                    res.pass ? "PASS" : "FAIL", res.label.c_str(),
                    res.elapsed_ms);
        for (const std::string& line : res.details) {
          std::printf("        %s\n", line.c_str());
        }
        std::fflush(stdout);
        if (!res.pass) ++failures;
      });
  std::printf("%d/12 passed\n", static_cast<int>(results.size()) - failures);
  return failures == 0 ? 0 : 1;
}
