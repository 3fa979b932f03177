#include <cstdio>
#include "reprosolve/acceptance.hpp"
int main() {
  auto results = reprosolve::run_acceptance();
  std::fputs(reprosolve::results_table(results).c_str(), stdout);
  return reprosolve::all_passed(results) ? 0 : 1;
}
