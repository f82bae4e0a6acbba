// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "hlift/acceptance.hpp"

int main(int argc, char** argv) {
  hlift::AcceptanceOptions opts;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      std::stringstream s(argv[++i]);
      std::string tok;
      while (std::getline(s, tok, ',')) only.insert(std::stoi(tok));
    } else if (a == "--config" && i + 1 < argc) {
      opts.config_path = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--only 1,2,...] [--config path]\n";
      return 2;
    }
  }
  opts.on_criterion = [](const hlift::CriterionResult& r) {
    std::printf("%s %2d %s: %s [%ld ms]\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(), r.ms);
    std::fflush(stdout);
  };
  auto results = hlift::run_acceptance(opts, only);
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::printf("%d/%zu criteria pass\n", static_cast<int>(results.size()) - failed, results.size());
  return failed ? 1 : 0;
}
