// Runs the verify scenario and prints one line per acceptance criterion.
// Exit status is nonzero when any criterion fails or the report is incomplete.

#include <cctype>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include "blowup/config.hpp"
#include "blowup/runner.hpp"

int main(int argc, char** argv) {
  const std::string output = argc > 1 ? argv[1] : "acceptance_out";
  const blowup::RunConfig config = blowup::parse_config("[run]\nscenario = verify\n", {"run.output=" + output});
  const blowup::RunOutcome out = blowup::run(config);

  bool ok = out.exit_code == 0;
  std::set<int> seen;
  const auto& suites = out.report.value("suites", nlohmann::json::array());
  for (const auto& s : suites) {
    const int id = s["id"].get<int>();
    if (!seen.insert(id).second) {
      std::cout << "criterion " << id << " reported twice\n";
      ok = false;
    }
    std::string status = s["status"].get<std::string>();
    for (char& c : status) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    std::printf("criterion %d %-20s %-4s %6.1fs  %s\n", id, s["name"].get<std::string>().c_str(), status.c_str(),
                s["seconds"].get<double>(), s["message"].get<std::string>().c_str());
    if (id == 1 && s["metrics"].contains("cases")) {
      for (const auto& c : s["metrics"]["cases"]) {
        std::printf("    p=%g a=%g  ratio(30)=%.6f  vs kappa_a %.6f (dev %.3g)  vs limit %.6f (dev %.3g)\n",
                    c["p"].get<double>(), c["a"].get<double>(), c["ratio_s30"].get<double>(),
                    c["kappa_a"].get<double>(), c["deviation_s30"].get<double>(),
                    c["limit_amplitude"].get<double>(), c["limit_deviation_s30"].get<double>());
      }
    }
  }
  for (int id = 1; id <= 8; ++id) {
    if (seen.count(id) == 0) {
      std::cout << "criterion " << id << " missing from the report\n";
      ok = false;
    }
  }
  if (out.report.contains("error")) std::cout << "error: " << out.report["error"].get<std::string>() << "\n";
  std::cout << (ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << "  (report "
            << (out.directory / "report.json").string() << ")\n";
  return ok ? 0 : 1;
}
