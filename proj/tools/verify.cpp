// verify: runs the fockcalc identity suites and writes a JSON report.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fockcalc/verify/suites.hpp"

namespace fv = fockcalc::verify;

int main(int argc, char** argv) {
  CLI::App app{"Run fockcalc verification suites"};
  app.set_help_flag("-h,--help", "Print this help message and exit");

  fv::SuiteConfig cfg;
  std::string suite, config_path, report_path;
  bool show_manifest = false;
  std::string modes, degree, hbar, tol, seed, quad, cases, jobs;

  app.add_option("suite", suite, "Suite name or 'all'");
  app.add_option("--modes", modes, "Number of modes n");
  app.add_option("--degree", degree, "Truncation degree N");
  app.add_option("--hbar", hbar, "Semiclassical parameter h");
  app.add_option("--tol", tol, "Tolerance (overrides every suite's own tolerance)");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--quad", quad, "Gauss-Hermite order");
  app.add_option("--cases", cases, "Case count (overrides every suite's own count)");
  app.add_option("--jobs", jobs, "Worker threads; does not change the report");
  app.add_option("--config", config_path, "key=value file; flags take precedence");
  app.add_option("--report", report_path, "Write the JSON report here instead of stdout");
  app.add_flag("--manifest", show_manifest, "Print the suite to identity map and exit");
  app.add_flag("--timing", cfg.timing, "Include wall times in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (show_manifest) {
    for (const auto& [name, identity] : fv::manifest()) std::cout << name << "\t" << identity << "\n";
    return 0;
  }

  try {
    const std::pair<const char*, std::string*> flags[] = {{"modes", &modes}, {"degree", &degree}, {"hbar", &hbar},
                                                          {"tol", &tol},     {"seed", &seed},     {"quad", &quad},
                                                          {"cases", &cases}, {"jobs", &jobs}};
    for (const auto& [key, value] : flags)
      if (!value->empty()) cfg.set(key, *value);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot read config file " + config_path);
      cfg = fv::merge_config_file(cfg, in);
    }
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }

  if (suite.empty()) {
    std::cerr << "verify: missing suite name\n" << app.help();
    return 2;
  }

  std::vector<fv::SuiteReport> reports;
  if (suite == "all") {
    reports = fv::run_all(cfg);
  } else {
    try {
      reports.push_back(fv::run_suite(suite, cfg));
    } catch (const std::invalid_argument& e) {
      std::cerr << "verify: " << e.what() << "\n";
      return 2;
    }
  }

  for (const auto& r : reports) {
    std::fprintf(stderr, "%-4s %-24s cases=%-5zu max_residual=%-12.4g %.2fs%s%s\n", r.pass ? "PASS" : "FAIL",
                 r.suite.c_str(), r.cases.size(), r.max_residual, r.wall_seconds, r.error ? "  error: " : "",
                 r.error ? r.error->c_str() : "");
  }

  const fockcalc::json report = fv::report_json(cfg, reports);
  const std::string text = report.dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(report_path, std::ios::binary);
    if (!out || !(out << text)) {
      std::cerr << "verify: cannot write " << report_path << "\n";
      return 2;
    }
  }
  return report["pass"].get<bool>() ? 0 : 1;
}
