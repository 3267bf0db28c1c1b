// hklat: run lattice scenarios and print reports.
//
// Exit codes: 0 all checks pass (skips allowed), 1 a check failed,
// 2 a check was inconclusive, 3 usage or input error (no report).

#include <iostream>

#include "CLI11.hpp"
#include "hkl/latcli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact lattice computations for hyperkähler fourfolds of K3^[2]-type"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  long bound = 0;
  unsigned jobs = 1;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--bound", bound, "Chamber traversal cap (default 10000)")->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "Threads for vector enumeration")->check(CLI::Range(1u, 256u));

  std::string target;
  auto* run = app.add_subcommand("run", "Run a built-in scenario or a config file");
  run->add_option("scenario", target, "c20, c_m1, c546, discriminants, or a config path")->required();
  auto* list = app.add_subcommand("list", "List built-in scenarios and configs");
  std::string name;
  auto* dump = app.add_subcommand("dump-config", "Print a built-in config (or a normalised config file)");
  dump->add_option("name", name, "Config name or path")->required();
  auto* fixtures = app.add_subcommand("fixtures", "Reprint the bundled matrices and compare with the fixture file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  hkl::search_limits().jobs = jobs;
  if (bound > 0) hkl::search_limits().max_chambers = bound;

  try {
    if (*run) {
      auto report = hkl::run_scenario(target);
      std::cout << hkl::emit_report(report, format == "json" ? hkl::ReportFormat::json : hkl::ReportFormat::text);
      return report.exit_code();
    }
    if (*list) {
      std::cout << "scenarios:";
      for (auto& s : hkl::builtin_scenarios()) std::cout << ' ' << s;
      std::cout << "\nconfigs:";
      for (auto& s : hkl::builtin_config_names()) std::cout << ' ' << s << (s == "c_nonsyz" ? " (unconfigured)" : "");
      std::cout << '\n';
      return 0;
    }
    if (*dump) {
      auto names = hkl::builtin_config_names();
      if (std::find(names.begin(), names.end(), name) != names.end())
        std::cout << hkl::builtin_config_text(name);
      else
        std::cout << hkl::dump_config(hkl::load_config(name));
      return 0;
    }
    if (*fixtures) {
      auto got = hkl::reprint_fixtures();
      std::cout << got;
      return got == hkl::fixture_text() ? 0 : 1;
    }
  } catch (const hkl::Error& e) {
    std::cerr << "hklat: " << hkl::to_string(e.code()) << " error: " << e.what() << '\n';
    return 3;
  }
  return 3;
}
