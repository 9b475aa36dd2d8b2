// semirfd: batch driver. Reads a JSON config (file or stdin), runs it, and
// writes the JSON report (stdout or file). Exit status follows ExitStatus.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "semirfd/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional approximation toolkit for semigroup operator algebras"};

  std::string          config_path;
  std::string          out_path;
  semirfd::RunOptions  opts;
  app.add_option("--config", config_path, "config file (default: standard input)");
  app.add_option("--out", out_path, "report file (default: standard output)");
  app.add_option("--max-words", opts.max_words, "cap on enumerated words")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--norm-tol", opts.norm_tol, "relative tolerance for norm iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--timing", opts.timing, "record wall time in the report");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(semirfd::ExitStatus::config_error);
  }

  std::string text;
  if (config_path.empty()) {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "semirfd: cannot read " << config_path << "\n";
      return static_cast<int>(semirfd::ExitStatus::config_error);
    }
    text.assign(std::istreambuf_iterator<char>(in), {});
  }

  auto const result = semirfd::execute(text, opts);

  // A path inside the config is used only when --out is absent.
  if (out_path.empty()) {
    try {
      out_path = semirfd::parse_config(text).out.value_or("");
    } catch (std::exception const&) {
      // Unparsable configs report to stdout.
    }
  }
  if (out_path.empty()) {
    std::cout << result.report;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "semirfd: cannot write " << out_path << "\n";
      return static_cast<int>(semirfd::ExitStatus::config_error);
    }
    out << result.report;
  }
  if (result.status != semirfd::ExitStatus::ok) {
    std::cerr << "semirfd: exit status " << static_cast<int>(result.status) << "\n";
  }
  return static_cast<int>(result.status);
}
