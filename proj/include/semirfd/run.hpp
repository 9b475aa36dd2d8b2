#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "semirfd/enumeration.hpp"

namespace semirfd {

  enum class ExitStatus : int {
    ok                = 0,
    invariant_failure = 1,
    config_error      = 2,
    resource_limit    = 3,
  };

  //! Flags that apply to every command.
  struct RunOptions {
    std::size_t max_words = default_max_words;
    double      norm_tol  = 1e-9;
    //! Fill the report's "ms" field with wall time; off by default so that
    //! identical configs give byte-identical reports.
    bool timing = false;
  };

  //! A parsed batch configuration. Element and presentation fields stay in
  //! their JSON form until the command knows which monoid they refer to.
  struct RunConfig {
    std::string command;  // enumerate | divisors | fdapprox | coaction | funcalg
    nlohmann::ordered_json raw;
    nlohmann::ordered_json presentation;
    std::optional<int>     L, L_P, L_Q, D;
    nlohmann::ordered_json F;
    //! fdapprox: {"max_length": k, "max_size": m} sweeps every F of at most
    //! m elements of length <= k through the kernel-formula check.
    nlohmann::ordered_json families;
    nlohmann::ordered_json elements;
    nlohmann::ordered_json lcm;
    nlohmann::ordered_json map;
    nlohmann::ordered_json kernel;
    std::optional<int>     variables;
    nlohmann::ordered_json phi;
    std::vector<int>       D_profile;
    int                    zeta_order = 8;
    std::optional<double>  norm_tol;
    std::optional<double>  expect_norm;
    double                 expect_tol = 1e-2;
    int                    samples    = 100;
    std::uint64_t          seed       = 1;
    std::optional<std::string> out;
  };

  //! Throws ParseError on malformed or incomplete configs.
  RunConfig parse_config(std::string_view text);

  struct RunResult {
    ExitStatus  status = ExitStatus::ok;
    std::string report;  // JSON text, newline-terminated
  };

  //! Runs one command with every attached invariant check. Never throws for
  //! bad input: errors become a failed "execution" check and a nonzero status.
  RunResult execute(RunConfig const& config, RunOptions const& opts = {});
  RunResult execute(std::string_view config_text, RunOptions const& opts = {});

  //! Resolves a presentation field: "braid(3)", {"builtin":"raag",...},
  //! {"generators":...,"relations":...} or {"file": path}.
  Presentation resolve_presentation(nlohmann::ordered_json const& spec);

  //! Resolves an element field against a table: "a.b.a" (a word), an integer
  //! n (the n-th power of the only generator), or a list of exponents
  //! (g1^k1 g2^k2 ... in generator order).
  Element resolve_element(EnumerationTable const& table, nlohmann::ordered_json const& spec);

  //! Rounds every float to 12 significant digits so dumps are stable.
  void round_floats(nlohmann::ordered_json& j);

}  // namespace semirfd
