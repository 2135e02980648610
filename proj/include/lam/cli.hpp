#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lam {

// Exit codes of run_cli.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_not_identified = 2;

// Dispatches one subcommand. `args` excludes the program name. Reports are
// JSON documents written to `out`; diagnostics and usage go to `err`.
//
//   simulate        --params F --menus M --n K --seed S --out D
//   identify-lab    --ai D1 --human D2 --anchor A [--exact] [--tol T] [--strategy S]
//   identify-field  --ai D --anchor A [--exact] [--tol T] [--root-tol R]
//   check-axioms    --ai D1 --human D2 [--exact] [--tol T] [--strict]
//   fit             --data D --starts K --seed S [--anchor A] [--max-iter I] [--tol-ll L]
//   deception-gap   --lab R1 --field R2
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lam
