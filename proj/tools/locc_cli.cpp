// locc_cli <command> [file] [--tolerance eps] [--seed n] [--rounds n] [--output path] [--timings]
//
// Reads a set document from `file` (or stdin), writes the JSON report to
// stdout or --output. Exit codes: 0 ok, 1 bad input, 2 verification failed.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "locc/cli.hpp"

namespace {

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LOCC copying and discrimination of maximally entangled sets"};
  std::string command;
  std::string input;
  std::string output;
  double tolerance = 0.0;
  locc::cli::Flags flags;

  app.add_option("command", command, "classify, copy, discriminate, choi, channel-copy, distill, ecc, qkd, lemma-scan")
      ->required()
      ->check(CLI::IsMember(locc::cli::command_names()));
  app.add_option("file", input, "set document (default: stdin)");
  auto* tol_opt = app.add_option("--tolerance", tolerance, "numerical tolerance, overrides the document");
  app.add_option("--seed", flags.seed, "seed for randomized commands");
  app.add_option("--rounds", flags.rounds, "rounds for qkd");
  app.add_option("--output,-o", output, "write the report here instead of stdout");
  app.add_flag("--timings", flags.timings, "add wall-clock timings to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : locc::cli::kExitInput;
  }
  if (*tol_opt) flags.tolerance = tolerance;

  std::string text;
  if (input.empty() || input == "-") {
    text = read_all(std::cin);
  } else {
    std::ifstream in(input);
    if (!in) {
      std::cerr << "error: cannot open " << input << "\n";
      return locc::cli::kExitInput;
    }
    text = read_all(in);
  }

  std::string diagnostics;
  const auto result = locc::cli::run_text(command, text, flags, diagnostics);
  if (result.exit_code == locc::cli::kExitInput) {
    std::cerr << "error: " << diagnostics << "\n";
    return result.exit_code;
  }

  const std::string body = locc::cli::serialize(result.report);
  if (output.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return locc::cli::kExitInput;
    }
    out << body;
  }
  if (result.exit_code == locc::cli::kExitVerification) std::cerr << "verification failed\n";
  return result.exit_code;
}
