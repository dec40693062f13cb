#pragma once

// Command-line front end. run() is the whole program minus main, so tests
// can drive it with string streams.
//
// Exit codes: 0 ok, 1 parse/schema error, 2 refusal or validation failure,
// 3 strict-mode certification failure, 4 internal invariant breach.

#include "dhwalk/classify.hpp"
#include "dhwalk/errors.hpp"
#include "dhwalk/io.hpp"
#include "dhwalk/walk.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace dhwalk::cli {

enum ExitCode : int { ok = 0, parse_failure = 1, refused = 2, uncertified = 3, internal = 4 };

namespace detail {

inline int write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return refused;
  }
  f << text;
  return ok;
}

inline int cmd_validate(const std::string& file, std::ostream& out) {
  const auto data = load_scenario(file);
  const auto report = validate_structure(data);
  std::optional<IsolatedValueCheck> isolated;
  if (data.all_points()) isolated = isolated_value_lattice_check(data);
  out << validation_text(report, isolated);
  const bool pass = report.ok() && (!isolated || isolated->status != CheckStatus::fail);
  return pass ? ok : refused;
}

inline int cmd_walk(const std::string& file, const std::string& format, bool strict, std::ostream& out, std::ostream& err) {
  const auto data = load_scenario(file);
  WalkTrace trace;
  try {
    trace = run_walk(data);
  } catch (const InvariantBreach&) {
    throw;
  } catch (const Error& e) {
    err << "refusal: " << e.kind() << ": " << e.what() << "\n";
    return refused;
  }
  out << (format == "csv" ? trace_csv(trace) : trace_text(trace));
  if (!trace.final_report->pass) {
    err << "refusal: final check failed at " << to_string(trace.final_report->value) << ": "
        << trace.final_report->failures.front() << "\n";
    return refused;
  }
  if (strict) {
    const auto c = certify(trace);
    if (c.level != CertificationLevel::certified) {
      err << "strict: walk is uncertified: " << c.reason << "\n";
      return uncertified;
    }
  }
  return ok;
}

inline int cmd_classify(const std::string& file, const std::string& against, std::ostream& out) {
  const auto data = load_scenario(file);
  if (!against.empty()) {
    const auto other = load_scenario(against);
    const auto w = weak_classification_check(data, other);
    out << weak_text(w);
    return w.verdict == WeakVerdict::isomorphic_certified ? ok : refused;
  }
  const auto result = classify(data);
  out << certificate_text(result);
  return result.ok() ? ok : refused;
}

inline int cmd_profile(const std::string& file, std::size_t samples, const std::string& emit, const std::string& output,
                       std::ostream& out, std::ostream& err) {
  const auto data = load_scenario(file);
  WalkTrace trace;
  try {
    trace = run_walk(data);
  } catch (const InvariantBreach&) {
    throw;
  } catch (const Error& e) {
    err << "refusal: " << e.kind() << ": " << e.what() << "\n";
    return refused;
  }
  const auto s = dh_profile(trace, samples);
  const std::string text = emit == "csv" ? profile_csv(s) : emit == "svg" ? profile_svg(trace, s) : profile_text(s);
  if (!output.empty()) return write_file(output, text, err);
  out << text;
  return ok;
}

inline int cmd_bootstrap(const std::string& file, const std::string& output, std::ostream& out, std::ostream& err) {
  const auto data = load_scenario(file);
  FixedPointData full;
  try {
    full = small_data_bootstrap(data);
  } catch (const InvariantBreach&) {
    throw;
  } catch (const Error& e) {
    err << "refusal: bootstrap: " << e.what() << "\n";
    return refused;
  }
  const auto text = serialize_scenario(full);
  if (!output.empty()) return write_file(output, text, err);
  out << text;
  return ok;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wall-crossing walks for semi-free circle actions on 6-manifolds", "dhwalk"};
  app.require_subcommand(1);

  std::string file, against, format = "text", emit = "csv", output;
  bool strict = false;
  std::size_t samples = 50;
  int k = 0;

  auto* validate = app.add_subcommand("validate", "structural checks and the isolated value check");
  validate->add_option("file", file, "scenario JSON")->required();

  auto* walk = app.add_subcommand("walk", "run the walk and print its trace");
  walk->add_option("file", file, "scenario JSON")->required();
  walk->add_option("--trace", format, "trace format")->check(CLI::IsMember({"text", "csv"}));
  walk->add_flag("--strict", strict, "exit 3 when any interval is uncertified");

  auto* classify_cmd = app.add_subcommand("classify", "emit a classification certificate or a refusal");
  classify_cmd->add_option("file", file, "scenario JSON")->required();
  classify_cmd->add_option("--against", against, "second scenario for the weak classification check");

  auto* profile = app.add_subcommand("dh-profile", "tabulate or plot the reduced volume");
  profile->add_option("file", file, "scenario JSON")->required();
  profile->add_option("--samples", samples, "number of samples")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  profile->add_option("--emit", emit, "output format")->check(CLI::IsMember({"csv", "svg", "text"}));
  profile->add_option("-o,--output", output, "write to a file instead of stdout");

  auto* lattice = app.add_subcommand("lattice", "lattice utilities");
  lattice->require_subcommand(1);
  auto* exc = lattice->add_subcommand("exc", "list exceptional classes of CP2#k");
  exc->add_option("-k", k, "number of blow-ups")->required()->check(CLI::Range(0, 8));

  auto* bootstrap = app.add_subcommand("bootstrap", "fill in Euler classes from small data");
  bootstrap->add_option("file", file, "scenario JSON")->required();
  bootstrap->add_option("-o,--output", output, "output file (stdout if omitted)");

  auto* facts = app.add_subcommand("facts", "print the rigidity facts with citations");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : parse_failure;
  }

  try {
    if (*validate) return detail::cmd_validate(file, out);
    if (*walk) return detail::cmd_walk(file, format, strict, out, err);
    if (*classify_cmd) return detail::cmd_classify(file, against, out);
    if (*profile) return detail::cmd_profile(file, samples, emit, output, out, err);
    if (*bootstrap) return detail::cmd_bootstrap(file, output, out, err);
    if (*exc) {
      out << exceptional_text(k);
      return ok;
    }
    if (*facts) {
      out << facts_table();
      return ok;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return parse_failure;
  } catch (const InvariantBreach& e) {
    err << "internal error: " << e.what() << "\n";
    return internal;
  } catch (const Error& e) {
    err << "refusal: " << e.kind() << ": " << e.what() << "\n";
    return refused;
  }
  return parse_failure;
}

}  // namespace dhwalk::cli
