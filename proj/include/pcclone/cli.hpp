#pragma once

// Command-line front end: table, sweep, verify and mub subcommands writing
// CSV or JSON. Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcclone/audit.hpp"
#include "pcclone/cloner.hpp"
#include "pcclone/optimize.hpp"
#include "pcclone/states.hpp"

namespace pcclone::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

enum class Format { csv, json };

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kMaxD = 64;

using json = nlohmann::ordered_json;

/// 17 significant digits, enough to round-trip any double.
inline std::string fmt_real(real x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline const char* format_name(Format f) { return f == Format::csv ? "csv" : "json"; }

struct TableOptions {
  std::size_t d_min = 2;
  std::size_t d_max = 8;
  Format format = Format::csv;
};

struct SweepOptions {
  std::size_t d = 2;
  std::size_t points = 101;
  Format format = Format::csv;
};

struct VerifyOptions {
  std::size_t d_max = 8;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  Format format = Format::json;
};

struct MubOptions {
  std::size_t d = 3;
  Format format = Format::csv;
};

namespace detail {

inline void write_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

inline int usage(std::ostream& err, const std::string& msg) {
  err << "error: " << msg << '\n';
  return kUsageError;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct TableRow {
  std::size_t d;
  real alpha;
  real beta;
  real f_optimal;
  real f_uqcm;
  real eta;
};

inline TableRow table_row(std::size_t d) {
  const auto p = optimal_params(d);
  return {d, p.alpha, p.beta, optimal_fidelity(d), uqcm_fidelity(d), shrink_factor(d, p.alpha, p.beta)};
}

inline int cmd_table(const TableOptions& o, std::ostream& out, std::ostream& err) {
  if (o.d_min < 2 || o.d_min > o.d_max || o.d_max > kMaxD)
    return detail::usage(err, "table requires 2 <= d-min <= d-max <= 64");
  std::vector<TableRow> rows;
  for (std::size_t d = o.d_min; d <= o.d_max; ++d) rows.push_back(table_row(d));

  if (o.format == Format::csv) {
    out << "d,alpha,beta,f_optimal,f_uqcm,eta\n";
    for (const auto& r : rows)
      out << r.d << ',' << fmt_real(r.alpha) << ',' << fmt_real(r.beta) << ',' << fmt_real(r.f_optimal) << ','
          << fmt_real(r.f_uqcm) << ',' << fmt_real(r.eta) << '\n';
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = {{"name", "table"}, {"d_min", o.d_min}, {"d_max", o.d_max}, {"format", "json"}};
    doc["rows"] = json::array();
    for (const auto& r : rows)
      doc["rows"].push_back({{"d", r.d},
                             {"alpha", r.alpha},
                             {"beta", r.beta},
                             {"f_optimal", r.f_optimal},
                             {"f_uqcm", r.f_uqcm},
                             {"eta", r.eta}});
    detail::write_json(out, doc);
  }
  return kSuccess;
}

inline int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  if (o.d < 2 || o.d > kMaxD) return detail::usage(err, "sweep requires 2 <= d <= 64");
  if (o.points < 3) return detail::usage(err, "sweep requires --points >= 3");
  const auto t = sweep_alpha(o.d, o.points);

  if (o.format == Format::csv) {
    out << "alpha,beta,f\n";
    for (const auto& r : t.rows) out << fmt_real(r.alpha) << ',' << fmt_real(r.beta) << ',' << fmt_real(r.f) << '\n';
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = {{"name", "sweep"}, {"d", o.d}, {"points", o.points}, {"format", "json"}};
    doc["argmax_alpha"] = t.argmax_alpha;
    doc["max_f"] = t.max_f;
    doc["rows"] = json::array();
    for (const auto& r : t.rows) doc["rows"].push_back({{"alpha", r.alpha}, {"beta", r.beta}, {"f", r.f}});
    detail::write_json(out, doc);
  }
  return kSuccess;
}

inline void write_audit(const AuditReport& report, const VerifyOptions& o, std::ostream& out) {
  if (o.format == Format::csv) {
    out << "name,d_min,d_max,passed,residual,tolerance\n";
    for (const auto& c : report.checks)
      out << c.name << ',' << c.d_min << ',' << c.d_max << ',' << (c.passed ? "true" : "false") << ','
          << fmt_real(c.residual) << ',' << fmt_real(c.tolerance) << '\n';
    return;
  }
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = {
      {"name", "verify"}, {"d_max", o.d_max}, {"trials", o.trials}, {"seed", o.seed}, {"format", "json"}};
  doc["seed"] = report.seed;
  doc["overall"] = report.overall;
  doc["rows"] = json::array();
  for (const auto& c : report.checks) {
    json row = {{"name", c.name},         {"d_min", c.d_min},         {"d_max", c.d_max},
                {"passed", c.passed},     {"residual", c.residual},   {"tolerance", c.tolerance}};
    if (!c.error.empty()) row["error"] = c.error;
    doc["rows"].push_back(std::move(row));
  }
  detail::write_json(out, doc);
}

inline int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err, const AuditHooks& hooks = {}) {
  if (o.d_max < 2 || o.d_max > kMaxD) return detail::usage(err, "verify requires 2 <= d-max <= 64");
  if (o.trials < 1) return detail::usage(err, "verify requires --trials >= 1");
  const auto report = run_audit(o.d_max, o.trials, o.seed, hooks);
  write_audit(report, o, out);
  if (!report.overall) {
    for (const auto& c : report.checks)
      if (!c.passed) err << "FAILED " << c.name << " residual " << fmt_real(c.residual) << '\n';
    return kVerificationFailed;
  }
  return kSuccess;
}

struct MubRecord {
  std::string record;  // "unbiased_residual" or "fidelity"
  std::string basis_a;
  std::string basis_b;
  std::string state;
  real value;
};

/// Pairwise unbiasedness residuals over the standard basis and the d
/// constructed bases, then the simulated optimal-cloner fidelity on every
/// constructed basis state.
inline std::vector<MubRecord> mub_records(std::size_t d) {
  std::vector<Basis> bases{standard_basis(d)};
  std::vector<std::string> names{"standard"};
  for (std::size_t l = 0; l < d; ++l) {
    bases.push_back(mub_basis(d, l));
    names.push_back(std::to_string(l));
  }
  std::vector<MubRecord> out;
  for (std::size_t x = 0; x < bases.size(); ++x)
    for (std::size_t y = x + 1; y < bases.size(); ++y)
      out.push_back({"unbiased_residual", names[x], names[y], "", unbiasedness_residual(bases[x], bases[y])});

  const auto p = optimal_params(d);
  const auto m = build_machine(d, p.alpha, p.beta);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t t = 0; t < d; ++t) {
      const Ket& psi = bases[l + 1][t];
      out.push_back({"fidelity", names[l + 1], "", std::to_string(t), fidelity_pure(psi, clone_single(m, psi))});
    }
  return out;
}

inline int cmd_mub(const MubOptions& o, std::ostream& out, std::ostream& err) {
  if (o.d == 2 || !is_prime(o.d))
    return detail::usage(err, "mub requires an odd prime d (the construction does not cover d = 2 or composite d)");
  if (o.d > kSimulationDMax)
    return detail::usage(err, "mub simulates the cloner on every basis state and is limited to d <= " +
                                  std::to_string(kSimulationDMax));
  const auto records = mub_records(o.d);

  if (o.format == Format::csv) {
    out << "record,basis_a,basis_b,state,value\n";
    for (const auto& r : records)
      out << r.record << ',' << r.basis_a << ',' << r.basis_b << ',' << r.state << ',' << fmt_real(r.value) << '\n';
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = {{"name", "mub"}, {"d", o.d}, {"format", "json"}};
    doc["optimal_fidelity"] = optimal_fidelity(o.d);
    doc["rows"] = json::array();
    for (const auto& r : records)
      doc["rows"].push_back({{"record", r.record},
                             {"basis_a", r.basis_a},
                             {"basis_b", r.basis_b},
                             {"state", r.state},
                             {"value", r.value}});
    detail::write_json(out, doc);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

/// Parses argv and dispatches. Output goes to `out` unless --output is given.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-covariant qudit cloning: fidelity tables, sweeps, MUB checks and verification", "pcclone"};
  app.require_subcommand(1);

  const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
  std::string output_path;

  TableOptions table;
  auto* table_cmd = app.add_subcommand("table", "Optimal and universal fidelities per dimension");
  table_cmd->add_option("--d-min", table.d_min, "Smallest dimension")->capture_default_str();
  table_cmd->add_option("--d-max", table.d_max, "Largest dimension")->capture_default_str();
  table_cmd->add_option("--format", table.format, "csv|json")->transform(CLI::CheckedTransformer(formats));
  table_cmd->add_option("--output", output_path, "Write to PATH instead of standard output");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Fidelity along alpha in [0, 1]");
  sweep_cmd->add_option("--d", sweep.d, "Dimension")->required();
  sweep_cmd->add_option("--points", sweep.points, "Grid points")->capture_default_str();
  sweep_cmd->add_option("--format", sweep.format, "csv|json")->transform(CLI::CheckedTransformer(formats));
  sweep_cmd->add_option("--output", output_path, "Write to PATH instead of standard output");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the full verification suite");
  verify_cmd->add_option("--d-max", verify.d_max, "Largest dimension")->capture_default_str();
  verify_cmd->add_option("--trials", verify.trials, "Random samples per dimension")->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Master seed")->capture_default_str();
  verify_cmd->add_option("--format", verify.format, "csv|json")->transform(CLI::CheckedTransformer(formats));
  verify_cmd->add_option("--output", output_path, "Write to PATH instead of standard output");

  MubOptions mub;
  auto* mub_cmd = app.add_subcommand("mub", "Unbiasedness and cloning fidelity of the prime-dimension MUBs");
  mub_cmd->add_option("--d", mub.d, "Odd prime dimension")->required();
  mub_cmd->add_option("--format", mub.format, "csv|json")->transform(CLI::CheckedTransformer(formats));
  mub_cmd->add_option("--output", output_path, "Write to PATH instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsageError;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!output_path.empty()) {
    file.open(output_path, std::ios::binary | std::ios::trunc);
    if (!file) return detail::usage(err, "cannot open output file " + output_path);
    sink = &file;
  }

  try {
    if (*table_cmd) return cmd_table(table, *sink, err);
    if (*sweep_cmd) return cmd_sweep(sweep, *sink, err);
    if (*verify_cmd) return cmd_verify(verify, *sink, err);
    if (*mub_cmd) return cmd_mub(mub, *sink, err);
  } catch (const std::invalid_argument& e) {
    return detail::usage(err, e.what());
  }
  return detail::usage(err, "no subcommand");
}

}  // namespace pcclone::cli
