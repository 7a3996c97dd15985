#include "propmeta/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "propmeta/analysis.hpp"
#include "propmeta/csv.hpp"
#include "propmeta/stabilization.hpp"

namespace propmeta::cli {

namespace {

struct Options {
  std::string input = "-";
  std::string out = "stdout";
  std::string transform = "double";
  std::string model = "fixed";
  std::string convention = "invvar";
  double level = 0.95;
  std::string format = "json";
  bool no_diagnostics = false;
  std::string totals;
  std::string grid;
  std::string kinds = "both";
};

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<StudyRecord> read_studies(const Options& o, std::istream& in) {
  if (o.input == "-") return parse_studies(in);
  std::ifstream file(o.input, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open input file '" + o.input + "'");
  return parse_studies(file);
}

AnalysisConfig make_config(const Options& o) {
  AnalysisConfig c;
  c.transform = transform_kind_from_string(o.transform);
  c.model = pooling_model_from_string(o.model);
  c.convention = convention_from_string(o.convention);
  c.level = o.level;
  c.diagnostics_enabled = !o.no_diagnostics;
  if (o.format == "json") c.output_format = OutputFormat::Json;
  else if (o.format == "csv") c.output_format = OutputFormat::Csv;
  else throw DomainError("unknown format '" + o.format + "' (expected json or csv)");
  validate(c);
  return c;
}

// Output goes to a buffer first so a failing run leaves no partial file.
int emit(const Options& o, std::ostream& out, const std::string& body) {
  if (o.out == "stdout" || o.out == "-") {
    out << body;
    return 0;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file '" + o.out + "'");
  file << body;
  return 0;
}

void add_analysis_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "Study CSV (columns events,total[,label]); '-' for stdin");
  cmd->add_option("--transform", o.transform, "single | double")
      ->check(CLI::IsMember({"single", "double"}));
  cmd->add_option("--model", o.model, "fixed | dl")->check(CLI::IsMember({"fixed", "dl"}));
  cmd->add_option("--n-convention", o.convention, "harmonic | invvar | explicit=<N>");
  cmd->add_option("--level", o.level, "Confidence level in (0,1)");
  cmd->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--no-diagnostics", o.no_diagnostics, "Skip the diagnostics checks");
  cmd->add_option("--out", o.out, "Output path or 'stdout'");
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw DomainError("range grid must be start:stop:step");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw DomainError("invalid range grid '" + text + "'");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) grid.push_back(round_sig(start + static_cast<double>(i) * step));
    return grid;
  }
  for (const auto& item : split(text, ',')) grid.push_back(parse_double(item));
  if (grid.empty()) throw DomainError("empty grid");
  return grid;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Meta-analysis of proportions on arcsine scales, with double-arcsine diagnostics",
               "prop-meta"};
  app.require_subcommand(1);
  Options o;

  auto* transform = app.add_subcommand("transform", "Per-study transformed values and variances");
  add_analysis_flags(transform, o);
  auto* pool = app.add_subcommand("pool", "Full pipeline: transform, pool, back-transform, diagnose");
  add_analysis_flags(pool, o);
  auto* diagnose = app.add_subcommand("diagnose", "Run the pipeline and report diagnostics only");
  add_analysis_flags(diagnose, o);

  auto* curves = app.add_subcommand("curves", "Transform curves (CSV) for plotting");
  o.totals = "1,10,100,1000";
  curves->add_option("--n", o.totals, "Comma-separated sample sizes");
  curves->add_option("--p-grid", o.grid, "p values: a,b,c or start:stop:step (default 0:1:0.01)");
  curves->add_option("--out", o.out, "Output path or 'stdout'");

  auto* stabilize = app.add_subcommand("stabilize", "Exact-enumeration variance curves (CSV)");
  stabilize->add_option("--n", o.totals, "Comma-separated sample sizes (default 10,20,50,100,500,1000)");
  stabilize->add_option("--p-grid", o.grid, "p values (default 0.01:0.99:0.01)");
  stabilize->add_option("--transform", o.kinds, "single | double | both")
      ->check(CLI::IsMember({"single", "double", "both"}));
  stabilize->add_option("--out", o.out, "Output path or 'stdout'");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    std::ostringstream body;
    if (app.got_subcommand(curves)) {
      std::vector<double> totals;
      for (const auto& s : split(o.totals, ',')) totals.push_back(parse_double(s));
      const auto grid = o.grid.empty() ? parse_grid("0:1:0.01") : parse_grid(o.grid);
      emit_curves(body, totals, grid);
      return emit(o, out, body.str());
    }
    if (app.got_subcommand(stabilize)) {
      std::vector<std::int64_t> totals;
      if (stabilize->count("--n") == 0) {
        totals = default_totals();
      } else {
        for (const auto& s : split(o.totals, ',')) totals.push_back(std::stoll(s));
      }
      const auto grid = o.grid.empty() ? default_p_grid() : parse_grid(o.grid);
      std::vector<TransformKind> kinds;
      if (o.kinds != "double") kinds.push_back(TransformKind::SingleArcsine);
      if (o.kinds != "single") kinds.push_back(TransformKind::DoubleArcsine);
      emit_stabilization(body, kinds, totals, grid);
      return emit(o, out, body.str());
    }

    const AnalysisConfig config = make_config(o);
    const auto studies = read_studies(o, in);
    if (app.got_subcommand(transform)) {
      write_study_rows(body, make_rows(studies, config.transform), config.transform,
                       config.output_format);
      emit(o, out, body.str());
      return 0;
    }
    auto cfg = config;
    if (app.got_subcommand(diagnose)) cfg.diagnostics_enabled = true;
    const AnalysisReport report = run_analysis(studies, cfg);
    if (app.got_subcommand(diagnose)) {
      write_diagnostics(body, report.diagnostics, cfg.output_format);
    } else {
      write_report(body, report, cfg.output_format);
    }
    emit(o, out, body.str());
    return exit_code(report);
  } catch (const std::exception& e) {
    err << "prop-meta: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace propmeta::cli
