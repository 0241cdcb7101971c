// Command-line front end. Talks to the library exclusively through the C
// interface in eqcov.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eqcov.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;   // numeric / data failures from the library
constexpr int kExitUsage = 2;  // bad invocation, missing files, bad flags

struct CommonOpts {
  std::string data;
  std::string group;
  std::string variables;
  std::string output;
  std::string format = "text";
};

struct DatasetHandle {
  eqcov_dataset* get() const { return ptr.get(); }
  std::unique_ptr<eqcov_dataset, void (*)(eqcov_dataset*)> ptr{
      nullptr, eqcov_dataset_free};
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { eqcov_string_free(s); }
};

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kExitUsage;
}

int data_error() {
  std::cerr << eqcov_last_error() << "\n";
  return kExitData;
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

// Group column of each embedded dataset, for validating --group.
const char* builtin_group_column(const std::string& name) {
  if (name == "iris") return "Species";
  if (name == "skulls") return "epoch";
  if (name == "wine") return "Cultivar";
  return nullptr;
}

// Returns kExitOk and fills `handle`, or an exit code.
int load_dataset(const CommonOpts& o, DatasetHandle& handle) {
  std::vector<std::string> var_names;
  std::vector<const char*> var_ptrs;
  if (!o.variables.empty()) {
    var_names = split_csv_list(o.variables);
    for (const auto& v : var_names) {
      if (v.empty()) return usage_error("--variables contains an empty name");
      var_ptrs.push_back(v.c_str());
    }
  }

  eqcov_dataset* raw = nullptr;
  if (o.data.rfind("builtin:", 0) == 0) {
    const std::string name = o.data.substr(8);
    if (!o.group.empty()) {
      const char* expected = builtin_group_column(name);
      if (expected && o.group != expected)
        return usage_error("builtin dataset '" + name +
                           "' is grouped by column '" + expected + "', not '" +
                           o.group + "'");
    }
    eqcov_status st = eqcov_dataset_builtin(name.c_str(), &raw);
    if (st == EQCOV_E_UNKNOWN_DATASET) return usage_error(eqcov_last_error());
    if (st != EQCOV_OK) return data_error();
    if (!var_ptrs.empty()) {
      eqcov_dataset* selected = nullptr;
      st = eqcov_dataset_select(raw, var_ptrs.data(), var_ptrs.size(),
                                &selected);
      eqcov_dataset_free(raw);
      if (st != EQCOV_OK) return data_error();
      raw = selected;
    }
  } else {
    if (o.group.empty())
      return usage_error("--group is required for CSV files");
    std::ifstream in(o.data, std::ios::binary);
    if (!in) return usage_error("cannot open file '" + o.data + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const eqcov_status st = eqcov_dataset_from_csv(
        text.c_str(), o.group.c_str(),
        var_ptrs.empty() ? nullptr : var_ptrs.data(), var_ptrs.size(), &raw);
    if (st != EQCOV_OK) return data_error();
  }
  handle.ptr.reset(raw);
  return kExitOk;
}

// Emit a finished report/figure according to --format / --output.
int emit(const CommonOpts& o, const char* content) {
  if (o.format == "svg") {
    // Enforced before any computation, but kept as a safety net.
    if (o.output.empty())
      return usage_error("--format svg requires --output");
  } else {
    std::cout << content;
  }
  if (!o.output.empty()) {
    std::ofstream out(o.output, std::ios::binary);
    if (!out) return usage_error("cannot write file '" + o.output + "'");
    out << content;
    if (!out.good())
      return usage_error("failed writing file '" + o.output + "'");
  }
  return kExitOk;
}

void add_common_options(CLI::App* cmd, CommonOpts& o, bool figures) {
  cmd->add_option("--data", o.data,
                  "Input: a CSV path or builtin:{iris,skulls,wine}")
      ->required();
  cmd->add_option("--group", o.group,
                  "Name of the column holding group labels");
  cmd->add_option("--variables", o.variables,
                  "Comma-separated variable columns (default: all numeric)");
  cmd->add_option("--output", o.output, "Write the result to this file");
  std::vector<std::string> formats = {"text", "json"};
  if (figures) formats.push_back("svg");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
}

bool in_unit_interval(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Tests and figures for comparing group covariance matrices.\n"
      "Data errors exit with 1; usage errors exit with 2."};
  app.require_subcommand(1);

  CommonOpts boxm_opts, eig_opts, scree_opts, ell_opts, pca_opts, man_opts,
      lev_opts;
  double ci_level = 0.95;
  double ell_coverage = 0.68, pca_coverage = 0.68;
  std::size_t scree_split = 0;
  std::string pca_components = "1,2";
  std::string levene_center = "median";

  CLI::App* c_boxm = app.add_subcommand(
      "boxm", "Equality-of-covariances test with log-determinant intervals");
  add_common_options(c_boxm, boxm_opts, true);
  c_boxm->add_option("--ci-level", ci_level,
                     "Confidence level for log-determinant intervals")
      ->capture_default_str();

  CLI::App* c_eig = app.add_subcommand(
      "eigstats", "Eigenvalue size statistics per group and pooled");
  add_common_options(c_eig, eig_opts, true);

  CLI::App* c_scree = app.add_subcommand(
      "scree", "Log-eigenvalue profiles per group and pooled");
  add_common_options(c_scree, scree_opts, true);
  c_scree->add_option("--split", scree_split,
                      "Split the figure after this dimension")
      ->capture_default_str();

  CLI::App* c_ell = app.add_subcommand(
      "ellipses", "Origin-centered pairwise covariance ellipses");
  add_common_options(c_ell, ell_opts, true);
  c_ell->add_option("--coverage", ell_coverage,
                    "Normal probability coverage of each ellipse")
      ->capture_default_str();

  CLI::App* c_pca = app.add_subcommand(
      "pca", "Principal components of the total covariance");
  add_common_options(c_pca, pca_opts, true);
  c_pca->add_option("--components", pca_components,
                    "Two 1-based component indices for the figure plane")
      ->capture_default_str();
  c_pca->add_option("--coverage", pca_coverage,
                    "Normal probability coverage of each ellipse")
      ->capture_default_str();

  CLI::App* c_man =
      app.add_subcommand("manova", "One-way MANOVA on group means");
  add_common_options(c_man, man_opts, false);

  CLI::App* c_lev = app.add_subcommand(
      "levene", "Dispersion test: MANOVA on absolute deviations");
  add_common_options(c_lev, lev_opts, false);
  c_lev->add_option("--center", levene_center,
                    "median, mean, trimmed, or trimmed:<fraction>")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CommonOpts* opts = nullptr;
  if (c_boxm->parsed()) opts = &boxm_opts;
  if (c_eig->parsed()) opts = &eig_opts;
  if (c_scree->parsed()) opts = &scree_opts;
  if (c_ell->parsed()) opts = &ell_opts;
  if (c_pca->parsed()) opts = &pca_opts;
  if (c_man->parsed()) opts = &man_opts;
  if (c_lev->parsed()) opts = &lev_opts;

  if (opts->format == "svg" && opts->output.empty())
    return usage_error("--format svg requires --output");

  if (c_boxm->parsed() && !in_unit_interval(ci_level))
    return usage_error("--ci-level must lie strictly between 0 and 1");
  if (c_ell->parsed() && !in_unit_interval(ell_coverage))
    return usage_error("--coverage must lie strictly between 0 and 1");
  if (c_pca->parsed() && !in_unit_interval(pca_coverage))
    return usage_error("--coverage must lie strictly between 0 and 1");

  std::size_t comp_x = 0, comp_y = 1;
  if (c_pca->parsed()) {
    const auto parts = split_csv_list(pca_components);
    long a = 0, b = 0;
    char extra = 0;
    if (parts.size() != 2 ||
        std::sscanf(parts[0].c_str(), "%ld%c", &a, &extra) != 1 ||
        std::sscanf(parts[1].c_str(), "%ld%c", &b, &extra) != 1 || a < 1 ||
        b < 1 || a == b)
      return usage_error(
          "--components expects two distinct 1-based indices, e.g. 1,2");
    comp_x = static_cast<std::size_t>(a - 1);
    comp_y = static_cast<std::size_t>(b - 1);
  }

  DatasetHandle data;
  if (const int code = load_dataset(*opts, data); code != kExitOk)
    return code;

  OwnedString result;
  eqcov_status st = EQCOV_OK;
  if (c_boxm->parsed()) {
    st = opts->format == "svg"
             ? eqcov_boxm_svg(data.get(), ci_level, &result.s)
             : eqcov_boxm_report(data.get(), ci_level, opts->format.c_str(),
                                 &result.s);
  } else if (c_eig->parsed()) {
    st = opts->format == "svg"
             ? eqcov_eigstats_svg(data.get(), &result.s)
             : eqcov_eigstats_report(data.get(), opts->format.c_str(),
                                     &result.s);
  } else if (c_scree->parsed()) {
    st = opts->format == "svg"
             ? eqcov_scree_svg(data.get(), scree_split, &result.s)
             : eqcov_scree_report(data.get(), opts->format.c_str(),
                                  &result.s);
  } else if (c_ell->parsed()) {
    st = opts->format == "svg"
             ? eqcov_ellipses_svg(data.get(), ell_coverage, &result.s)
             : eqcov_ellipses_report(data.get(), ell_coverage,
                                     opts->format.c_str(), &result.s);
  } else if (c_pca->parsed()) {
    st = opts->format == "svg"
             ? eqcov_pca_svg(data.get(), comp_x, comp_y, pca_coverage,
                             &result.s)
             : eqcov_pca_report(data.get(), opts->format.c_str(), &result.s);
  } else if (c_man->parsed()) {
    st = eqcov_manova_report(data.get(), opts->format.c_str(), &result.s);
  } else if (c_lev->parsed()) {
    st = eqcov_levene_report(data.get(), levene_center.c_str(),
                             opts->format.c_str(), &result.s);
  }

  if (st != EQCOV_OK) return data_error();
  return emit(*opts, result.s);
}
