#include "eqcov.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "eqcov/covstats.hpp"
#include "eqcov/dataset.hpp"
#include "eqcov/geometry.hpp"
#include "eqcov/mlm.hpp"
#include "eqcov/render.hpp"
#include "eqcov/report.hpp"

struct eqcov_dataset {
  eqcov::GroupedDataset impl;
};

namespace {

thread_local std::string g_last_error;

eqcov_status status_of(eqcov::ErrorCode code) {
  using eqcov::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return EQCOV_E_INVALID;
    case ErrorCode::ParseError: return EQCOV_E_PARSE;
    case ErrorCode::NamedColumnMissing: return EQCOV_E_MISSING_COLUMN;
    case ErrorCode::DegenerateGroup: return EQCOV_E_DEGENERATE_GROUP;
    case ErrorCode::UnknownDataset: return EQCOV_E_UNKNOWN_DATASET;
    case ErrorCode::NotPositiveDefinite: return EQCOV_E_NOT_POSITIVE_DEFINITE;
    case ErrorCode::InsufficientSample: return EQCOV_E_INSUFFICIENT_SAMPLE;
    case ErrorCode::RankDeficient: return EQCOV_E_RANK_DEFICIENT;
    case ErrorCode::DegenerateData: return EQCOV_E_DEGENERATE_DATA;
    case ErrorCode::IoError: return EQCOV_E_IO;
  }
  return EQCOV_E_INVALID;
}

// Run `fn` and translate every failure into a status code; exceptions never
// cross the library boundary.
template <typename Fn>
eqcov_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EQCOV_OK;
  } catch (const eqcov::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EQCOV_E_NOMEM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EQCOV_E_INVALID;
  } catch (...) {
    g_last_error = "unknown error";
    return EQCOV_E_INVALID;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require_args(bool ok, const char* msg) {
  if (!ok) throw eqcov::Error(eqcov::ErrorCode::InvalidArgument, msg);
}

std::vector<std::string> collect(const char* const* items, size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    require_args(items[i] != nullptr, "null variable name");
    out.emplace_back(items[i]);
  }
  return out;
}

enum class ReportFormat { Text, Json };

ReportFormat parse_format(const char* format) {
  require_args(format != nullptr, "format is null");
  const std::string f = format;
  if (f == "text") return ReportFormat::Text;
  if (f == "json") return ReportFormat::Json;
  throw eqcov::Error(eqcov::ErrorCode::InvalidArgument,
                     "unknown report format '" + f +
                         "' (expected text or json)");
}

}  // namespace

extern "C" {

const char* eqcov_last_error(void) { return g_last_error.c_str(); }

const char* eqcov_status_name(eqcov_status status) {
  switch (status) {
    case EQCOV_OK: return "ok";
    case EQCOV_E_INVALID: return "invalid_argument";
    case EQCOV_E_PARSE: return "parse_error";
    case EQCOV_E_MISSING_COLUMN: return "named_column_missing";
    case EQCOV_E_DEGENERATE_GROUP: return "degenerate_group";
    case EQCOV_E_UNKNOWN_DATASET: return "unknown_dataset";
    case EQCOV_E_NOT_POSITIVE_DEFINITE: return "not_positive_definite";
    case EQCOV_E_INSUFFICIENT_SAMPLE: return "insufficient_sample";
    case EQCOV_E_RANK_DEFICIENT: return "rank_deficient";
    case EQCOV_E_DEGENERATE_DATA: return "degenerate_data";
    case EQCOV_E_IO: return "io_error";
    case EQCOV_E_NOMEM: return "out_of_memory";
  }
  return "unknown";
}

void eqcov_string_free(char* s) { delete[] s; }

void eqcov_dataset_free(eqcov_dataset* d) { delete d; }

eqcov_status eqcov_dataset_from_csv(const char* text,
                                    const char* group_column,
                                    const char* const* variables,
                                    size_t n_variables, eqcov_dataset** out) {
  return guarded([&] {
    require_args(text && group_column && out, "null argument");
    require_args(variables != nullptr || n_variables == 0,
                 "null variable list with nonzero count");
    std::vector<std::string> vars;
    const std::vector<std::string>* vars_ptr = nullptr;
    if (n_variables > 0) {
      vars = collect(variables, n_variables);
      vars_ptr = &vars;
    }
    auto d = std::make_unique<eqcov_dataset>();
    d->impl = eqcov::parse_csv(text, group_column, vars_ptr);
    *out = d.release();
  });
}

eqcov_status eqcov_dataset_builtin(const char* name, eqcov_dataset** out) {
  return guarded([&] {
    require_args(name && out, "null argument");
    auto d = std::make_unique<eqcov_dataset>();
    d->impl = eqcov::builtin_dataset(name);
    *out = d.release();
  });
}

eqcov_status eqcov_dataset_select(const eqcov_dataset* d,
                                  const char* const* variables,
                                  size_t n_variables, eqcov_dataset** out) {
  return guarded([&] {
    require_args(d && out && variables, "null argument");
    auto sel = std::make_unique<eqcov_dataset>();
    sel->impl =
        eqcov::select_variables(d->impl, collect(variables, n_variables));
    *out = sel.release();
  });
}

eqcov_status eqcov_dataset_to_csv(const eqcov_dataset* d,
                                  const char* group_column, char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    *out = copy_string(
        eqcov::to_csv(d->impl, group_column ? group_column : "group"));
  });
}

size_t eqcov_dataset_rows(const eqcov_dataset* d) {
  return d ? d->impl.n_rows() : 0;
}
size_t eqcov_dataset_vars(const eqcov_dataset* d) {
  return d ? d->impl.n_vars() : 0;
}
size_t eqcov_dataset_groups(const eqcov_dataset* d) {
  return d ? d->impl.n_groups() : 0;
}

eqcov_status eqcov_boxm_report(const eqcov_dataset* d, double ci_level,
                               const char* format, char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    const ReportFormat fmt = parse_format(format);
    auto result = eqcov::box_m(eqcov::summarize(d->impl), ci_level);
    *out = copy_string(fmt == ReportFormat::Text ? eqcov::to_text(result)
                                                 : eqcov::to_json(result));
  });
}

eqcov_status eqcov_boxm_svg(const eqcov_dataset* d, double ci_level,
                            char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    auto result = eqcov::box_m(eqcov::summarize(d->impl), ci_level);
    *out = copy_string(eqcov::render_logdet_dotplot(result));
  });
}

eqcov_status eqcov_eigstats_report(const eqcov_dataset* d, const char* format,
                                   char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    const ReportFormat fmt = parse_format(format);
    auto stats = eqcov::eig_size_stats_all(eqcov::summarize(d->impl));
    *out = copy_string(fmt == ReportFormat::Text ? eqcov::to_text(stats)
                                                 : eqcov::to_json(stats));
  });
}

eqcov_status eqcov_eigstats_svg(const eqcov_dataset* d, char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    auto stats = eqcov::eig_size_stats_all(eqcov::summarize(d->impl));
    *out = copy_string(eqcov::render_eigstats_grid(stats));
  });
}

eqcov_status eqcov_scree_report(const eqcov_dataset* d, const char* format,
                                char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    const ReportFormat fmt = parse_format(format);
    auto series = eqcov::scree_data(eqcov::summarize(d->impl));
    *out = copy_string(fmt == ReportFormat::Text ? eqcov::to_text(series)
                                                 : eqcov::to_json(series));
  });
}

eqcov_status eqcov_scree_svg(const eqcov_dataset* d, size_t panel_split,
                             char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    auto series = eqcov::scree_data(eqcov::summarize(d->impl));
    *out = copy_string(eqcov::render_scree(series, {}, panel_split));
  });
}

eqcov_status eqcov_ellipses_report(const eqcov_dataset* d, double coverage,
                                   const char* format, char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    const ReportFormat fmt = parse_format(format);
    auto summary = eqcov::summarize(d->impl);
    auto panels = eqcov::centered_pairwise_ellipses(summary, coverage);
    const double radius = eqcov::coverage_radius(coverage);
    *out = copy_string(fmt == ReportFormat::Text
                           ? eqcov::ellipses_to_text(panels, coverage, radius)
                           : eqcov::ellipses_to_json(panels, coverage,
                                                     radius));
  });
}

eqcov_status eqcov_ellipses_svg(const eqcov_dataset* d, double coverage,
                                char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    auto panels =
        eqcov::centered_pairwise_ellipses(eqcov::summarize(d->impl), coverage);
    *out = copy_string(eqcov::render_ellipse_matrix(panels));
  });
}

eqcov_status eqcov_pca_report(const eqcov_dataset* d, const char* format,
                              char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    const ReportFormat fmt = parse_format(format);
    auto proj = eqcov::pca(d->impl);
    *out = copy_string(fmt == ReportFormat::Text
                           ? eqcov::pca_to_text(proj, d->impl.variable_names)
                           : eqcov::pca_to_json(proj,
                                                d->impl.variable_names));
  });
}

eqcov_status eqcov_pca_svg(const eqcov_dataset* d, size_t comp_x,
                           size_t comp_y, double coverage, char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    auto proj = eqcov::pca(d->impl);
    auto summary =
        eqcov::group_cov_in_component_space(d->impl, proj, comp_x, comp_y);
    auto panels = eqcov::centered_pairwise_ellipses(summary, coverage);
    *out = copy_string(eqcov::render_ellipse_matrix(panels));
  });
}

eqcov_status eqcov_manova_report(const eqcov_dataset* d, const char* format,
                                 char** out) {
  return guarded([&] {
    require_args(d && out, "null argument");
    const ReportFormat fmt = parse_format(format);
    auto result = eqcov::manova(d->impl);
    *out = copy_string(fmt == ReportFormat::Text
                           ? eqcov::to_text(result, "manova")
                           : eqcov::to_json(result, "manova"));
  });
}

eqcov_status eqcov_levene_report(const eqcov_dataset* d, const char* center,
                                 const char* format, char** out) {
  return guarded([&] {
    require_args(d && out && center, "null argument");
    const ReportFormat fmt = parse_format(format);
    auto spec = eqcov::CenterSpec::parse(center);
    auto deviations = eqcov::levene_deviations(d->impl, spec);
    auto result = eqcov::manova(deviations);
    *out = copy_string(fmt == ReportFormat::Text
                           ? eqcov::to_text(result, "levene")
                           : eqcov::to_json(result, "levene"));
  });
}

}  // extern "C"
