#include "eqcov/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace eqcov {

namespace {

// Split CSV text into records of fields per RFC 4180. Accepts LF and CRLF
// line endings; a trailing newline does not create an empty record.
std::vector<std::vector<std::string>> split_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;  // current record has content (field chars or separators)

  std::size_t i = 0;
  const std::size_t n = text.size();
  auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(fields));
    fields.clear();
    any = false;
  };

  while (i < n) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field += '"';
          i += 2;
        } else {
          quoted = false;
          ++i;
        }
      } else {
        field += ch;
        ++i;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty())
          throw Error(ErrorCode::ParseError,
                      "quote inside unquoted field (record " +
                          std::to_string(records.size() + 1) + ")");
        quoted = true;
        any = true;
        ++i;
        break;
      case ',':
        end_field();
        any = true;
        ++i;
        break;
      case '\r':
        if (i + 1 < n && text[i + 1] == '\n') {
          if (any || !field.empty() || !fields.empty()) end_record();
          i += 2;
        } else {
          field += ch;  // lone CR is data
          ++i;
        }
        break;
      case '\n':
        if (any || !field.empty() || !fields.empty()) end_record();
        ++i;
        break;
      default:
        field += ch;
        any = true;
        ++i;
    }
  }
  if (quoted)
    throw Error(ErrorCode::ParseError, "unterminated quoted field at end of input");
  if (any || !field.empty() || !fields.empty()) end_record();
  return records;
}

double parse_number(const std::string& s, std::size_t data_row,
                    const std::string& column) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // Reject empty fields, trailing garbage, and non-finite spellings so that
  // every stored value is a finite double.
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0') || !std::isfinite(v))
    throw Error(ErrorCode::ParseError,
                "value '" + s + "' in column '" + column + "' (data row " +
                    std::to_string(data_row) + ") is not numeric",
                static_cast<long>(data_row));
  return v;
}

std::string csv_escape(const std::string& s) {
  const bool needs =
      s.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::size_t GroupedDataset::group_size(std::size_t k) const {
  std::size_t n = 0;
  for (std::size_t g : group_index) n += (g == k);
  return n;
}

std::vector<std::size_t> GroupedDataset::rows_of_group(std::size_t k) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < group_index.size(); ++i)
    if (group_index[i] == k) rows.push_back(i);
  return rows;
}

GroupedDataset make_grouped_dataset(Matrix values,
                                    std::vector<std::string> row_labels,
                                    std::vector<std::string> variable_names) {
  if (values.rows() != row_labels.size())
    throw Error(ErrorCode::InvalidArgument,
                "row label count does not match row count");
  if (values.cols() != variable_names.size())
    throw Error(ErrorCode::InvalidArgument,
                "variable name count does not match column count");
  if (values.rows() == 0)
    throw Error(ErrorCode::DegenerateGroup, "dataset has no data rows");
  if (values.cols() == 0)
    throw Error(ErrorCode::InvalidArgument, "dataset has no variables");
  for (double v : values.data())
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument,
                  "dataset contains a non-finite value");
  {
    auto sorted = variable_names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::InvalidArgument, "duplicate variable name");
  }

  GroupedDataset d;
  d.values = std::move(values);
  d.variable_names = std::move(variable_names);
  d.group_index.reserve(row_labels.size());
  std::map<std::string, std::size_t> seen;
  for (auto& label : row_labels) {
    if (label.empty())
      throw Error(ErrorCode::DegenerateGroup, "empty group label");
    auto it = seen.find(label);
    if (it == seen.end()) {
      it = seen.emplace(label, d.group_names.size()).first;
      d.group_names.push_back(label);
    }
    d.group_index.push_back(it->second);
  }
  return d;
}

GroupedDataset parse_csv(std::string_view text, const std::string& group_column,
                         const std::vector<std::string>* variable_columns) {
  auto records = split_records(text);
  if (records.empty())
    throw Error(ErrorCode::ParseError, "input has no header record");

  const auto& header = records.front();
  auto col_of = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw Error(ErrorCode::NamedColumnMissing,
                  "column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t group_col = col_of(group_column);
  std::vector<std::size_t> var_cols;
  std::vector<std::string> var_names;
  if (variable_columns) {
    if (variable_columns->empty())
      throw Error(ErrorCode::InvalidArgument, "no variable columns requested");
    for (const auto& name : *variable_columns) {
      if (name == group_column)
        throw Error(ErrorCode::InvalidArgument,
                    "group column '" + name + "' requested as a variable");
      var_cols.push_back(col_of(name));
      var_names.push_back(name);
    }
  } else {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j == group_col) continue;
      var_cols.push_back(j);
      var_names.push_back(header[j]);
    }
    if (var_cols.empty())
      throw Error(ErrorCode::InvalidArgument,
                  "header has no variable columns besides '" + group_column +
                      "'");
  }

  const std::size_t n_rows = records.size() - 1;
  if (n_rows == 0)
    throw Error(ErrorCode::DegenerateGroup, "dataset has no data rows");
  Matrix values(n_rows, var_cols.size());
  std::vector<std::string> labels;
  labels.reserve(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto& rec = records[r + 1];
    if (rec.size() != header.size())
      throw Error(ErrorCode::ParseError,
                  "data row " + std::to_string(r + 1) + " has " +
                      std::to_string(rec.size()) + " fields, header has " +
                      std::to_string(header.size()),
                  static_cast<long>(r + 1));
    labels.push_back(rec[group_col]);
    for (std::size_t j = 0; j < var_cols.size(); ++j)
      values(r, j) = parse_number(rec[var_cols[j]], r + 1, var_names[j]);
  }
  return make_grouped_dataset(std::move(values), std::move(labels),
                              std::move(var_names));
}

std::string to_csv(const GroupedDataset& d, const std::string& group_column) {
  std::string out = csv_escape(group_column);
  for (const auto& name : d.variable_names) out += "," + csv_escape(name);
  out += '\n';
  char buf[40];
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    out += csv_escape(d.group_names[d.group_index[i]]);
    for (std::size_t j = 0; j < d.n_vars(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", d.values(i, j));
      out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

GroupedDataset builtin_dataset(const std::string& name) {
  if (name == "iris") return parse_csv(detail::iris_csv(), "Species");
  if (name == "skulls") return parse_csv(detail::skulls_csv(), "epoch");
  if (name == "wine") return parse_csv(detail::wine_csv(), "Cultivar");
  throw Error(ErrorCode::UnknownDataset,
              "unknown builtin dataset '" + name + "'");
}

std::vector<std::string> builtin_dataset_names() {
  return {"iris", "skulls", "wine"};
}

GroupedDataset select_variables(const GroupedDataset& d,
                                const std::vector<std::string>& names) {
  if (names.empty())
    throw Error(ErrorCode::InvalidArgument, "no variables selected");
  std::vector<std::size_t> cols;
  for (const auto& name : names) {
    auto it = std::find(d.variable_names.begin(), d.variable_names.end(), name);
    if (it == d.variable_names.end())
      throw Error(ErrorCode::NamedColumnMissing,
                  "variable '" + name + "' not found");
    cols.push_back(static_cast<std::size_t>(it - d.variable_names.begin()));
  }
  Matrix values(d.n_rows(), cols.size());
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      values(i, j) = d.values(i, cols[j]);
  std::vector<std::string> labels;
  labels.reserve(d.n_rows());
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    labels.push_back(d.group_names[d.group_index[i]]);
  return make_grouped_dataset(std::move(values), std::move(labels), names);
}

}  // namespace eqcov
