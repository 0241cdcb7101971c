#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "eqcov/numcore.hpp"

namespace eqcov {

// Numeric observations partitioned into named groups. Group order follows
// first appearance in the source; row order is preserved.
struct GroupedDataset {
  Matrix values;                            // n_rows x n_vars
  std::vector<std::size_t> group_index;     // per row, into group_names
  std::vector<std::string> variable_names;  // n_vars
  std::vector<std::string> group_names;     // n_groups

  std::size_t n_rows() const { return values.rows(); }
  std::size_t n_vars() const { return values.cols(); }
  std::size_t n_groups() const { return group_names.size(); }
  std::size_t group_size(std::size_t k) const;
  std::vector<std::size_t> rows_of_group(std::size_t k) const;
};

// Validating constructor used by every producer below.
GroupedDataset make_grouped_dataset(Matrix values,
                                    std::vector<std::string> row_labels,
                                    std::vector<std::string> variable_names);

// RFC 4180 CSV: quoted fields, doubled quotes, CRLF or LF line ends. The
// group column is taken as categorical; variable columns default to every
// remaining column (all of which must parse as numbers).
GroupedDataset parse_csv(std::string_view text, const std::string& group_column,
                         const std::vector<std::string>* variable_columns =
                             nullptr);

std::string to_csv(const GroupedDataset& d,
                   const std::string& group_column = "group");

// Embedded reference datasets: "iris", "skulls", "wine".
GroupedDataset builtin_dataset(const std::string& name);
std::vector<std::string> builtin_dataset_names();

// Restrict to a subset of variables, keeping the given order.
GroupedDataset select_variables(const GroupedDataset& d,
                                const std::vector<std::string>& names);

namespace detail {
const char* iris_csv();
const char* skulls_csv();
const char* wine_csv();
}  // namespace detail

}  // namespace eqcov
