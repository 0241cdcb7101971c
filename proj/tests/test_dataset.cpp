#include <doctest.h>

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "eqcov/dataset.hpp"
#include "oracles.hpp"

using namespace eqcov;

namespace {

const char* kSmallCsv =
    "group,x,y\n"
    "a,1,2\n"
    "a,2,3\n"
    "b,5,7\n"
    "b,6,8\n"
    "b,7,9\n"
    "a,3,4\n";

double column_mean(const GroupedDataset& d, std::size_t j) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.n_rows(); ++i) acc += d.values(i, j);
  return acc / static_cast<double>(d.n_rows());
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("csv parsing keeps row order and first-appearance group order") {
  GroupedDataset d = parse_csv(kSmallCsv, "group");
  REQUIRE(d.n_rows() == 6);
  REQUIRE(d.n_vars() == 2);
  REQUIRE(d.n_groups() == 2);
  CHECK(d.variable_names == std::vector<std::string>{"x", "y"});
  CHECK(d.group_names == std::vector<std::string>{"a", "b"});
  CHECK(d.group_size(0) == 3);
  CHECK(d.group_size(1) == 3);
  CHECK(d.rows_of_group(0) == std::vector<std::size_t>{0, 1, 5});
  CHECK(d.rows_of_group(1) == std::vector<std::size_t>{2, 3, 4});
  CHECK(d.values(0, 0) == 1.0);
  CHECK(d.values(4, 1) == 9.0);
  CHECK(d.values(5, 0) == 3.0);
}

TEST_CASE("csv parsing handles quotes, embedded separators and CRLF") {
  const char* text =
      "group,\"the, value\"\r\n"
      "\"g one\",1.5\r\n"
      "\"say \"\"hi\"\"\",2.5\r\n"
      "g one,3.5\r\n";
  GroupedDataset d = parse_csv(text, "group");
  REQUIRE(d.n_rows() == 3);
  CHECK(d.variable_names == std::vector<std::string>{"the, value"});
  CHECK(d.group_names ==
        std::vector<std::string>{"g one", "say \"hi\""});
  CHECK(d.group_index == std::vector<std::size_t>{0, 1, 0});
  CHECK(d.values(1, 0) == 2.5);
}

TEST_CASE("csv parsing reports precise failures") {
  // Non-numeric value: row number in the message and in detail().
  try {
    parse_csv("group,x\na,1\nb,oops\n", "group");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.detail() == 2);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }

  CHECK(code_of([] { parse_csv("group,x\na,1\n", "missing"); }) ==
        ErrorCode::NamedColumnMissing);
  CHECK(code_of([] { parse_csv("group,x\n", "group"); }) ==
        ErrorCode::DegenerateGroup);
  CHECK(code_of([] { parse_csv("", "group"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_csv("group,x\na,1,9\n", "group"); }) ==
        ErrorCode::ParseError);  // ragged row
  CHECK(code_of([] { parse_csv("group,x\na,\"1\n", "group"); }) ==
        ErrorCode::ParseError);  // unterminated quote
  CHECK(code_of([] { parse_csv("group,x\na,nan\n", "group"); }) ==
        ErrorCode::ParseError);  // non-finite spelling
  CHECK(code_of([] { parse_csv("group\na\n", "group"); }) ==
        ErrorCode::InvalidArgument);  // no variable columns left
  CHECK(code_of([] { parse_csv("group,x\n,1\n", "group"); }) ==
        ErrorCode::DegenerateGroup);  // empty group label
}

TEST_CASE("explicit variable selection in parse_csv") {
  const std::vector<std::string> want{"y"};
  GroupedDataset d = parse_csv(kSmallCsv, "group", &want);
  REQUIRE(d.n_vars() == 1);
  CHECK(d.variable_names[0] == "y");
  CHECK(d.values(0, 0) == 2.0);

  const std::vector<std::string> missing{"z"};
  CHECK(code_of([&] { parse_csv(kSmallCsv, "group", &missing); }) ==
        ErrorCode::NamedColumnMissing);
  const std::vector<std::string> self{"group"};
  CHECK(code_of([&] { parse_csv(kSmallCsv, "group", &self); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("serialization round-trips exactly") {
  GroupedDataset d = parse_csv(kSmallCsv, "group");
  const std::string text = to_csv(d, "group");
  GroupedDataset d2 = parse_csv(text, "group");
  REQUIRE(d2.n_rows() == d.n_rows());
  REQUIRE(d2.n_vars() == d.n_vars());
  CHECK(d2.group_names == d.group_names);
  CHECK(d2.group_index == d.group_index);
  CHECK(d2.variable_names == d.variable_names);
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    for (std::size_t j = 0; j < d.n_vars(); ++j)
      CHECK(d2.values(i, j) == d.values(i, j));

  // Labels that need quoting survive the round trip too.
  Matrix vals{{1.0}, {2.0}};
  GroupedDataset tricky = make_grouped_dataset(
      std::move(vals), {"a,b", "say \"hi\""}, {"the, var"});
  GroupedDataset back = parse_csv(to_csv(tricky, "g"), "g");
  CHECK(back.group_names == tricky.group_names);
  CHECK(back.variable_names == tricky.variable_names);
}

TEST_CASE("dataset construction validates its input") {
  CHECK(code_of([] {
          make_grouped_dataset(Matrix{{1.0}}, {"a", "b"}, {"x"});
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          make_grouped_dataset(Matrix{{1.0, 2.0}}, {"a"}, {"x", "x"});
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          Matrix m(1, 1);
          m(0, 0) = std::numeric_limits<double>::infinity();
          make_grouped_dataset(std::move(m), {"a"}, {"x"});
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          make_grouped_dataset(Matrix(0, 1), {}, {"x"});
        }) == ErrorCode::DegenerateGroup);
}

TEST_CASE("variable subsetting keeps requested order") {
  GroupedDataset d = parse_csv(kSmallCsv, "group");
  GroupedDataset sub = select_variables(d, {"y", "x"});
  CHECK(sub.variable_names == std::vector<std::string>{"y", "x"});
  CHECK(sub.values(0, 0) == 2.0);
  CHECK(sub.values(0, 1) == 1.0);
  CHECK(sub.group_index == d.group_index);
  CHECK(code_of([&] { select_variables(d, {"nope"}); }) ==
        ErrorCode::NamedColumnMissing);
  CHECK(code_of([&] { select_variables(d, {}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("embedded iris table") {
  GroupedDataset d = builtin_dataset("iris");
  REQUIRE(d.n_rows() == 150);
  REQUIRE(d.n_vars() == 4);
  CHECK(d.variable_names ==
        std::vector<std::string>{"Sepal.Length", "Sepal.Width", "Petal.Length",
                                 "Petal.Width"});
  CHECK(d.group_names ==
        std::vector<std::string>{"setosa", "versicolor", "virginica"});
  for (std::size_t k = 0; k < 3; ++k) CHECK(d.group_size(k) == 50);
  const double want[] = {5.843333333333333, 3.0573333333333332, 3.758,
                         1.1993333333333333};
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(column_mean(d, j) == doctest::Approx(want[j]).epsilon(1e-12));
}

TEST_CASE("embedded skulls table") {
  GroupedDataset d = builtin_dataset("skulls");
  REQUIRE(d.n_rows() == 150);
  REQUIRE(d.n_vars() == 4);
  CHECK(d.variable_names == std::vector<std::string>{"mb", "bh", "bl", "nh"});
  CHECK(d.group_names ==
        std::vector<std::string>{"c4000BC", "c3300BC", "c1850BC", "c200BC",
                                 "cAD150"});
  for (std::size_t k = 0; k < 5; ++k) CHECK(d.group_size(k) == 30);
  const double want[] = {133.97333333333333, 132.54666666666665, 96.46,
                         50.93333333333333};
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(column_mean(d, j) == doctest::Approx(want[j]).epsilon(1e-12));
}

TEST_CASE("embedded wine table") {
  GroupedDataset d = builtin_dataset("wine");
  REQUIRE(d.n_rows() == 178);
  REQUIRE(d.n_vars() == 13);
  CHECK(d.variable_names ==
        std::vector<std::string>{"Alcohol", "MalicAcid", "Ash", "AlcAsh", "Mg",
                                 "Phenols", "Flav", "NonFlavPhenols", "Proa",
                                 "Color", "Hue", "OD", "Proline"});
  CHECK(d.group_names ==
        std::vector<std::string>{"Barolo", "Grignolino", "Barbera"});
  CHECK(d.group_size(0) == 59);
  CHECK(d.group_size(1) == 71);
  CHECK(d.group_size(2) == 48);
  const double want[] = {13.000617977528, 2.336348314607, 2.366516853933,
                         19.494943820225, 99.741573033708, 2.295112359551,
                         2.029269662921, 0.361853932584, 1.590898876404,
                         5.058089882022, 0.957449438202, 2.611685393258,
                         746.893258426966};
  for (std::size_t j = 0; j < 13; ++j)
    CHECK(column_mean(d, j) == doctest::Approx(want[j]).epsilon(1e-10));
}

TEST_CASE("unknown embedded dataset name") {
  CHECK(code_of([] { builtin_dataset("mars"); }) ==
        ErrorCode::UnknownDataset);
  CHECK(builtin_dataset_names() ==
        std::vector<std::string>{"iris", "skulls", "wine"});
}
