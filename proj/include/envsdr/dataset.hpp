#pragma once

#include <string>
#include <vector>

#include "envsdr/numeric.hpp"

namespace envsdr {

enum class Role { RESPONSE, COVARIATE, AUXILIARY, IGNORE };

struct ColumnSpec {
    std::string name;
    Role role = Role::IGNORE;
    bool zero_as_missing = false;
};

struct Schema {
    std::vector<ColumnSpec> columns;  // matched to the file by header name
};

struct DataSet {
    Vector y;
    Matrix x;
    Matrix w;  // zero columns when no auxiliary variable
    std::vector<std::string> x_names;
    std::vector<std::string> w_names;
    std::string y_name;
    int n = 0;
    int dropped_rows = 0;
};

// Header row required; comma separated; '.' decimal point. A cell that is
// empty or "NA", or zero in a zero_as_missing column, marks the row missing
// and the row is dropped (count reported). Any other non-numeric cell in a
// used column is a ParseError naming the 1-based file line.
DataSet ingest_csv(const std::string& path, const Schema& schema);

// The standard reconstruction of the diabetes screening table: response =
// outcome; auxiliary = diabetes pedigree function; covariates = pregnancies,
// glucose, blood pressure, skin thickness, insulin, BMI, age. Zeros are
// physiologically impossible for glucose, blood pressure, skin thickness,
// insulin and BMI, so those are zero_as_missing; that filter keeps 392 rows.
Schema pima_schema();

// Column-per-series CSV with 17 significant digits so values round-trip.
void write_csv(const std::string& path, const std::vector<std::string>& names,
               const std::vector<Vector>& columns);

}  // namespace envsdr
