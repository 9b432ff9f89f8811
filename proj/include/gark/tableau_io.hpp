#pragma once

// JSON (de)serialization of GARK tableaus.
//
// {
//   "name": "douglas",
//   "num_partitions": 3,
//   "nonstiff_partition": true,
//   "stage_counts": [1, 2, 2],
//   "blocks": {"0,0": [[0]], "0,1": [[0, 0]], ...},
//   "weights": {"0": [1], "1": [0.5, 0.5], ...},
//   "stage_times": {"0": [0], ...}
// }
//
// Keys use partition labels (0 for the nonstiff term, stiff terms from 1).
// `nonstiff_partition` and `stage_times` are optional. Numbers are written
// with 17 significant digits.

#include <string>

#include "gark/tableau.hpp"

namespace gark {

std::string tableau_to_json(const GarkTableau<double>& t);

GarkTableau<double> tableau_from_json(const std::string& text);

GarkTableau<double> read_tableau_file(const std::string& path);

void write_tableau_file(const GarkTableau<double>& t, const std::string& path);

}  // namespace gark
