#pragma once

#include <iosfwd>
#include <string>

#include "bonusrank/core.hpp"

namespace bonusrank {

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
double parse_double(const std::string& text);  // InputError on garbage

// CSV: header `id,<attr1>,...,<attrd>[,group]`.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv_file(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& dataset);
void write_dataset_csv_file(const std::string& path, const Dataset& dataset);

// One id per line, best first. Blank lines and lines starting with '#' are skipped.
Ranking read_ranking(std::istream& in);
Ranking read_ranking_file(const std::string& path);
void write_ranking(std::ostream& out, const Ranking& ranking);
void write_ranking_file(const std::string& path, const Ranking& ranking);

std::string explanation_to_json(const Explanation& e, int indent = 2);
Explanation explanation_from_json(const std::string& text);
Explanation read_explanation_file(const std::string& path);
void write_explanation_file(const std::string& path, const Explanation& e);

}  // namespace bonusrank
