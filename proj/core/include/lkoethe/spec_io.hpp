#pragma once

// Matrix and operator spec files, and content digests.
//
// Matrix:   kind = "explicit" | "power_series_infinite" | "power_series_finite" | "expr"
//           levels, dims; alpha.expr or alpha.list; expr (in k, n); entries.
// Operator: kind = "dense"          domain_dims, range_dims, theta = [[T e_1], [T e_2], ...]
//           kind = "rank_one"       i, v, scale
//           kind = "quasi_diagonal" pairs = [[n, sigma, m], ...]

#include <filesystem>
#include <string>
#include <string_view>

#include "lkoethe/koethe.hpp"
#include "lkoethe/operators.hpp"

namespace lkoethe {

KoetheMatrixSpec parse_matrix_spec(std::string_view text);
std::string serialize_matrix_spec(const KoetheMatrixSpec& spec);
// Reads, parses and builds once so that ValidationFailed surfaces here.
KoetheMatrixSpec load_matrix_spec(const std::filesystem::path& path);

OperatorRep parse_operator_spec(std::string_view text);
std::string serialize_operator_spec(const OperatorRep& op);
OperatorRep load_operator_spec(const std::filesystem::path& path);

// Throws InvalidInput when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);
std::string spec_digest(const KoetheMatrixSpec& spec);
std::string spec_digest(const OperatorRep& op);

}  // namespace lkoethe
