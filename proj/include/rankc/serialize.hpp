#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankc/field.hpp"
#include "rankc/minrank.hpp"
#include "rankc/syslang.hpp"
#include "rankc/tensorize.hpp"

namespace rankc {

// All readers throw InputError on malformed structure, unknown kinds, or
// non-canonical values (residues outside [0,p), unreduced fractions, and so
// on); a value read back always re-serializes to the same bytes. Files that
// embed a field report it so callers can refuse mismatches.

nlohmann::json field_to_json(const FieldSpec& spec);
FieldSpec field_from_json(const nlohmann::json& j);

nlohmann::json elem_to_json(const FieldElem& x, const Field& F);
FieldElem elem_from_json(const nlohmann::json& j, const Field& F);

nlohmann::json matrix_to_json(const ConcreteMatrix& M, const Field& F);
std::pair<ConcreteMatrix, FieldSpec> matrix_from_json(const nlohmann::json& j);

nlohmann::json system_to_json(const QuadraticSystem& s);
QuadraticSystem system_from_json(const nlohmann::json& j);

// The matrix file embeds its source system; loading rebuilds the matrix
// from it and requires the stored grid, occurrence lists, and variable
// order to match exactly, so a loaded matrix is always consistent.
nlohmann::json symbolic_matrix_to_json(const SymbolicMatrix& M);
SymbolicMatrix symbolic_matrix_from_json(const nlohmann::json& j);

nlohmann::json tensor_to_json(const Tensor& T, const Field& F);
std::pair<Tensor, FieldSpec> tensor_from_json(const nlohmann::json& j);

struct BundleMeta {
    std::size_t m = 0, n = 0, rank_target = 0;
    std::vector<std::string> slice_vars;
};

nlohmann::json bundle_to_json(const TensorBundle& B);
BundleMeta bundle_from_json(const nlohmann::json& j);

struct LoadedExpansion {
    Expansion expansion;
    FieldSpec field;
    std::uint64_t target_digest = 0;
};

nlohmann::json expansion_to_json(const Expansion& E, const Field& F, std::uint64_t target_digest);
LoadedExpansion expansion_from_json(const nlohmann::json& j);

struct LoadedSlices {
    std::vector<ConcreteMatrix> slices;
    FieldSpec field;
};

// Slice families are validated on load: every member must have rank <= 1.
nlohmann::json slices_to_json(const std::vector<ConcreteMatrix>& S, const Field& F);
LoadedSlices slices_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const AffineSolutionSpace& S, const Field& F);

std::uint64_t fnv1a64(const std::string& bytes);

// Digest of a tensor's canonical serialization; expansions carry it so a
// certificate stays tied to the tensor it was produced for.
std::uint64_t tensor_digest(const Tensor& T, const Field& F);
std::string digest_to_string(std::uint64_t digest);

// Canonical on-disk form: sorted keys, two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);
nlohmann::json parse_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rankc
