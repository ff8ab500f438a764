#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graded.hpp"
#include "koszul.hpp"
#include "lab.hpp"

namespace kpk {

/// Parsed form of the self-describing instance format (schema_version 1).
/// Exponent vectors are little-endian by variable index; matrices are
/// row-major integer grids with entries in [0, p^k); no floating point.
struct InstanceFile {
    enum class ModuleType { elementary, p_monomial_quotient, graded };

    std::uint32_t schema_version = 1;
    std::uint32_t p = 2;
    std::uint32_t k = 1;
    std::uint32_t n = 1;
    std::string backend = "finite-length"; // or "graded"
    ModuleType module_type = ModuleType::elementary;

    // elementary
    std::vector<std::uint32_t> exponents;
    std::vector<std::vector<std::vector<std::uint32_t>>> actions; // list of row-major grids
    std::vector<std::size_t> sequence_indices;                    // into actions / variables

    // p-monomial-quotient
    PMonomialIdeal monomial;

    // graded
    std::vector<int> row_degrees;
    std::vector<int> col_degrees;
    std::vector<std::vector<Polynomial>> graded_entries; // rows x cols
    std::vector<Polynomial> sequence_polys;

    CoeffRing ring() const { return CoeffRing(p, k); }
};

/// Throws ParseError with a field/position diagnostic on malformed input.
InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::string& path);
std::string serialize_instance(const InstanceFile& f); // canonical, round-trips

/// Validated domain objects. Throws on backend mismatch.
ActionSystem instance_action_system(const InstanceFile& f);
std::pair<GradedPresentation, std::vector<KoszulSequenceEntry>> instance_graded(
    const InstanceFile& f);

/// Counterexample payloads and echoes: a generated system as an instance file.
InstanceFile instance_from_system(const ActionSystem& sys);

} // namespace kpk
