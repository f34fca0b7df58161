#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tateshift/mod_arith.hpp"
#include "tateshift/tate_engine.hpp"

namespace tss {

enum class Route { Dual, Det, Both };

std::string_view to_string(Route r);
Route parse_route(std::string_view name);

/// Why a shift holds: the class carrying it and its degree in the frame used.
struct Certificate
{
    std::string label;
    Bidegree degree;
    std::string note;
};

struct ShiftReport
{
    Group group = Group::Cp;
    std::uint32_t p = 3;
    Route route = Route::Dual;
    std::int64_t k_I = 0;
    std::int64_t periodicity = 0;
    Certificate certificate;
    std::optional<Certificate> det_certificate;  // Route::Both only
    std::optional<bool> agreement;               // Route::Both only
};

/// Periodicity of E^hG in t: 2p^2 for Cp, 2n^2p^2 for F and G.
std::int64_t periodicity(Group g, const HeightParams& params);

/// Every class of E_2 is killed by E_{2n^2+2}, checked on the fundamental domain
/// and on a window of three periods of each lattice generator.
bool verify_tate_vanishing(Group g, const HeightParams& params);

/// Shift read off the zero line of the dual sequence in the frame of its
/// n-fold suspension.
ShiftReport shift_dual_route(Group g, const HeightParams& params);
/// Shift from the determinant twist (F and G only; throws InvalidArgument for Cp).
ShiftReport shift_det_route(Group g, const HeightParams& params);
/// Both routes; throws VerificationFailure when they disagree.
ShiftReport shift_both(Group g, const HeightParams& params);
ShiftReport compute_shift(Group g, const HeightParams& params, Route route);

/// Cp, F and G at one prime. Cp always uses the dual route.
std::vector<ShiftReport> shifts_table(const HeightParams& params, Route route = Route::Both);

nlohmann::ordered_json to_json(const ShiftReport& r);
std::string format_table(const std::vector<ShiftReport>& rows);

}  // namespace tss
