#include "tateshift/duality_shifts.hpp"

#include <cctype>

#include <fmt/format.h>

#include "tateshift/errors.hpp"

namespace tss {

std::string_view to_string(Route r)
{
    switch (r) {
    case Route::Dual:
        return "dual";
    case Route::Det:
        return "det";
    case Route::Both:
        return "both";
    }
    return "?";
}

Route parse_route(std::string_view name)
{
    std::string lower;
    for (char c : name)
        lower.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "dual")
        return Route::Dual;
    if (lower == "det")
        return Route::Det;
    if (lower == "both")
        return Route::Both;
    throw InvalidArgument(fmt::format("unknown route '{}' (expected dual, det or both)", name));
}

std::int64_t periodicity(Group g, const HeightParams& params)
{
    const std::int64_t p = params.p(), n = params.n();
    return g == Group::Cp ? 2 * p * p : 2 * n * n * p * p;
}

bool verify_tate_vanishing(Group g, const HeightParams& params)
{
    const SpectralSequence ss = run_to_einfty(g, params);
    if (!ss.einfty().empty())
        return false;
    const Lattice& lat = ss.lattice();
    for (const auto& x : fundamental_domain(g, params))
        for (std::int64_t a = -1; a <= 1; ++a)
            for (std::int64_t b = -1; b <= 1; ++b) {
                const MonomialClass y = lat.translate(x, a, b);
                if (ss.fate(y).fate == Fate::Survives)
                    return false;
            }
    return true;
}

namespace {

// Zero-line d_{2n+1}-cycles of the dual sequence (that are not boundaries)
// with j in [j_lo, j_hi).
std::vector<MonomialClass> dual_zero_line_cycles(const SpectralSequence& dual, std::int64_t j_lo, std::int64_t j_hi)
{
    const int r = short_differential_length(dual.params());
    std::vector<MonomialClass> out;
    for (const auto& x : zero_line_classes(dual, j_lo, j_hi)) {
        auto in = dual.incoming(x);
        if (dual.is_cycle(x, r) && !(in && in->r == r))
            out.push_back(x);
    }
    return out;
}

}  // namespace

ShiftReport shift_dual_route(Group g, const HeightParams& params)
{
    const std::int64_t p = params.p(), n = params.n();
    const std::int64_t period = periodicity(g, params);
    const SpectralSequence dual = dualize(run_to_einfty(g, params), n);

    // Two periods of zero-line classes: expect one cycle in each, a period apart.
    const std::int64_t span = p;
    auto cycles = dual_zero_line_cycles(dual, -span, span);
    if (cycles.size() != 2)
        throw InconsistencyError(fmt::format("expected 2 zero-line cycles in two periods, found {}", cycles.size()));
    const std::int64_t t_a = dual.bidegree(cycles[0]).t, t_b = dual.bidegree(cycles[1]).t;
    if (t_b - t_a != period)
        throw InconsistencyError(
            fmt::format("zero-line cycles at t = {} and {} are not one period ({}) apart", t_a, t_b, period));

    MonomialClass chosen = cycles[0];
    for (const auto& c : cycles) {
        const std::int64_t t = dual.bidegree(c).t;
        if (t >= 0 && t < period)
            chosen = c;
    }
    const Bidegree d = dual.bidegree(chosen);
    if (d.s != 0)
        throw InconsistencyError("zero-line cycle off the zero line");

    auto in = dual.incoming(chosen);
    std::string note = "d_{2n+1}-cycle on the zero line";
    if (in && in->r == long_differential_length(params))
        note += fmt::format("; dual of {} which supports d_{}", label(chosen), in->r);

    ShiftReport rep;
    rep.group = g;
    rep.p = params.p();
    rep.route = Route::Dual;
    rep.periodicity = period;
    rep.k_I = floor_mod(d.t - n, period);
    rep.certificate = {dual.label(chosen), d, note};
    return rep;
}

ShiftReport shift_det_route(Group g, const HeightParams& params)
{
    if (g == Group::Cp)
        throw InvalidArgument("the determinant route applies to F and G only");
    const std::int64_t p = params.p(), n = params.n();
    const std::int64_t period = periodicity(g, params);
    const TwistedPage tp = twisted_e2(g, params);
    const std::int64_t k = tp.delta_exponent;

    // Delta y is the d_{2n+1}-cycle carrying the shift.
    const Fp m = find_cycle_generator(tp.twist_lambda, tp.gamma, params);
    if (m != 1)
        throw InconsistencyError(fmt::format("cycle generator is Delta^{} y, expected Delta y", m));
    const std::int64_t t = 2 * p * n * n + 2 * p * k;

    ShiftReport rep;
    rep.group = g;
    rep.p = params.p();
    rep.route = Route::Det;
    rep.periodicity = period;
    rep.k_I = floor_mod(t - n, period);
    rep.certificate = {fmt::format("D y, y = d^{}", k), {0, t},
                       fmt::format("twist lambda = {}, gamma = {}", tp.twist_lambda, tp.gamma)};
    return rep;
}

ShiftReport shift_both(Group g, const HeightParams& params)
{
    ShiftReport dual = shift_dual_route(g, params);
    if (g == Group::Cp)
        return dual;
    const ShiftReport det = shift_det_route(g, params);
    dual.route = Route::Both;
    dual.det_certificate = det.certificate;
    dual.agreement = dual.k_I == det.k_I;
    if (!*dual.agreement)
        throw VerificationFailure(fmt::format("{} at p = {}: dual route gives {}, det route gives {}",
                                              to_string(g), params.p(), dual.k_I, det.k_I));
    return dual;
}

ShiftReport compute_shift(Group g, const HeightParams& params, Route route)
{
    switch (route) {
    case Route::Dual:
        return shift_dual_route(g, params);
    case Route::Det:
        return shift_det_route(g, params);
    case Route::Both:
        return shift_both(g, params);
    }
    throw InvalidArgument("unknown route");
}

std::vector<ShiftReport> shifts_table(const HeightParams& params, Route route)
{
    std::vector<ShiftReport> rows;
    rows.push_back(shift_dual_route(Group::Cp, params));
    for (Group g : {Group::F, Group::G})
        rows.push_back(compute_shift(g, params, route));
    return rows;
}

namespace {

nlohmann::ordered_json certificate_json(const Certificate& c)
{
    nlohmann::ordered_json j;
    j["class"] = c.label;
    j["s"] = c.degree.s;
    j["t"] = c.degree.t;
    j["note"] = c.note;
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const ShiftReport& r)
{
    nlohmann::ordered_json j;
    j["group"] = std::string(to_string(r.group));
    j["p"] = r.p;
    j["route"] = std::string(to_string(r.route));
    j["k_I"] = r.k_I;
    j["periodicity"] = r.periodicity;
    j["certificate"] = certificate_json(r.certificate);
    if (r.det_certificate)
        j["det_certificate"] = certificate_json(*r.det_certificate);
    if (r.agreement)
        j["agreement"] = *r.agreement;
    return j;
}

std::string format_table(const std::vector<ShiftReport>& rows)
{
    std::string out = fmt::format("{:<6}{:<4}{:<7}{:>8}{:>13}  {}\n", "group", "p", "route", "k_I", "periodicity",
                                  "certificate");
    for (const auto& r : rows) {
        out += fmt::format("{:<6}{:<4}{:<7}{:>8}{:>13}  {} at (s,t) = ({},{})", to_string(r.group), r.p,
                           to_string(r.route), r.k_I, r.periodicity, r.certificate.label, r.certificate.degree.s,
                           r.certificate.degree.t);
        if (r.agreement)
            out += *r.agreement ? "  [routes agree]" : "  [ROUTES DISAGREE]";
        out += '\n';
    }
    return out;
}

}  // namespace tss
