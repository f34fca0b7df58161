#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include <fmt/format.h>

#include "support.hpp"
#include "tateshift/chart_render.hpp"
#include "tateshift/cp_rep.hpp"
#include "tateshift/duality_shifts.hpp"
#include "tateshift/mod_arith.hpp"
#include "tateshift/tate_engine.hpp"

using namespace tss;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<std::int64_t> kPrimes{3, 5, 7};
const std::vector<Group> kGroups{Group::Cp, Group::F, Group::G};

struct Outcome
{
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome shift_cp()
{
    std::string detail;
    bool pass = true;
    for (auto p : kPrimes) {
        const auto t0 = Clock::now();
        const std::int64_t k = compute_shift(Group::Cp, HeightParams(p), Route::Dual).k_I;
        const double dt = seconds_since(t0);
        pass = pass && k == (p - 1) * (p - 1) && dt < 1.0;
        detail += fmt::format("p={}: k_I={} ({:.3f}s) ", p, k, dt);
    }
    return {pass, detail};
}

Outcome shift_fg()
{
    std::string detail;
    bool pass = true;
    for (auto p : kPrimes) {
        const std::int64_t n = p - 1;
        const auto t0 = Clock::now();
        for (Group g : {Group::F, Group::G}) {
            const ShiftReport dual = shift_dual_route(g, HeightParams(p));
            const ShiftReport det = shift_det_route(g, HeightParams(p));
            pass = pass && dual.k_I == n * p * p + n * n && det.k_I == dual.k_I;
            detail += fmt::format("{} p={}: {}/{} ", to_string(g), p, dual.k_I, det.k_I);
        }
        pass = pass && seconds_since(t0) < 1.0;
    }
    return {pass, detail};
}

Outcome tate_vanishing()
{
    bool pass = true;
    std::size_t sequences = 0;
    for (auto p : kPrimes)
        for (Group g : kGroups) {
            const SpectralSequence ss = run_to_einfty(g, HeightParams(p));
            pass = pass && ss.einfty().empty() && ss.einfty().r == long_differential_length(HeightParams(p)) + 1 &&
                   verify_tate_vanishing(g, HeightParams(p));
            ++sequences;
        }
    return {pass, fmt::format("{} sequences, E_(2n^2+2) empty in each", sequences)};
}

Outcome survivor_pattern()
{
    const HeightParams h(3);
    const Page e5 = advance(e2_page(Group::Cp, h), short_differential_length(h));
    const Page e6 = turn_page(e5, differential_map(e5));
    std::set<MonomialClass> survivors, weight_zero;
    // Three periods of the lattice in each direction.
    for (int eps = 0; eps <= 1; ++eps)
        for (std::int64_t i = -3 * 3; i < 3 * 3; ++i)
            for (std::int64_t j = -3 * 3; j < 3 * 3; ++j) {
                const MonomialClass x{eps, i, j, Group::Cp};
                if (e6.contains(x))
                    survivors.insert(x);
                if (floor_mod(i + j, 3) == 0)
                    weight_zero.insert(x);
            }
    return {survivors == weight_zero,
            fmt::format("{} survivors, {} weight-0 classes", survivors.size(), weight_zero.size())};
}

Outcome nilpotence_suite()
{
    const auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    for (auto p : {3, 5}) {
        const HeightParams h(p);
        for (int k = 1; k <= int(h.n()) - 1; ++k) {
            const unsigned deg = p == 3 ? 27 : (k == 1 ? 20 : 25);
            const bool nil = vk_nilpotence_check(h, k, deg);
            const bool fr = freeness_pattern(h, k, deg).holds();
            pass = pass && nil && fr;
            detail += fmt::format("p={} k={} deg<={}: {}{} ", p, k, deg, nil ? "N" : "n!", fr ? "F" : "f!");
        }
    }
    const double dt = seconds_since(t0);
    return {pass && dt < 60.0, detail + fmt::format("({:.2f}s)", dt)};
}

Outcome congruence_suite()
{
    const auto t0 = Clock::now();
    std::size_t checked = 0;
    bool pass = true;
    for (std::int64_t p = 3; p <= 101; p += 2)
        if (is_prime(std::uint64_t(p))) {
            ++checked;
            pass = pass && congruence_check(HeightParams(p));
        }
    const double dt = seconds_since(t0);
    return {pass && dt < 1.0 && checked == 25, fmt::format("{} odd primes ({:.3f}s)", checked, dt)};
}

bool page_laws(const SpectralSequence& ss, std::size_t& checked)
{
    const HeightParams& h = ss.params();
    bool ok = true;
    for (const Page& page : ss.pages()) {
        for (int r : {short_differential_length(h), long_differential_length(h)}) {
            if (r < page.r || page.empty())
                continue;
            const Page at = advance(page, r);
            for (const auto& d : differential_map(at).pairs) {
                ++checked;
                const Bidegree s = bidegree(d.source, h), t = bidegree(d.target, h);
                ok = ok && t.s - s.s == r && t.t - s.t == r - 1 && d.coeff != 0;
                if (at.contains(d.target))
                    ok = ok && !differential(at, d.target);
                for (std::int64_t a = -2; a <= 2; ++a)
                    for (std::int64_t b = -2; b <= 2; ++b) {
                        const auto moved = differential(at, page.lattice.translate(d.source, a, b));
                        ok = ok && moved && moved->target == page.lattice.translate(d.target, a, b) &&
                             moved->coeff == d.coeff;
                    }
            }
            break;
        }
    }
    return ok;
}

Outcome property_suites()
{
    bool laws = true, involution = true, coeffs = true, tate = true;
    std::size_t pairs = 0;
    for (auto p : kPrimes) {
        const HeightParams h(p);
        for (Group g : kGroups) {
            const SpectralSequence ss = run_to_einfty(g, h);
            laws = laws && page_laws(ss, pairs);
            for (std::int64_t offset : {std::int64_t(0), std::int64_t(h.n())}) {
                const SpectralSequence back = dualize(dualize(ss, offset), offset);
                involution = involution && !back.is_dual() && back.edges() == ss.edges();
                for (const auto& x : fundamental_domain(g, h))
                    involution = involution && back.bidegree(x) == ss.bidegree(x);
            }
        }
        for (std::int64_t m = -3 * p; m <= 3 * p; ++m)
            for (std::int64_t i = -3 * p; i <= 3 * p; ++i)
                coeffs = coeffs && short_coefficient_closed_form(m, i, h) == short_coefficient_leibniz(m, i, h);
    }
    std::mt19937 rng(20240611);
    std::size_t free_count = 0;
    const std::vector<Fp> primes{3, 5, 7};
    for (int trial = 0; trial < 200; ++trial) {
        const Fp p = primes[std::size_t(trial) % primes.size()];
        const auto rm = fixtures::random_module(p, 40, rng);
        const bool free = jordan_decompose(rm.module).is_free(p);
        const TateDims td = tate_cohomology(rm.module);
        const bool oracle_free = std::all_of(rm.blocks.begin(), rm.blocks.end(), [&](auto b) { return b == p; });
        tate = tate && free == oracle_free && free == (td.even_dim == 0 && td.odd_dim == 0);
        free_count += free;
    }
    return {laws && involution && coeffs && tate,
            fmt::format("laws {} ({} pairs), involution {}, coefficients {}, freeness/Tate {} (200 modules, {} free)",
                        laws ? "ok" : "FAIL", pairs, involution ? "ok" : "FAIL", coeffs ? "ok" : "FAIL",
                        tate ? "ok" : "FAIL", free_count)};
}

Outcome periodicity_suite()
{
    bool pass = true;
    std::string detail;
    for (auto p : kPrimes) {
        const HeightParams h(p);
        for (Group g : kGroups) {
            const TruncatedView v = hfpss_view(run_to_einfty(g, h));
            std::vector<std::int64_t> ts;
            for (const auto& x : zero_line_classes(v.sequence(), -3 * p, 3 * p)) {
                const bool expect = floor_mod(x.j, p) == 0;
                pass = pass && v.survives(x) == expect;
                if (v.survives(x))
                    ts.push_back(v.sequence().bidegree(x).t);
            }
            const std::int64_t period = periodicity(g, h);
            const std::int64_t expect_period = g == Group::Cp ? 2 * p * p : 2 * h.n() * h.n() * p * p;
            pass = pass && period == expect_period && ts.size() == 6;
            for (std::size_t k = 1; k < ts.size(); ++k)
                pass = pass && ts[k] - ts[k - 1] == period;
            if (p == 5)
                detail += fmt::format("{}: {} ", to_string(g), period);
        }
    }
    return {pass, "p=5 periods " + detail};
}

Outcome chart_goldens()
{
    bool pass = true;
    std::string detail;
    for (auto [g, file] : {std::pair{Group::Cp, "cp_p5_e2.txt"}, std::pair{Group::F, "f_p5_e2.txt"}}) {
        ChartSpec spec;
        spec.group = g;
        spec.p = 5;
        spec.page = 2;
        const std::string golden = fixtures::read_file(std::string(TATESHIFT_GOLDEN_DIR) + "/" + file);
        const bool same = render(spec) == golden;
        const Chart c = build_chart(spec);
        const std::int64_t p = 5, n = 4;
        std::size_t expected = 0;
        bool dots_ok = true;
        for (const auto& d : c.dots) {
            const std::int64_t t = d.x + d.s, eps = floor_mod(d.s, 2), i = (d.s - eps) / 2;
            const std::int64_t rest = g == Group::Cp ? t + 2 * eps : t - 2 * n * eps - 2 * p * n * i;
            dots_ok = dots_ok && floor_mod(rest, g == Group::Cp ? 2 * p : 2 * p * n * n) == 0;
        }
        for (std::int64_t s = c.window.s_min; s <= c.window.s_max; ++s)
            for (std::int64_t x = c.window.x_min; x <= c.window.x_max; ++x)
                expected += class_at(g, HeightParams(p), {s, x + s}).has_value();
        dots_ok = dots_ok && c.dots.size() == expected;
        pass = pass && same && dots_ok;
        detail += fmt::format("{}: {} dots, golden {} ", file, c.dots.size(), same ? "match" : "DIFFER");
    }
    return {pass, detail};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"shift Cp: k_I = n^2", shift_cp},
        {"shift F, G: k_I = np^2 + n^2, routes agree", shift_fg},
        {"Tate vanishing at E_(2n^2+2)", tate_vanishing},
        {"survivors after d_(2n+1) at p=3 have weight 0", survivor_pattern},
        {"nilpotence and freeness suite", nilpotence_suite},
        {"congruence for odd p <= 101", congruence_suite},
        {"property suites", property_suites},
        {"zero-line periodicity", periodicity_suite},
        {"chart goldens", chart_goldens},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << fmt::format("[{}] {}. {}: {}\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail)
                  << std::flush;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
