#include "tateshift/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "tateshift/chart_render.hpp"
#include "tateshift/cp_rep.hpp"
#include "tateshift/duality_shifts.hpp"
#include "tateshift/errors.hpp"
#include "tateshift/mod_arith.hpp"
#include "tateshift/tate_engine.hpp"

namespace tss {

namespace {

struct Options
{
    std::int64_t prime = 3;
    std::string route = "both";
    std::string group;
    bool json = false;

    std::string window = "-20,20,-10,10";
    int page = 2;
    std::string format = "ascii";
    std::string view = "tate";
    std::string out_path;
    bool overlay = false;

    std::string check;
    std::optional<unsigned> max_degree;
    std::optional<int> k;
    std::int64_t max_prime = 101;

    int sym_k = 1;
    unsigned degree = 1;
    bool orbit_product = false;
};

std::vector<int> k_range(const HeightParams& params, const std::optional<int>& k)
{
    const int n = int(params.n());
    if (k) {
        if (*k < 1 || *k > n - 1)
            throw InvalidArgument(fmt::format("--k must lie in [1, {}] at p = {}", n - 1, params.p()));
        return {*k};
    }
    std::vector<int> ks;
    for (int i = 1; i <= n - 1; ++i)
        ks.push_back(i);
    return ks;
}

int cmd_shifts(const Options& o, std::ostream& out)
{
    const HeightParams params(o.prime);
    const Route route = parse_route(o.route);
    std::vector<ShiftReport> rows;
    if (o.group.empty()) {
        rows = shifts_table(params, route);
    } else {
        const Group g = parse_group(o.group);
        rows.push_back(compute_shift(g, params, g == Group::Cp ? Route::Dual : route));
    }
    if (o.json) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rows)
            arr.push_back(to_json(r));
        out << arr.dump(2) << '\n';
    } else {
        out << format_table(rows);
    }
    return kExitOk;
}

int cmd_chart(const Options& o, std::ostream& out)
{
    ChartSpec spec;
    spec.group = parse_group(o.group.empty() ? "Cp" : o.group);
    spec.p = o.prime;
    spec.page = o.page;
    spec.window = parse_window(o.window);
    spec.format = parse_chart_format(o.format);
    spec.view = parse_chart_view(o.view);
    spec.overlay = o.overlay;
    const std::string text = render(spec);
    if (o.out_path.empty()) {
        out << text;
        return kExitOk;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f || !(f << text) || !f.flush())
        throw std::ios_base::failure("cannot write " + o.out_path);
    return kExitOk;
}

int verify_cancellation(const Options& o, std::ostream& out)
{
    const HeightParams params(o.prime);
    bool all = true;
    for (Group g : {Group::Cp, Group::F, Group::G}) {
        const bool ok = verify_tate_vanishing(g, params);
        all = all && ok;
        out << fmt::format("cancellation {} p={}: E_{} {}\n", to_string(g), params.p(),
                           long_differential_length(params) + 1, ok ? "empty  ok" : "NOT EMPTY  FAIL");
    }
    return all ? kExitOk : kExitVerificationFailed;
}

int verify_congruence(const Options& o, std::ostream& out)
{
    if (o.max_prime < 3 || o.max_prime > std::int64_t(kMaxSupportedPrime))
        throw InvalidArgument(fmt::format("--max-prime must lie in [3, {}]", kMaxSupportedPrime));
    std::size_t checked = 0;
    std::vector<std::int64_t> failed;
    for (std::int64_t p = 3; p <= o.max_prime; p += 2) {
        if (!is_prime(std::uint64_t(p)))
            continue;
        ++checked;
        if (!congruence_check(HeightParams(p)))
            failed.push_back(p);
    }
    out << fmt::format("congruence (n/2)(n-2)p + (p^n-1)/n = 0 mod n^2: {} odd primes <= {}, {} failures\n",
                       checked, o.max_prime, failed.size());
    for (auto p : failed)
        out << fmt::format("  fails at p = {}\n", p);
    return failed.empty() ? kExitOk : kExitVerificationFailed;
}

int verify_nilpotence(const Options& o, std::ostream& out)
{
    const HeightParams params(o.prime);
    bool all = true;
    for (int k : k_range(params, o.k)) {
        const unsigned max_deg = o.max_degree.value_or(default_max_degree(params, k));
        const NilpotenceResult r = vk_nilpotence(params, k, max_deg);
        all = all && r.holds;
        out << fmt::format("nilpotence p={} k={} degrees<={}: z_k^{} kills Tate cohomology  {}\n", params.p(), k,
                           max_deg, k + 1, r.holds ? "ok" : "FAIL");
        for (auto m : r.failing_degrees)
            out << fmt::format("  nonzero composite out of S_{}\n", m);
    }
    return all ? kExitOk : kExitVerificationFailed;
}

int verify_freeness(const Options& o, std::ostream& out)
{
    const HeightParams params(o.prime);
    bool all = true;
    for (int k : k_range(params, o.k)) {
        const unsigned max_deg = o.max_degree.value_or(default_max_degree(params, k));
        const FreenessPatternResult r = freeness_pattern(params, k, max_deg);
        all = all && r.holds();
        out << fmt::format("freeness p={} k={} degrees<={}: {} degrees checked  {}\n", params.p(), k, max_deg,
                           r.checked_degrees.size(), r.holds() ? "ok" : "FAIL");
        for (auto m : r.non_free_degrees)
            out << fmt::format("  S_{} is not free\n", m);
    }
    return all ? kExitOk : kExitVerificationFailed;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    if (o.check == "cancellation")
        return verify_cancellation(o, out);
    if (o.check == "congruence")
        return verify_congruence(o, out);
    if (o.check == "lemma32" || o.check == "nilpotence")
        return verify_nilpotence(o, out);
    if (o.check == "freeness")
        return verify_freeness(o, out);
    throw InvalidArgument(fmt::format("unknown check '{}'", o.check));
}

std::string format_blocks(const JordanProfile& j)
{
    std::string out;
    for (std::size_t a = 0; a < j.blocks.size();) {
        std::size_t b = a;
        while (b < j.blocks.size() && j.blocks[b] == j.blocks[a])
            ++b;
        out += fmt::format("{}{}^{}", out.empty() ? "" : " ", j.blocks[a], b - a);
        a = b;
    }
    return out.empty() ? "(none)" : out;
}

int cmd_sympow(const Options& o, std::ostream& out)
{
    const HeightParams params(o.prime);
    if (o.sym_k < 0 || o.sym_k > int(params.n()))
        throw InvalidArgument(fmt::format("--k must lie in [0, {}] at p = {}", params.n(), params.p()));
    SymmetricAlgebra alg(u_k_module(params, o.sym_k));
    const CpModule& m = alg.power(o.degree);
    const JordanProfile jp = jordan_decompose(m);
    const TateDims td = tate_cohomology(m);
    const bool free = jp.is_free(params.p());
    if (o.json) {
        nlohmann::ordered_json j;
        j["p"] = params.p();
        j["k"] = o.sym_k;
        j["degree"] = o.degree;
        j["dim"] = m.dim();
        j["jordan_blocks"] = jp.blocks;
        j["free"] = free;
        j["tate"] = {{"even", td.even_dim}, {"odd", td.odd_dim}};
        if (o.orbit_product)
            j["orbit_product"] = format_orbit_product(params, o.sym_k);
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << fmt::format("S_{}(U_{}) over F_{}: dim {}\n", o.degree, o.sym_k, params.p(), m.dim());
    out << fmt::format("jordan blocks (size^count): {}\n", format_blocks(jp));
    out << fmt::format("free: {}\n", free ? "yes" : "no");
    out << fmt::format("tate cohomology: even {}, odd {}\n", td.even_dim, td.odd_dim);
    if (o.orbit_product)
        out << fmt::format("orbit product of z_{}: {}\n", params.n(), format_orbit_product(params, o.sym_k));
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Tate spectral sequences and duality shifts at height p-1", "tateshift"};
    app.require_subcommand(1);

    auto* shifts = app.add_subcommand("shifts", "Duality shifts k_I for Cp, F and G");
    shifts->add_option("--prime", o.prime, "odd prime p")->capture_default_str();
    shifts->add_option("--route", o.route, "dual | det | both")->capture_default_str();
    shifts->add_option("--group", o.group, "restrict to one of Cp, F, G");
    shifts->add_flag("--json", o.json, "emit JSON");

    auto* chart = app.add_subcommand("chart", "Render a page of the spectral sequence");
    chart->add_option("--group", o.group, "Cp | F | G (default Cp)");
    chart->add_option("--prime", o.prime, "odd prime p")->capture_default_str();
    chart->add_option("--page", o.page, "page index r >= 2")->capture_default_str();
    chart->add_option("--window", o.window, "xmin,xmax,smin,smax with x = t - s")->capture_default_str();
    chart->add_option("--format", o.format, "ascii | svg | json")->capture_default_str();
    chart->add_option("--view", o.view, "tate | hfpss | hoss")->capture_default_str();
    chart->add_option("--out", o.out_path, "output file (default stdout)");
    chart->add_flag("--overlay", o.overlay, "mark classes that die later");

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("check", o.check, "cancellation | lemma32 | congruence | freeness")->required();
    verify->add_option("--prime", o.prime, "odd prime p")->capture_default_str();
    verify->add_option("--max-degree", o.max_degree, "largest symmetric degree");
    verify->add_option("--k", o.k, "single k in [1, n-1]");
    verify->add_option("--max-prime", o.max_prime, "congruence: largest prime")->capture_default_str();

    auto* sympow = app.add_subcommand("sympow", "Jordan profile and Tate cohomology of S_m(U_k)");
    sympow->add_option("--prime", o.prime, "odd prime p")->capture_default_str();
    sympow->add_option("--k", o.sym_k, "k in [0, n]")->capture_default_str();
    sympow->add_option("--degree", o.degree, "symmetric degree m")->capture_default_str();
    sympow->add_flag("--json", o.json, "emit JSON");
    sympow->add_flag("--orbit-product", o.orbit_product, "also print the orbit product in S_p");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        err << app.help();
        return kExitInvalid;
    }

    try {
        if (*shifts)
            return cmd_shifts(o, out);
        if (*chart)
            return cmd_chart(o, out);
        if (*verify)
            return cmd_verify(o, out);
        return cmd_sympow(o, out);
    } catch (const VerificationFailure& e) {
        err << "verification failed: " << e.what() << '\n';
        return kExitVerificationFailed;
    } catch (const InvalidArgument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace tss
