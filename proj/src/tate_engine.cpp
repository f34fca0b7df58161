#include "tateshift/tate_engine.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <fmt/format.h>

#include "tateshift/errors.hpp"

namespace tss {

std::string_view to_string(Group g)
{
    switch (g) {
    case Group::Cp:
        return "Cp";
    case Group::F:
        return "F";
    case Group::G:
        return "G";
    }
    return "?";
}

Group parse_group(std::string_view name)
{
    std::string lower;
    for (char c : name)
        lower.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "cp")
        return Group::Cp;
    if (lower == "f")
        return Group::F;
    if (lower == "g")
        return Group::G;
    throw InvalidArgument(fmt::format("unknown group '{}' (expected Cp, F or G)", name));
}

namespace {

bool is_cp(Group g) { return g == Group::Cp; }

std::int64_t n_of(const HeightParams& params) { return params.n(); }
std::int64_t p_of(const HeightParams& params) { return params.p(); }

Fp residue(std::int64_t a, const HeightParams& params) { return Fp(floor_mod(a, p_of(params))); }

void append_factor(std::string& out, std::string_view sym, std::int64_t e)
{
    if (e == 0)
        return;
    if (!out.empty())
        out += ' ';
    out += sym;
    if (e != 1)
        out += fmt::format("^{}", e);
}

}  // namespace

Bidegree bidegree(const MonomialClass& x, const HeightParams& params)
{
    const std::int64_t p = p_of(params), n = n_of(params);
    const std::int64_t s = x.eps + 2 * x.i;
    if (is_cp(x.family))
        return {s, -2 * x.eps + 2 * p * x.j};
    return {s, 2 * n * x.eps + 2 * p * n * x.i + 2 * p * n * n * x.j};
}

std::optional<MonomialClass> class_at(Group family, const HeightParams& params, Bidegree d)
{
    const std::int64_t p = p_of(params), n = n_of(params);
    MonomialClass x;
    x.family = family;
    x.eps = int(floor_mod(d.s, 2));
    x.i = (d.s - x.eps) / 2;
    std::int64_t rest = 0, unit = 0;
    if (is_cp(family)) {
        rest = d.t + 2 * x.eps;
        unit = 2 * p;
    } else {
        rest = d.t - 2 * n * x.eps - 2 * p * n * x.i;
        unit = 2 * p * n * n;
    }
    if (floor_mod(rest, unit) != 0)
        return std::nullopt;
    x.j = rest / unit;
    return x;
}

std::string label(const MonomialClass& x)
{
    std::string out;
    const bool cp = is_cp(x.family);
    append_factor(out, cp ? "a" : "A", x.eps);
    append_factor(out, cp ? "b" : "B", x.i);
    append_factor(out, cp ? "d" : "D", x.j);
    return out.empty() ? "1" : out;
}

MonomialClass restrict_to_cp(const MonomialClass& x, const HeightParams& params)
{
    if (is_cp(x.family))
        return x;
    const std::int64_t n = n_of(params);
    return {x.eps, x.i, x.eps + n * x.i + n * n * x.j, Group::Cp};
}

Lattice Lattice::for_group(Group g, const HeightParams& params)
{
    Lattice l;
    if (is_cp(g))
        l.gens_ = {Step{1, n_of(params)}, Step{0, p_of(params)}};
    else
        l.gens_ = {Step{1, 0}, Step{0, p_of(params)}};
    return l;
}

MonomialClass Lattice::reduce(const MonomialClass& x) const
{
    MonomialClass r = x;
    r.i = 0;
    r.j = floor_mod(x.j - x.i * gens_[0].dj, gens_[1].dj);
    return r;
}

MonomialClass Lattice::translate(const MonomialClass& x, std::int64_t along_first, std::int64_t along_second) const
{
    MonomialClass r = x;
    r.i += along_first * gens_[0].di + along_second * gens_[1].di;
    r.j += along_first * gens_[0].dj + along_second * gens_[1].dj;
    return r;
}

bool Lattice::same_orbit(const MonomialClass& a, const MonomialClass& b) const { return reduce(a) == reduce(b); }

bool Page::contains(const MonomialClass& x) const
{
    if (x.family != group)
        return false;
    return std::binary_search(survivors.begin(), survivors.end(), lattice.reduce(x));
}

std::vector<MonomialClass> fundamental_domain(Group g, const HeightParams& params)
{
    std::vector<MonomialClass> out;
    for (int eps = 0; eps <= 1; ++eps)
        for (std::int64_t j = 0; j < p_of(params); ++j)
            out.push_back({eps, 0, j, g});
    std::sort(out.begin(), out.end());
    return out;
}

Page e2_page(Group g, const HeightParams& params)
{
    return Page{g, params, 2, Lattice::for_group(g, params), g == Group::G ? 1 : int(params.n()),
                fundamental_domain(g, params)};
}

Page advance(Page page, int r)
{
    if (r < page.r)
        throw InvalidArgument(fmt::format("cannot move page E_{} back to E_{}", page.r, r));
    page.r = r;
    return page;
}

int short_differential_length(const HeightParams& params) { return int(2 * params.n() + 1); }
int long_differential_length(const HeightParams& params) { return int(2 * params.n_squared() + 1); }

Fp short_coefficient_closed_form(std::int64_t m, std::int64_t i, const HeightParams& params)
{
    return residue(m + i, params);
}

Fp short_coefficient_leibniz(std::int64_t m, std::int64_t i, const HeightParams& params)
{
    // d(delta) = a delta^2 b^n and d(b delta^n) = 0.
    const Fp d_delta = 1;
    const Fp d_b_delta_n = residue(n_of(params) + 1, params);
    if (d_b_delta_n != 0)
        throw InconsistencyError("b delta^n is not a d_{2n+1}-cycle");
    const std::int64_t rest = m - n_of(params) * i;
    return Fp((std::uint64_t(residue(rest, params)) * d_delta) % params.p());
}

std::optional<DiffTarget> differential(const Page& page, const MonomialClass& x)
{
    if (!page.contains(x))
        throw InvalidArgument(fmt::format("{} is not a class of E_{}", label(x), page.r));
    const HeightParams& params = page.params;
    const std::int64_t n = n_of(params);
    const bool cp = is_cp(page.group);

    if (page.r == short_differential_length(params)) {
        if (x.eps == 1)
            return std::nullopt;
        const Fp c = cp ? short_coefficient_closed_form(x.j, x.i, params) : residue(x.j, params);
        if (c == 0)
            return std::nullopt;
        MonomialClass y = cp ? MonomialClass{1, x.i + n, x.j + 1, page.group}
                             : MonomialClass{1, x.i + n, x.j - 1, page.group};
        return DiffTarget{y, c};
    }
    if (page.r == long_differential_length(params)) {
        if (x.eps == 0)
            return std::nullopt;
        const std::int64_t nn = n * n;
        MonomialClass y = cp ? MonomialClass{0, x.i + nn + 1, x.j + n - 1, page.group}
                             : MonomialClass{0, x.i + nn + 1, x.j - n, page.group};
        return DiffTarget{y, 1};
    }
    throw InvalidArgument(fmt::format("no differential model for d_{} at p = {}", page.r, params.p()));
}

DifferentialMap differential_map(const Page& page)
{
    DifferentialMap d{page.r, {}};
    for (const auto& x : page.survivors)
        if (auto y = differential(page, x))
            d.pairs.push_back({x, y->target, y->coeff});
    return d;
}

namespace {

nlohmann::ordered_json class_json(const MonomialClass& x, const HeightParams& params)
{
    const Bidegree d = bidegree(x, params);
    return {{"eps", x.eps}, {"i", x.i}, {"j", x.j}, {"s", d.s}, {"t", d.t}};
}

}  // namespace

nlohmann::ordered_json page_json(const Page& page, const DifferentialMap* diff)
{
    nlohmann::ordered_json j;
    j["group"] = std::string(to_string(page.group));
    j["p"] = page.params.p();
    j["r"] = page.r;
    auto lat = nlohmann::ordered_json::array();
    for (const auto& g : page.lattice.generators())
        lat.push_back({{"di", g.di}, {"dj", g.dj}});
    j["lattice"] = lat;
    auto dom = nlohmann::ordered_json::array();
    for (const auto& x : page.survivors)
        dom.push_back(class_json(x, page.params));
    j["fundamental_domain"] = dom;
    auto diffs = nlohmann::ordered_json::array();
    if (diff)
        for (const auto& pr : diff->pairs)
            diffs.push_back({{"source", class_json(pr.source, page.params)},
                             {"target", class_json(pr.target, page.params)},
                             {"coeff", pr.coeff},
                             {"r", diff->r}});
    j["differentials"] = diffs;
    return j;
}

Page turn_page(const Page& page, const DifferentialMap& diff)
{
    if (diff.r != page.r)
        throw InconsistencyError(fmt::format("d_{} applied to E_{}", diff.r, page.r));
    const Bidegree law{page.r, page.r - 1};
    std::set<MonomialClass> sources, targets;
    for (const auto& pr : diff.pairs) {
        if (!page.contains(pr.source) || !page.contains(pr.target))
            throw InconsistencyError(fmt::format("d_{}: {} -> {} leaves the page", page.r, label(pr.source),
                                                 label(pr.target)));
        if (pr.coeff % page.params.p() == 0)
            throw InconsistencyError("zero coefficient recorded as a differential");
        const Bidegree a = bidegree(pr.source, page.params), b = bidegree(pr.target, page.params);
        if (Bidegree{b.s - a.s, b.t - a.t} != law)
            throw InconsistencyError(fmt::format("d_{}: {} -> {} violates the bidegree law", page.r,
                                                 label(pr.source), label(pr.target)));
        if (!sources.insert(page.lattice.reduce(pr.source)).second)
            throw InconsistencyError("two differentials out of one orbit");
        if (!targets.insert(page.lattice.reduce(pr.target)).second)
            throw InconsistencyError(fmt::format("d_{} is not injective on orbits", page.r));
    }
    for (const auto& t : targets)
        if (sources.count(t))
            throw InconsistencyError(fmt::format("d_{} o d_{} != 0 at {}", page.r, page.r, label(t)));

    Page next = page;
    next.r = page.r + 1;
    next.survivors.clear();
    for (const auto& x : page.survivors)
        if (!sources.count(x) && !targets.count(x))
            next.survivors.push_back(x);
    return next;
}

SpectralSequence::SpectralSequence(Group g, const HeightParams& params, std::vector<Page> pages,
                                   std::vector<SsEdge> edges)
    : group_(g), params_(params), lattice_(Lattice::for_group(g, params)), pages_(std::move(pages)),
      edges_(std::move(edges))
{
    if (pages_.empty())
        throw InvalidArgument("a spectral sequence needs at least one page");
    index_edges();
    check_bidegree_law();
}

void SpectralSequence::index_edges()
{
    by_source_.clear();
    by_target_.clear();
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (!by_source_.emplace(lattice_.reduce(edges_[e].source), e).second)
            throw InconsistencyError("two differentials out of one orbit");
        if (!by_target_.emplace(lattice_.reduce(edges_[e].target), e).second)
            throw InconsistencyError("two differentials into one orbit");
    }
}

void SpectralSequence::check_bidegree_law() const
{
    for (const auto& e : edges_) {
        const Bidegree a = bidegree(e.source), b = bidegree(e.target);
        if (b.s - a.s != e.r || b.t - a.t != e.r - 1)
            throw InconsistencyError(
                fmt::format("d_{}: {} -> {} violates the bidegree law", e.r, label(e.source), label(e.target)));
    }
}

Bidegree SpectralSequence::bidegree(const MonomialClass& x) const
{
    const Bidegree d = tss::bidegree(x, params_);
    if (!dual_)
        return d;
    const std::int64_t n = params_.n();
    return {n - d.s - 1, n + offset_ - d.t};
}

std::optional<MonomialClass> SpectralSequence::class_at(Bidegree d) const
{
    if (dual_) {
        const std::int64_t n = params_.n();
        d = {n - 1 - d.s, n + offset_ - d.t};
    }
    return tss::class_at(group_, params_, d);
}

std::string SpectralSequence::label(const MonomialClass& x) const
{
    return dual_ ? "(" + tss::label(x) + ")*" : tss::label(x);
}

namespace {

SsEdge translated(const SsEdge& e, const MonomialClass& from, const MonomialClass& to)
{
    SsEdge out = e;
    const std::int64_t di = to.i - from.i, dj = to.j - from.j;
    out.source.i += di;
    out.source.j += dj;
    out.target.i += di;
    out.target.j += dj;
    return out;
}

}  // namespace

std::optional<SsEdge> SpectralSequence::outgoing(const MonomialClass& x) const
{
    auto it = by_source_.find(lattice_.reduce(x));
    if (it == by_source_.end() || x.family != group_)
        return std::nullopt;
    const SsEdge& e = edges_[it->second];
    return translated(e, e.source, x);
}

std::optional<SsEdge> SpectralSequence::incoming(const MonomialClass& x) const
{
    auto it = by_target_.find(lattice_.reduce(x));
    if (it == by_target_.end() || x.family != group_)
        return std::nullopt;
    const SsEdge& e = edges_[it->second];
    return translated(e, e.target, x);
}

ClassFate SpectralSequence::fate(const MonomialClass& x) const
{
    ClassFate f;
    f.cls = x;
    if (auto e = outgoing(x)) {
        f.fate = Fate::SupportsDifferential;
        f.r = e->r;
        f.partner = e->target;
        f.coeff = e->coeff;
    } else if (auto e = incoming(x)) {
        f.fate = Fate::HitByDifferential;
        f.r = e->r;
        f.partner = e->source;
        f.coeff = e->coeff;
    }
    return f;
}

std::vector<ClassFate> SpectralSequence::fates() const
{
    std::vector<ClassFate> out;
    for (const auto& x : fundamental_domain(group_, params_))
        out.push_back(fate(x));
    return out;
}

bool SpectralSequence::is_cycle(const MonomialClass& x, int r) const
{
    auto out = outgoing(x);
    auto in = incoming(x);
    if ((out && out->r < r) || (in && in->r < r))
        return false;
    return !(out && out->r == r);
}

SpectralSequence run_to_einfty(Group g, const HeightParams& params)
{
    std::vector<Page> pages;
    std::vector<SsEdge> edges;
    pages.push_back(e2_page(g, params));
    for (int r : {short_differential_length(params), long_differential_length(params)}) {
        Page current = advance(pages.back(), r);
        DifferentialMap d = differential_map(current);
        for (const auto& pr : d.pairs)
            edges.push_back({r, pr.source, pr.target, pr.coeff});
        pages.push_back(turn_page(current, d));
    }
    return SpectralSequence(g, params, std::move(pages), std::move(edges));
}

SpectralSequence dualize(const SpectralSequence& ss, std::int64_t internal_offset)
{
    if (ss.dual_ && internal_offset != ss.offset_)
        throw InvalidArgument(fmt::format("sequence is dual with offset {}, cannot undo with offset {}",
                                          ss.offset_, internal_offset));
    SpectralSequence out = ss;
    out.dual_ = !ss.dual_;
    out.offset_ = out.dual_ ? internal_offset : 0;
    for (auto& e : out.edges_)
        std::swap(e.source, e.target);
    out.index_edges();
    out.check_bidegree_law();
    return out;
}

std::vector<MonomialClass> zero_line_classes(const SpectralSequence& ss, std::int64_t j_lo, std::int64_t j_hi)
{
    const std::int64_t s_orig = ss.is_dual() ? std::int64_t(ss.params().n()) - 1 : 0;
    const int eps = int(floor_mod(s_orig, 2));
    const std::int64_t i = (s_orig - eps) / 2;
    std::vector<MonomialClass> out;
    for (std::int64_t j = j_lo; j < j_hi; ++j)
        out.push_back({eps, i, j, ss.group()});
    std::sort(out.begin(), out.end(), [&](const MonomialClass& a, const MonomialClass& b) {
        return ss.bidegree(a).t < ss.bidegree(b).t;
    });
    return out;
}

TruncatedView::TruncatedView(const SpectralSequence& ss, std::int64_t s_min, std::int64_t s_max, bool homological)
    : ss_(ss), s_min_(s_min), s_max_(s_max), homological_(homological)
{
}

bool TruncatedView::contains(const MonomialClass& x) const
{
    const std::int64_t s = ss_.bidegree(x).s;
    return s >= s_min_ && s <= s_max_;
}

std::optional<SsEdge> TruncatedView::outgoing(const MonomialClass& x) const
{
    if (!contains(x))
        return std::nullopt;
    auto e = ss_.outgoing(x);
    if (e && contains(e->target))
        return e;
    return std::nullopt;
}

std::optional<SsEdge> TruncatedView::incoming(const MonomialClass& x) const
{
    if (!contains(x))
        return std::nullopt;
    auto e = ss_.incoming(x);
    if (e && contains(e->source))
        return e;
    return std::nullopt;
}

bool TruncatedView::survives(const MonomialClass& x) const
{
    return contains(x) && !outgoing(x) && !incoming(x);
}

Bidegree TruncatedView::regraded(const MonomialClass& x) const
{
    const Bidegree d = ss_.bidegree(x);
    return homological_ ? Bidegree{-d.s - 1, d.t} : d;
}

TruncatedView TruncatedView::intersect(std::int64_t s_min, std::int64_t s_max, bool homological) const
{
    return TruncatedView(ss_, std::max(s_min_, s_min), std::min(s_max_, s_max), homological_ || homological);
}

TruncatedView hfpss_view(const SpectralSequence& ss) { return TruncatedView(ss, 0, kUnbounded, false); }
TruncatedView hoss_view(const SpectralSequence& ss) { return TruncatedView(ss, -kUnbounded, -1, true); }
TruncatedView hfpss_view(const TruncatedView& v) { return v.intersect(0, kUnbounded, false); }
TruncatedView hoss_view(const TruncatedView& v) { return v.intersect(-kUnbounded, -1, true); }

Fp find_cycle_generator(Fp lambda, Fp gamma, const HeightParams& params)
{
    const Fp p = params.p();
    if (gamma % p == 0)
        throw InvalidArgument("gamma must be nonzero mod p");
    const std::uint64_t k = (std::uint64_t(p - lambda % p) % p) * inverse_mod(gamma % p, p);
    return Fp(k % p);
}

Fp TwistedPage::short_coefficient(std::int64_t m) const
{
    const std::int64_t p = base.params.p();
    return Fp(floor_mod(floor_mod(m, p) * std::int64_t(gamma) + std::int64_t(twist_lambda), p));
}

std::vector<std::int64_t> invariant_delta_powers(const HeightParams& params, std::int64_t lo, std::int64_t hi)
{
    const std::int64_t nn = std::int64_t(params.n_squared());
    const std::int64_t e = std::int64_t(det_tau_exponent(params));
    std::vector<std::int64_t> out;
    for (std::int64_t j = lo; j <= hi; ++j)
        if (floor_mod(-p_of(params) * j + e, nn) == 0)
            out.push_back(j);
    return out;
}

TwistedPage twisted_e2(Group g, const HeightParams& params)
{
    if (is_cp(g))
        throw InvalidArgument("the twisted page is defined for F and G only");
    const std::int64_t p = p_of(params), n = n_of(params);
    const std::int64_t k = invariant_delta_exponent(params).representative;
    const int r = short_differential_length(params);

    Page page = advance(e2_page(g, params), r);
    auto dDelta = differential(page, MonomialClass{0, 0, 1, g});
    if (!dDelta || dDelta->target != MonomialClass{1, n, 0, g})
        throw InconsistencyError("d_{2n+1}(Delta) is not a multiple of alpha beta^n");
    const Fp gamma = dDelta->coeff;

    const SpectralSequence dual = dualize(run_to_einfty(g, params), n);
    std::vector<MonomialClass> cycles;
    for (const auto& x : zero_line_classes(dual, 0, p)) {
        auto in = dual.incoming(x);
        if (dual.is_cycle(x, r) && !(in && in->r == r))
            cycles.push_back(x);
    }
    if (cycles.size() != 1)
        throw InconsistencyError(
            fmt::format("expected one zero-line d_{}-cycle per period, found {}", r, cycles.size()));

    const std::int64_t t0 = dual.bidegree(cycles.front()).t;
    const std::int64_t delta_t = 2 * p * n * n;
    if (floor_mod(t0 - 2 * p * k, delta_t) != 0)
        throw InconsistencyError("zero-line cycle is not a Delta-power multiple of the generator");
    const std::int64_t m = (t0 - 2 * p * k) / delta_t;

    TwistedPage tp{e2_page(g, params), fmt::format("y = d^{}", k), k, 0, gamma, {0, 2 * p * k}};
    tp.twist_lambda = Fp(floor_mod(-m * std::int64_t(gamma), p));
    if (tp.short_coefficient(m) != 0)
        throw InconsistencyError("twist coefficient does not make Delta^m y a cycle");
    return tp;
}

}  // namespace tss
